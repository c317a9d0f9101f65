#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "masar/clients.hpp"
#include "masar/errors.hpp"

namespace masar {

enum class Corpus { quran, hadith, supplication, fiqh, general };

const char* to_string(Corpus c);
std::optional<Corpus> corpus_from_string(const std::string& s);

struct CorpusDocument {
    std::string id;
    Corpus corpus = Corpus::general;
    std::string text;
    std::string reference;  // "1:1" for Quran, collection/number for Hadith
    std::map<std::string, std::string> metadata;
};

enum class Channel { fulltext, semantic, fused };

struct RankedHit {
    std::string doc_id;
    double score = 0.0;
    int rank = 0;  // 1-based, no gaps within one list
    Channel channel = Channel::fused;
};

// Reciprocal rank fusion: score(d) = sum over lists containing d of
// 1/(k_const + rank_d). Descending score, ties broken by ascending doc_id.
std::vector<RankedHit> fuse_rrf(const std::vector<std::vector<RankedHit>>& lists, double k_const = 60.0);

// Token-level similarity in [0,1]: 2L / (|a| + |b|), L the LCS length over
// normalized tokens. 1.0 iff the normalized token streams are equal.
// Throws EmptyText when either side has no tokens after normalization.
double verify_sequence(const std::string& candidate, const std::string& canonical);

// Immutable hybrid index: inverted token index (BM25 full-text channel) plus
// a dense vector store scanned exhaustively (desk-scale corpora). Build is
// single-writer; reads are lock-free afterwards.
class SearchIndex {
  public:
    SearchIndex() = default;

    // Throws DuplicateId / EmbedderDimensionMismatch.
    static SearchIndex build(std::vector<CorpusDocument> docs, Embedder& embedder);

    std::vector<RankedHit> search_fulltext(const std::string& query, size_t k) const;
    std::vector<RankedHit> search_semantic(const std::string& query, size_t k, Embedder& embedder) const;
    // Both channels to depth k, fused with fuse_rrf, top-k with channel=fused.
    std::vector<RankedHit> search_hybrid(const std::string& query, size_t k, Embedder& embedder,
                                         double rrf_k = 60.0) const;

    const CorpusDocument* find(const std::string& doc_id) const;
    const std::vector<CorpusDocument>& docs() const { return docs_; }
    size_t size() const { return docs_.size(); }
    bool empty() const { return docs_.empty(); }

  private:
    struct Posting {
        size_t doc = 0;
        int tf = 0;
    };

    std::vector<CorpusDocument> docs_;
    std::map<std::string, size_t> by_id_;
    std::map<std::string, std::vector<Posting>> inverted_;
    std::vector<size_t> doc_lengths_;
    double avg_doc_length_ = 0.0;
    size_t dim_ = 0;
    std::vector<float> vectors_;  // size() * dim_, row-major, L2-normalized rows
};

// JSONL loader: one document per line, fields {id, corpus, text, reference,
// metadata?}. Lines that are blank or start with '#' are skipped.
std::vector<CorpusDocument> load_corpus_jsonl(const std::string& path);
std::vector<CorpusDocument> parse_corpus_jsonl(const std::string& content);

}  // namespace masar
