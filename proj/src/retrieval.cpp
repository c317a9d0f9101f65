#include "masar/retrieval.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "masar/dense_kernels.hpp"
#include "masar/text.hpp"

namespace masar {

namespace {
constexpr double kBm25K1 = 1.2;
constexpr double kBm25B = 0.75;
}  // namespace

const char* to_string(Corpus c) {
    switch (c) {
        case Corpus::quran: return "quran";
        case Corpus::hadith: return "hadith";
        case Corpus::supplication: return "supplication";
        case Corpus::fiqh: return "fiqh";
        case Corpus::general: return "general";
    }
    return "general";
}

std::optional<Corpus> corpus_from_string(const std::string& s) {
    if (s == "quran") return Corpus::quran;
    if (s == "hadith") return Corpus::hadith;
    if (s == "supplication") return Corpus::supplication;
    if (s == "fiqh") return Corpus::fiqh;
    if (s == "general") return Corpus::general;
    return std::nullopt;
}

std::vector<RankedHit> fuse_rrf(const std::vector<std::vector<RankedHit>>& lists, double k_const) {
    std::map<std::string, double> scores;
    for (const auto& list : lists)
        for (const auto& hit : list)
            scores[hit.doc_id] += 1.0 / (k_const + hit.rank);

    std::vector<RankedHit> fused;
    fused.reserve(scores.size());
    for (const auto& [id, score] : scores) fused.push_back({id, score, 0, Channel::fused});
    std::stable_sort(fused.begin(), fused.end(), [](const RankedHit& a, const RankedHit& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.doc_id < b.doc_id;
    });
    for (size_t i = 0; i < fused.size(); ++i) fused[i].rank = static_cast<int>(i + 1);
    return fused;
}

double verify_sequence(const std::string& candidate, const std::string& canonical) {
    auto a = text::normalize_and_tokenize(candidate);
    auto b = text::normalize_and_tokenize(canonical);
    if (a.empty() || b.empty()) throw EmptyText();

    // classic O(|a|*|b|) LCS over tokens, two rows
    std::vector<size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
    for (size_t i = 1; i <= a.size(); ++i) {
        for (size_t j = 1; j <= b.size(); ++j) {
            if (a[i - 1] == b[j - 1])
                cur[j] = prev[j - 1] + 1;
            else
                cur[j] = std::max(prev[j], cur[j - 1]);
        }
        std::swap(prev, cur);
    }
    size_t lcs = prev[b.size()];
    return 2.0 * static_cast<double>(lcs) / static_cast<double>(a.size() + b.size());
}

SearchIndex SearchIndex::build(std::vector<CorpusDocument> docs, Embedder& embedder) {
    SearchIndex index;
    index.docs_ = std::move(docs);
    index.dim_ = embedder.dimension();

    std::vector<std::string> texts;
    texts.reserve(index.docs_.size());
    size_t total_len = 0;
    for (size_t i = 0; i < index.docs_.size(); ++i) {
        const auto& doc = index.docs_[i];
        if (!index.by_id_.emplace(doc.id, i).second) throw DuplicateId(doc.id);

        auto tokens = text::normalize_and_tokenize(doc.text);
        std::map<std::string, int> tf;
        for (const auto& t : tokens) ++tf[t];
        for (const auto& [tok, count] : tf) index.inverted_[tok].push_back({i, count});
        index.doc_lengths_.push_back(tokens.size());
        total_len += tokens.size();
        texts.push_back(doc.text);
    }
    index.avg_doc_length_ = index.docs_.empty() ? 0.0 : static_cast<double>(total_len) / index.docs_.size();

    if (!texts.empty()) {
        auto vectors = embedder.embed(texts);
        if (vectors.size() != texts.size())
            throw EmbedderDimensionMismatch("embedder returned " + std::to_string(vectors.size()) +
                                            " vectors for " + std::to_string(texts.size()) + " texts");
        index.vectors_.resize(texts.size() * index.dim_);
        for (size_t i = 0; i < vectors.size(); ++i) {
            if (vectors[i].size() != index.dim_)
                throw EmbedderDimensionMismatch("embedder dimension drift: declared " +
                                                std::to_string(index.dim_) + ", got " +
                                                std::to_string(vectors[i].size()));
            // store unit vectors so semantic score is cosine
            double norm = 0.0;
            for (float x : vectors[i]) norm += static_cast<double>(x) * x;
            float inv = norm > 0.0 ? static_cast<float>(1.0 / std::sqrt(norm)) : 0.0f;
            for (size_t j = 0; j < index.dim_; ++j) index.vectors_[i * index.dim_ + j] = vectors[i][j] * inv;
        }
    }
    return index;
}

std::vector<RankedHit> SearchIndex::search_fulltext(const std::string& query, size_t k) const {
    auto tokens = text::normalize_and_tokenize(query);
    if (tokens.empty()) throw EmptyQuery();

    std::vector<double> scores(docs_.size(), 0.0);
    std::vector<bool> touched(docs_.size(), false);
    const double n = static_cast<double>(docs_.size());
    // de-dup query tokens; repeated query terms do not double-count
    std::map<std::string, int> qtf;
    for (const auto& t : tokens) ++qtf[t];

    for (const auto& [tok, _] : qtf) {
        auto it = inverted_.find(tok);
        if (it == inverted_.end()) continue;
        const auto& postings = it->second;
        double df = static_cast<double>(postings.size());
        double idf = std::log(1.0 + (n - df + 0.5) / (df + 0.5));
        for (const auto& p : postings) {
            double tf = p.tf;
            double len_norm = kBm25K1 * (1.0 - kBm25B + kBm25B * doc_lengths_[p.doc] / avg_doc_length_);
            scores[p.doc] += idf * (tf * (kBm25K1 + 1.0)) / (tf + len_norm);
            touched[p.doc] = true;
        }
    }

    std::vector<RankedHit> hits;
    for (size_t i = 0; i < docs_.size(); ++i)
        if (touched[i]) hits.push_back({docs_[i].id, scores[i], 0, Channel::fulltext});
    std::stable_sort(hits.begin(), hits.end(), [](const RankedHit& a, const RankedHit& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.doc_id < b.doc_id;
    });
    if (hits.size() > k) hits.resize(k);
    for (size_t i = 0; i < hits.size(); ++i) hits[i].rank = static_cast<int>(i + 1);
    return hits;
}

std::vector<RankedHit> SearchIndex::search_semantic(const std::string& query, size_t k,
                                                    Embedder& embedder) const {
    if (text::trim(query).empty()) throw EmptyQuery();
    if (docs_.empty()) return {};
    auto qvecs = embedder.embed({query});
    if (qvecs.size() != 1 || qvecs[0].size() != dim_)
        throw EmbedderDimensionMismatch("query embedding dimension mismatch");
    auto& q = qvecs[0];
    double norm = 0.0;
    for (float x : q) norm += static_cast<double>(x) * x;
    if (norm > 0.0) {
        float inv = static_cast<float>(1.0 / std::sqrt(norm));
        for (float& x : q) x *= inv;
    }

    std::vector<RankedHit> hits;
    hits.reserve(docs_.size());
    for (size_t i = 0; i < docs_.size(); ++i) {
        float score = dense::dot(q.data(), vectors_.data() + i * dim_, dim_);
        hits.push_back({docs_[i].id, static_cast<double>(score), 0, Channel::semantic});
    }
    std::stable_sort(hits.begin(), hits.end(), [](const RankedHit& a, const RankedHit& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.doc_id < b.doc_id;
    });
    if (hits.size() > k) hits.resize(k);
    for (size_t i = 0; i < hits.size(); ++i) hits[i].rank = static_cast<int>(i + 1);
    return hits;
}

std::vector<RankedHit> SearchIndex::search_hybrid(const std::string& query, size_t k, Embedder& embedder,
                                                  double rrf_k) const {
    if (text::trim(query).empty()) throw EmptyQuery();
    auto fused = fuse_rrf({search_fulltext(query, k), search_semantic(query, k, embedder)}, rrf_k);
    if (fused.size() > k) fused.resize(k);
    return fused;
}

const CorpusDocument* SearchIndex::find(const std::string& doc_id) const {
    auto it = by_id_.find(doc_id);
    return it == by_id_.end() ? nullptr : &docs_[it->second];
}

std::vector<CorpusDocument> parse_corpus_jsonl(const std::string& content) {
    std::vector<CorpusDocument> docs;
    std::istringstream in(content);
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string trimmed = text::trim(line);
        if (trimmed.empty() || trimmed[0] == '#') continue;
        nlohmann::json j = nlohmann::json::parse(trimmed, nullptr, false);
        if (j.is_discarded() || !j.is_object())
            throw InvalidInput("corpus line " + std::to_string(line_no) + " is not a JSON object");
        CorpusDocument doc;
        doc.id = j.value("id", "");
        doc.text = j.value("text", "");
        doc.reference = j.value("reference", "");
        auto corpus = corpus_from_string(j.value("corpus", "general"));
        if (!corpus) throw InvalidInput("corpus line " + std::to_string(line_no) + ": unknown corpus tag");
        doc.corpus = *corpus;
        if (doc.id.empty() || doc.text.empty())
            throw InvalidInput("corpus line " + std::to_string(line_no) + ": id and text are required");
        if (doc.reference.empty() &&
            (doc.corpus == Corpus::quran || doc.corpus == Corpus::hadith || doc.corpus == Corpus::supplication))
            throw InvalidInput("corpus line " + std::to_string(line_no) + ": reference required for " +
                               to_string(doc.corpus));
        if (j.contains("metadata") && j["metadata"].is_object())
            for (auto& [key, value] : j["metadata"].items())
                doc.metadata[key] = value.is_string() ? value.get<std::string>() : value.dump();
        docs.push_back(std::move(doc));
    }
    return docs;
}

std::vector<CorpusDocument> load_corpus_jsonl(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInput("cannot open corpus file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_corpus_jsonl(buf.str());
}

}  // namespace masar
