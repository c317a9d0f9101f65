#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <deque>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "masar/clients.hpp"
#include "masar/text.hpp"

namespace masar::mocks {

// Returns scripted responses: exact-prompt table first, then substring
// rules, then a queue, then the fallback. Counts calls so tests can assert
// which stages touched a model.
class ScriptedTextClient : public TextClient {
  public:
    ScriptedTextClient() = default;
    explicit ScriptedTextClient(std::string fallback) : fallback_(std::move(fallback)) {}

    void on_exact(const std::string& prompt, const std::string& response) {
        std::lock_guard lock(mu_);
        exact_[prompt] = response;
    }
    void on_contains(const std::string& needle, const std::string& response) {
        std::lock_guard lock(mu_);
        contains_.emplace_back(needle, response);
    }
    void push_response(const std::string& response) {
        std::lock_guard lock(mu_);
        queue_.push_back(response);
    }
    void fail_always(const std::string& message = "mock client down") {
        std::lock_guard lock(mu_);
        fail_message_ = message;
    }

    std::string complete(const std::string& prompt) override {
        std::lock_guard lock(mu_);
        ++calls_;
        last_prompt_ = prompt;
        if (!fail_message_.empty()) throw ClientUnavailable(fail_message_);
        if (auto it = exact_.find(prompt); it != exact_.end()) return it->second;
        for (const auto& [needle, response] : contains_)
            if (prompt.find(needle) != std::string::npos) return response;
        if (!queue_.empty()) {
            std::string r = queue_.front();
            queue_.pop_front();
            return r;
        }
        return fallback_;
    }

    int calls() const { return calls_; }
    std::string last_prompt() const {
        std::lock_guard lock(mu_);
        return last_prompt_;
    }

  private:
    mutable std::mutex mu_;
    std::map<std::string, std::string> exact_;
    std::vector<std::pair<std::string, std::string>> contains_;
    std::deque<std::string> queue_;
    std::string fallback_;
    std::string fail_message_;
    std::atomic<int> calls_{0};
    std::string last_prompt_;
};

// Deterministic feature-hashing embedder: each normalized token lands in one
// dimension with a hash-derived sign, vector L2-normalized. No model, fully
// reproducible, and lexically-overlapping texts come out similar.
class HashEmbedder : public Embedder {
  public:
    explicit HashEmbedder(size_t dim = 64) : dim_(dim) {}

    size_t dimension() const override { return dim_; }

    std::vector<std::vector<float>> embed(const std::vector<std::string>& texts) override {
        std::vector<std::vector<float>> out;
        out.reserve(texts.size());
        for (const auto& t : texts) out.push_back(embed_one(t));
        return out;
    }

    std::vector<float> embed_one(const std::string& text) const {
        std::vector<float> v(dim_, 0.0f);
        for (const auto& tok : text::normalize_and_tokenize(text)) {
            std::uint64_t h = fnv1a(tok);
            size_t idx = static_cast<size_t>(h % dim_);
            float sign = ((h >> 32) & 1u) ? 1.0f : -1.0f;
            v[idx] += sign;
        }
        double norm = 0.0;
        for (float x : v) norm += static_cast<double>(x) * x;
        if (norm > 0.0) {
            float inv = static_cast<float>(1.0 / std::sqrt(norm));
            for (float& x : v) x *= inv;
        }
        return v;
    }

    static std::uint64_t fnv1a(const std::string& s) {
        std::uint64_t h = 1469598103934665603ull;
        for (unsigned char c : s) {
            h ^= c;
            h *= 1099511628211ull;
        }
        return h;
    }

  private:
    size_t dim_;
};

// Embedder with per-text overrides on top of a HashEmbedder base. Lets a
// test force "doc B is semantically close to query Q" without lexical overlap.
class ScriptedEmbedder : public Embedder {
  public:
    explicit ScriptedEmbedder(size_t dim = 8) : dim_(dim), base_(dim) {}

    void set_vector(const std::string& text, std::vector<float> v) { overrides_[text] = std::move(v); }

    size_t dimension() const override { return dim_; }

    std::vector<std::vector<float>> embed(const std::vector<std::string>& texts) override {
        std::vector<std::vector<float>> out;
        for (const auto& t : texts) {
            auto it = overrides_.find(t);
            out.push_back(it != overrides_.end() ? it->second : base_.embed_one(t));
        }
        return out;
    }

  private:
    size_t dim_;
    HashEmbedder base_;
    std::map<std::string, std::vector<float>> overrides_;
};

// Embedder that misbehaves on purpose (dimension drift) for error-path tests.
class BrokenEmbedder : public Embedder {
  public:
    size_t dimension() const override { return 4; }
    std::vector<std::vector<float>> embed(const std::vector<std::string>& texts) override {
        std::vector<std::vector<float>> out;
        size_t d = 4;
        for (const auto& t : texts) {
            (void)t;
            out.push_back(std::vector<float>(d, 0.5f));
            d = 3;  // second vector comes back short
        }
        return out;
    }
};

// Fixed-score moderation client, optionally failing.
class StaticModerationClient : public ModerationClient {
  public:
    explicit StaticModerationClient(ModerationScores scores = {}) : scores_(scores) {}

    void set_scores(ModerationScores s) { scores_ = s; }
    void fail_always(const std::string& message = "moderation down") { fail_message_ = message; }

    ModerationScores score(const std::string& text) override {
        (void)text;
        ++calls_;
        if (!fail_message_.empty()) throw ClientUnavailable(fail_message_);
        return scores_;
    }

    int calls() const { return calls_; }

  private:
    ModerationScores scores_;
    std::string fail_message_;
    std::atomic<int> calls_{0};
};

// Keyword-triggered scorer for running the service without any model:
// benign text scores (5,5); configured trigger substrings pull a dimension
// down. Matching happens on the normalized form.
class KeywordModerationClient : public ModerationClient {
  public:
    void add_trigger(const std::string& needle, ModerationScores scores) {
        triggers_.emplace_back(text::normalize_arabic(needle), scores);
    }

    ModerationScores score(const std::string& input) override {
        ++calls_;
        std::string norm = text::normalize_arabic(input);
        ModerationScores out;
        for (const auto& [needle, s] : triggers_) {
            if (norm.find(needle) != std::string::npos) {
                out.harmlessness = std::min(out.harmlessness, s.harmlessness);
                out.cultural_alignment = std::min(out.cultural_alignment, s.cultural_alignment);
            }
        }
        return out;
    }

    int calls() const { return calls_; }

  private:
    std::vector<std::pair<std::string, ModerationScores>> triggers_;
    std::atomic<int> calls_{0};
};

// Deterministic parameter extractor for running the service with no model.
// Speaks the same prompt contract as a real extractor client: it pulls the
// text between "QUERY:\n" and "\nEND_QUERY" and answers with the documented
// JSON shape for whichever extraction the prompt asks for. Arabic and
// English keywords; dual forms count as 2, bare plurals as 3.
class RuleBasedExtractorClient : public TextClient {
  public:
    std::string complete(const std::string& prompt) override;

  private:
    static std::string query_of(const std::string& prompt);
    static std::string extract_zakat(const std::string& query);
    static std::string extract_estate(const std::string& query);
};

}  // namespace masar::mocks
