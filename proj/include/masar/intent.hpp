#pragma once

#include <array>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "masar/clients.hpp"
#include "masar/errors.hpp"

namespace masar {

enum class Intent {
    fiqh_reasoning,
    quran_retrieval,
    hadith_verification,
    zakat_calculation,
    inheritance_computation,
    supplication_lookup,
    calendar_query,
    prayer_times,
    general_knowledge,
};

inline constexpr int kIntentCount = 9;
inline constexpr std::array<Intent, kIntentCount> kAllIntents = {
    Intent::fiqh_reasoning,       Intent::quran_retrieval,  Intent::hadith_verification,
    Intent::zakat_calculation,    Intent::inheritance_computation,
    Intent::supplication_lookup,  Intent::calendar_query,   Intent::prayer_times,
    Intent::general_knowledge,
};

const char* to_string(Intent intent);
std::optional<Intent> intent_from_string(const std::string& label);

enum class Role { user, assistant, tool };

struct ConversationTurn {
    Role role = Role::user;
    std::string text;
    int index = 0;
};

struct IntentDecision {
    enum class Source { rule_layer, model_layer };

    Intent label = Intent::general_knowledge;
    double confidence = 0.0;  // [0,1]
    std::string rationale;
    std::vector<std::string> sub_questions;  // non-empty only for compound queries
    bool retrieval_required = false;
    Source source = Source::model_layer;
};

struct RephraseResult {
    std::string text;
    bool degraded = false;    // client failed; original passed through
    std::string warning;
};

// Per-intent trigger patterns, matched as normalized substrings against the
// normalized query, evaluated in a fixed priority order. Versioned config:
// { "version": "...", "priority": [label...], "rules": { label: [pattern...] } }
class RuleTable {
  public:
    static RuleTable load_file(const std::string& path);
    static RuleTable parse(const std::string& json_text);
    static RuleTable builtin_default();

    std::optional<Intent> match(const std::string& query) const;
    const std::string& version() const { return version_; }

  private:
    std::string version_ = "builtin";
    // (intent, normalized patterns) in priority order
    std::vector<std::pair<Intent, std::vector<std::string>>> ordered_rules_;
};

// Resolve follow-up queries against history. With empty history the input is
// returned unchanged and the client is never consulted; client failure
// degrades to pass-through with a warning.
RephraseResult rephrase(const std::string& query, const std::vector<ConversationTurn>& history,
                        TextClient* client);

std::string build_rephrase_prompt(const std::string& query, const std::vector<ConversationTurn>& history);
std::string build_classifier_prompt(const std::string& query, const std::vector<ConversationTurn>& history);

// Hybrid classifier: rule layer first (confidence pinned to 1.0), model layer
// otherwise. Unknown labels and client failures fall back to
// general_knowledge with confidence 0 and an explanatory rationale.
class IntentRouter {
  public:
    IntentRouter(RuleTable table, TextClient* classifier)
        : table_(std::move(table)), classifier_(classifier) {}

    IntentDecision classify(const std::string& query, const std::vector<ConversationTurn>& history) const;

    const RuleTable& rules() const { return table_; }

  private:
    IntentDecision model_classify(const std::string& query,
                                  const std::vector<ConversationTurn>& history) const;

    RuleTable table_;
    TextClient* classifier_;
    mutable std::mutex serial_mu_;  // taken only for clients that are not concurrent-safe
};

// Whether handlers for this label are expected to pull corpus evidence.
bool default_retrieval_required(Intent intent);

}  // namespace masar
