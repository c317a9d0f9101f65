#include "masar/intent.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "masar/text.hpp"

namespace masar {

const char* to_string(Intent intent) {
    switch (intent) {
        case Intent::fiqh_reasoning: return "fiqh_reasoning";
        case Intent::quran_retrieval: return "quran_retrieval";
        case Intent::hadith_verification: return "hadith_verification";
        case Intent::zakat_calculation: return "zakat_calculation";
        case Intent::inheritance_computation: return "inheritance_computation";
        case Intent::supplication_lookup: return "supplication_lookup";
        case Intent::calendar_query: return "calendar_query";
        case Intent::prayer_times: return "prayer_times";
        case Intent::general_knowledge: return "general_knowledge";
    }
    return "general_knowledge";
}

std::optional<Intent> intent_from_string(const std::string& label) {
    for (Intent intent : kAllIntents)
        if (label == to_string(intent)) return intent;
    return std::nullopt;
}

bool default_retrieval_required(Intent intent) {
    switch (intent) {
        case Intent::zakat_calculation:
        case Intent::inheritance_computation:
        case Intent::calendar_query:
        case Intent::prayer_times:
            return false;  // deterministic computations
        default:
            return true;
    }
}

// Deterministic computations outrank the almanac, which outranks scripture
// retrieval, which outranks the general fallback.
static const std::vector<Intent> kDefaultPriority = {
    Intent::zakat_calculation, Intent::inheritance_computation,
    Intent::prayer_times,      Intent::calendar_query,
    Intent::quran_retrieval,   Intent::hadith_verification,
    Intent::supplication_lookup, Intent::fiqh_reasoning,
    Intent::general_knowledge,
};

RuleTable RuleTable::parse(const std::string& json_text) {
    nlohmann::json j = nlohmann::json::parse(json_text);
    RuleTable table;
    table.version_ = j.value("version", "unversioned");

    std::vector<Intent> priority;
    if (j.contains("priority")) {
        for (const auto& label : j["priority"]) {
            auto intent = intent_from_string(label.get<std::string>());
            if (!intent) throw InvalidInput("rule table priority has unknown label: " + label.dump());
            priority.push_back(*intent);
        }
    } else {
        priority = kDefaultPriority;
    }

    const auto& rules = j.at("rules");
    for (Intent intent : priority) {
        std::vector<std::string> patterns;
        if (auto it = rules.find(to_string(intent)); it != rules.end())
            for (const auto& p : *it) patterns.push_back(text::normalize_arabic(p.get<std::string>()));
        table.ordered_rules_.emplace_back(intent, std::move(patterns));
    }
    return table;
}

RuleTable RuleTable::load_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInput("cannot open rule table: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

RuleTable RuleTable::builtin_default() {
    return parse(R"({
      "version": "builtin-1",
      "rules": {
        "zakat_calculation": ["زكا", "نصاب", "zakat", "nisab"],
        "inheritance_computation": ["ميراث", "ورث", "تركه", "مواريث", "inheritance", "inherit", "estate of", "heirs"],
        "prayer_times": ["اوقات الصلاه", "مواقيت", "وقت الصلاه", "صلاه الفجر", "القبله", "اتجاه القبله", "prayer time", "prayer times", "qibla", "fajr time", "isha time"],
        "calendar_query": ["هجري", "التقويم", "المقابل بالهجري", "hijri", "islamic calendar", "gregorian date", "islamic date", "متى رمضان", "متى عيد"],
        "quran_retrieval": ["ايه", "سوره", "القران", "قران", "verse", "surah", "quran", "ayah"],
        "hadith_verification": ["حديث", "هل صح", "رواه", "hadith", "narrated", "is it authentic"],
        "supplication_lookup": ["دعاء", "اذكار", "ادعيه", "dua", "supplication", "dhikr", "adhkar"],
        "fiqh_reasoning": ["حكم", "هل يجوز", "حلال", "حرام", "ما الحكم", "ruling", "permissible", "is it allowed", "is it halal", "is it haram"],
        "general_knowledge": []
      }
    })");
}

std::optional<Intent> RuleTable::match(const std::string& query) const {
    std::string norm = text::normalize_arabic(query);
    for (const auto& [intent, patterns] : ordered_rules_)
        for (const auto& p : patterns)
            if (!p.empty() && norm.find(p) != std::string::npos) return intent;
    return std::nullopt;
}

std::string build_rephrase_prompt(const std::string& query, const std::vector<ConversationTurn>& history) {
    std::ostringstream out;
    out << "Rewrite the final user message as a standalone question, resolving any references "
           "to the conversation history. Reply with the rewritten question only.\n";
    out << "HISTORY:\n";
    for (const auto& turn : history) {
        const char* role = turn.role == Role::user ? "user" : turn.role == Role::assistant ? "assistant" : "tool";
        out << role << ": " << turn.text << "\n";
    }
    out << "QUERY:\n" << query << "\nEND_QUERY\n";
    return out.str();
}

RephraseResult rephrase(const std::string& query, const std::vector<ConversationTurn>& history,
                        TextClient* client) {
    if (text::trim(query).empty()) throw EmptyQuery();
    if (history.empty() || client == nullptr) return {query, false, {}};
    try {
        std::string rewritten = text::trim(client->complete(build_rephrase_prompt(query, history)));
        if (rewritten.empty()) return {query, true, "rephrase client returned empty output"};
        return {rewritten, false, {}};
    } catch (const std::exception& e) {
        return {query, true, std::string("rephrase client failed: ") + e.what()};
    }
}

std::string build_classifier_prompt(const std::string& query, const std::vector<ConversationTurn>& history) {
    std::ostringstream out;
    out << "Classify the query into exactly one intent label out of:\n";
    for (Intent intent : kAllIntents) out << "  " << to_string(intent) << "\n";
    out << "Reply with a single JSON object: {\"label\": string, \"confidence\": number in [0,1], "
           "\"rationale\": string, \"sub_questions\": [string...], \"retrieval_required\": boolean}. "
           "Use sub_questions only for compound queries.\n";
    if (!history.empty()) {
        out << "HISTORY:\n";
        for (const auto& turn : history)
            out << (turn.role == Role::user ? "user" : turn.role == Role::assistant ? "assistant" : "tool")
                << ": " << turn.text << "\n";
    }
    out << "QUERY:\n" << query << "\nEND_QUERY\n";
    return out.str();
}

IntentDecision IntentRouter::classify(const std::string& query,
                                      const std::vector<ConversationTurn>& history) const {
    if (text::trim(query).empty()) throw EmptyQuery();

    if (auto intent = table_.match(query)) {
        IntentDecision decision;
        decision.label = *intent;
        decision.confidence = 1.0;
        decision.rationale = "rule layer: trigger pattern for " + std::string(to_string(*intent));
        decision.retrieval_required = default_retrieval_required(*intent);
        decision.source = IntentDecision::Source::rule_layer;
        return decision;
    }
    return model_classify(query, history);
}

IntentDecision IntentRouter::model_classify(const std::string& query,
                                            const std::vector<ConversationTurn>& history) const {
    IntentDecision fallback;
    fallback.label = Intent::general_knowledge;
    fallback.confidence = 0.0;
    fallback.retrieval_required = true;
    fallback.source = IntentDecision::Source::model_layer;

    if (classifier_ == nullptr) {
        fallback.rationale = "no classifier client configured; defaulting to general_knowledge";
        return fallback;
    }

    std::string raw;
    try {
        if (classifier_->concurrent_safe()) {
            raw = classifier_->complete(build_classifier_prompt(query, history));
        } else {
            std::lock_guard lock(serial_mu_);
            raw = classifier_->complete(build_classifier_prompt(query, history));
        }
    } catch (const std::exception& e) {
        fallback.rationale = std::string("classifier client failed (") + e.what() +
                             "); falling back to general_knowledge";
        return fallback;
    }

    nlohmann::json j = nlohmann::json::parse(raw, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("label") || !j["label"].is_string()) {
        fallback.rationale = "classifier output was not a valid decision object; falling back";
        return fallback;
    }
    auto intent = intent_from_string(j["label"].get<std::string>());
    if (!intent) {
        fallback.rationale = "classifier emitted unknown label '" + j["label"].get<std::string>() +
                             "'; falling back to general_knowledge";
        return fallback;
    }

    IntentDecision decision;
    decision.label = *intent;
    decision.confidence = j.value("confidence", 0.5);
    if (decision.confidence < 0.0) decision.confidence = 0.0;
    if (decision.confidence > 1.0) decision.confidence = 1.0;
    decision.rationale = j.value("rationale", "model layer classification");
    if (j.contains("sub_questions") && j["sub_questions"].is_array())
        for (const auto& q : j["sub_questions"])
            if (q.is_string()) decision.sub_questions.push_back(q.get<std::string>());
    decision.retrieval_required = j.value("retrieval_required", default_retrieval_required(*intent));
    decision.source = IntentDecision::Source::model_layer;
    return decision;
}

}  // namespace masar
