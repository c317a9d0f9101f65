#include "masar/safety.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "masar/errors.hpp"
#include "masar/text.hpp"

namespace masar {

const char* to_string(Decision d) {
    switch (d) {
        case Decision::allow: return "allow";
        case Decision::block_input: return "block_input";
        case Decision::block_output: return "block_output";
    }
    return "allow";
}

Blocklist Blocklist::parse(const std::string& content) {
    Blocklist list;
    std::istringstream in(content);
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string trimmed = text::trim(line);
        if (trimmed.empty() || trimmed[0] == '#') continue;
        size_t ws = trimmed.find_first_of(" \t");
        if (ws == std::string::npos)
            throw InvalidInput("blocklist line " + std::to_string(line_no) + ": expected '<id> <pattern>'");
        Rule rule;
        rule.id = trimmed.substr(0, ws);
        rule.pattern = text::normalize_arabic(text::trim(trimmed.substr(ws + 1)));
        if (rule.pattern.empty())
            throw InvalidInput("blocklist line " + std::to_string(line_no) + ": empty pattern");
        list.rules_.push_back(std::move(rule));
    }
    return list;
}

Blocklist Blocklist::load_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInput("cannot open blocklist: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    Blocklist list = parse(buf.str());
    list.path_ = path;
    std::error_code ec;
    list.mtime_ = std::filesystem::last_write_time(path, ec);
    return list;
}

void Blocklist::refresh() {
    std::lock_guard lock(*mu_);
    if (path_.empty()) return;
    std::error_code ec;
    auto mtime = std::filesystem::last_write_time(path_, ec);
    if (ec || mtime == mtime_) return;
    std::ifstream in(path_, std::ios::binary);
    if (!in) return;  // keep the last good list
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        rules_ = parse(buf.str()).rules_;
        mtime_ = mtime;
    } catch (const InvalidInput&) {
        // malformed edit: keep serving the previous rules
    }
}

std::optional<Blocklist::Rule> Blocklist::match(const std::string& input) const {
    std::string norm = text::normalize_arabic(input);
    std::lock_guard lock(*mu_);
    for (const auto& rule : rules_)
        if (norm.find(rule.pattern) != std::string::npos) return rule;
    return std::nullopt;
}

size_t Blocklist::size() const {
    std::lock_guard lock(*mu_);
    return rules_.size();
}

ScreenResult screen_input(const std::string& input, Blocklist& blocklist, ModerationClient* semantic_screen,
                          double semantic_threshold) {
    ScreenResult result;
    result.verdict.stage = "input";

    blocklist.refresh();
    if (auto rule = blocklist.match(input)) {
        result.allowed = false;
        result.verdict.decision = Decision::block_input;
        result.verdict.reason = "blocklist rule " + rule->id + " matched";
        result.verdict.reason_class = "blocklist";
        result.verdict.harmlessness = 1.0;
        result.verdict.cultural_alignment = 1.0;
        result.log.push_back("blocklist: matched rule " + rule->id);
        return result;
    }
    result.log.push_back("blocklist: no match against " + std::to_string(blocklist.size()) + " rules");

    if (semantic_screen == nullptr) {
        result.allowed = true;
        result.verdict.decision = Decision::allow;
        result.log.push_back("semantic screen: not configured, skipped");
        return result;
    }

    try {
        ModerationScores scores = semantic_screen->score(input);
        result.verdict.harmlessness = scores.harmlessness;
        result.verdict.cultural_alignment = scores.cultural_alignment;
        result.log.push_back("semantic screen: harmlessness " + std::to_string(scores.harmlessness) +
                             " vs threshold " + std::to_string(semantic_threshold));
        if (scores.harmlessness >= semantic_threshold) {
            result.allowed = true;
            result.verdict.decision = Decision::allow;
        } else {
            result.allowed = false;
            result.verdict.decision = Decision::block_input;
            result.verdict.reason = "semantic screen score below threshold";
            result.verdict.reason_class = "semantic";
        }
    } catch (const std::exception& e) {
        // fail closed
        result.allowed = false;
        result.verdict.decision = Decision::block_input;
        result.verdict.reason = std::string("semantic screen unavailable: ") + e.what();
        result.verdict.reason_class = "screen_unavailable";
        result.verdict.harmlessness = 1.0;
        result.verdict.cultural_alignment = 1.0;
        result.log.push_back("semantic screen: unavailable, blocking");
    }
    return result;
}

ModerationVerdict screen_output(const std::string& output, ModerationClient& moderation,
                                std::pair<double, double> thresholds) {
    ModerationVerdict verdict;
    verdict.stage = "output";
    try {
        ModerationScores scores = moderation.score(output);
        verdict.harmlessness = scores.harmlessness;
        verdict.cultural_alignment = scores.cultural_alignment;
        bool h_ok = scores.harmlessness >= thresholds.first;
        bool c_ok = scores.cultural_alignment >= thresholds.second;
        if (h_ok && c_ok) {
            verdict.decision = Decision::allow;
        } else {
            verdict.decision = Decision::block_output;
            verdict.reason_class = !h_ok ? "harmlessness" : "cultural_alignment";
            verdict.reason = std::string(!h_ok ? "harmlessness" : "cultural alignment") +
                             " score below threshold";
        }
    } catch (const std::exception& e) {
        verdict.decision = Decision::block_output;
        verdict.harmlessness = 1.0;
        verdict.cultural_alignment = 1.0;
        verdict.reason = std::string("moderation unavailable: ") + e.what();
        verdict.reason_class = "moderation_unavailable";
    }
    return verdict;
}

SafetyTemplates SafetyTemplates::builtin_default() {
    return parse(R"({
      "input": {
        "default": {
          "en": "This request cannot be processed.",
          "ar": "لا يمكن معالجة هذا الطلب."
        },
        "blocklist": {
          "en": "This request matches a blocked pattern and cannot be processed.",
          "ar": "هذا الطلب يطابق نمطاً محظوراً ولا يمكن معالجته."
        },
        "semantic": {
          "en": "This request appears unsafe and cannot be processed.",
          "ar": "يبدو هذا الطلب غير آمن ولا يمكن معالجته."
        },
        "screen_unavailable": {
          "en": "Safety screening is temporarily unavailable; please retry later.",
          "ar": "فحص الأمان غير متاح مؤقتاً؛ يرجى المحاولة لاحقاً."
        }
      },
      "output": {
        "default": {
          "en": "The generated answer did not pass safety review and was withheld.",
          "ar": "لم تجتز الإجابة المولدة مراجعة الأمان وتم حجبها."
        },
        "harmlessness": {
          "en": "The generated answer did not pass the safety review and was withheld.",
          "ar": "لم تجتز الإجابة المولدة مراجعة السلامة وتم حجبها."
        },
        "cultural_alignment": {
          "en": "The generated answer did not meet cultural alignment review and was withheld.",
          "ar": "لم تجتز الإجابة المولدة مراجعة الملاءمة الثقافية وتم حجبها."
        },
        "moderation_unavailable": {
          "en": "Output review is temporarily unavailable; the answer was withheld.",
          "ar": "مراجعة المخرجات غير متاحة مؤقتاً؛ تم حجب الإجابة."
        }
      }
    })");
}

SafetyTemplates SafetyTemplates::parse(const std::string& json_text) {
    nlohmann::json j = nlohmann::json::parse(json_text);
    SafetyTemplates templates;
    for (const auto& [stage, classes] : j.items())
        for (const auto& [reason_class, locales] : classes.items())
            for (const auto& [locale, value] : locales.items())
                templates.table_[stage + "/" + reason_class + "/" + locale] = value.get<std::string>();
    return templates;
}

SafetyTemplates SafetyTemplates::load_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInput("cannot open safety templates: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

std::string SafetyTemplates::lookup(const std::string& stage, const std::string& reason_class,
                                    const std::string& locale) const {
    for (const std::string& key : {stage + "/" + reason_class + "/" + locale,
                                   stage + "/" + reason_class + "/en",
                                   stage + "/default/" + locale,
                                   stage + "/default/en"}) {
        auto it = table_.find(key);
        if (it != table_.end()) return it->second;
    }
    return "This request cannot be processed.";
}

std::string substitute_safe_response(const ModerationVerdict& verdict, const std::string& locale,
                                     const SafetyTemplates& templates) {
    if (verdict.decision == Decision::allow)
        throw InvalidInput("substitute_safe_response called with an allow verdict");
    std::string stage = verdict.stage.empty()
                            ? (verdict.decision == Decision::block_input ? "input" : "output")
                            : verdict.stage;
    std::string reason_class = verdict.reason_class.empty() ? "default" : verdict.reason_class;
    return templates.lookup(stage, reason_class, locale);
}

}  // namespace masar
