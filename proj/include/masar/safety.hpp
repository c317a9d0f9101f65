#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "masar/clients.hpp"

namespace masar {

enum class Decision { allow, block_input, block_output };

const char* to_string(Decision d);

struct ModerationVerdict {
    double harmlessness = 5.0;        // 1..5
    double cultural_alignment = 5.0;  // 1..5
    Decision decision = Decision::allow;
    std::string reason;
    std::string stage;         // "input" | "output"
    std::string reason_class;  // "blocklist" | "semantic" | "harmlessness" |
                               // "cultural_alignment" | "screen_unavailable" |
                               // "moderation_unavailable"
};

// One pattern per line: "<rule_id><whitespace><pattern>". '#' starts a
// comment line. Patterns match as normalized substrings. The file is
// hot-reloadable: the loader re-reads when the mtime changes.
class Blocklist {
  public:
    struct Rule {
        std::string id;
        std::string pattern;  // normalized
    };

    static Blocklist load_file(const std::string& path);
    static Blocklist parse(const std::string& content);

    std::optional<Rule> match(const std::string& text) const;
    size_t size() const;
    // Re-reads the backing file if it changed on disk; no-op for in-memory lists.
    void refresh();

  private:
    mutable std::unique_ptr<std::mutex> mu_ = std::make_unique<std::mutex>();
    std::string path_;
    std::filesystem::file_time_type mtime_{};
    std::vector<Rule> rules_;
};

struct ScreenResult {
    bool allowed = false;
    ModerationVerdict verdict;
    std::vector<std::string> log;  // every check that ran, in order
};

// Input interception: blocklist first, then the semantic screen's
// harmlessness score against the threshold. A dead screen client blocks
// (fail-closed) with its own reason code.
ScreenResult screen_input(const std::string& input, Blocklist& blocklist, ModerationClient* semantic_screen,
                          double semantic_threshold = 3.0);

// Output verification: allow iff harmlessness >= first AND cultural
// alignment >= second (inclusive at the boundary). Fail-closed on client
// outage.
ModerationVerdict screen_output(const std::string& output, ModerationClient& moderation,
                                std::pair<double, double> thresholds = {3.0, 3.0});

// Localized refusal templates keyed by (stage, reason class, locale), with
// fallback to the stage default and then to the English template.
class SafetyTemplates {
  public:
    static SafetyTemplates builtin_default();
    static SafetyTemplates load_file(const std::string& path);
    static SafetyTemplates parse(const std::string& json_text);

    std::string lookup(const std::string& stage, const std::string& reason_class,
                       const std::string& locale) const;

  private:
    // key: stage + "/" + reason_class + "/" + locale
    std::map<std::string, std::string> table_;
};

// Precondition: verdict.decision != allow. Never echoes blocked content.
std::string substitute_safe_response(const ModerationVerdict& verdict, const std::string& locale,
                                     const SafetyTemplates& templates);

}  // namespace masar
