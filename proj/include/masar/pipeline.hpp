#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "masar/agent.hpp"
#include "masar/astro.hpp"
#include "masar/config.hpp"
#include "masar/intent.hpp"
#include "masar/jurisprudence.hpp"
#include "masar/quran_guard.hpp"
#include "masar/retrieval.hpp"
#include "masar/safety.hpp"

namespace masar {

struct ClientBundle {
    std::shared_ptr<TextClient> rephraser;
    std::shared_ptr<TextClient> classifier;
    std::shared_ptr<TextClient> generator;  // grounded answers + agent loop
    std::shared_ptr<TextClient> extractor;  // zakat / estate parameters
    std::shared_ptr<ModerationClient> input_screen;
    std::shared_ptr<ModerationClient> output_moderation;
    std::shared_ptr<Embedder> embedder;
};

// Deterministic client suite: no model anywhere, the whole service runs and
// answers. Rule-based extractor, keyword moderation, hash embedder.
ClientBundle make_mock_clients(const ServiceConfig& config);

struct AnswerOptions {
    std::string locale;  // empty = service default
    std::optional<double> latitude, longitude;
    std::optional<std::string> date;   // "YYYY-MM-DD"
    std::optional<std::string> today;  // calendar reference day, for determinism
    std::optional<std::string> method;
    double utc_offset_hours = 0.0;
    bool use_agent = false;
    std::optional<int> max_iterations;
};

struct AnswerRequest {
    std::string query;
    std::string conversation_id;
    AnswerOptions options;

    Json to_json() const;
    static AnswerRequest from_json(const Json& j);
};

struct StageError {
    std::string stage;
    std::string code;
    std::string message;
};

struct AnswerResponse {
    std::string text;
    std::optional<IntentDecision> intent;
    RephraseResult rephrase;
    std::optional<ValidationReport> validation;
    ModerationVerdict moderation;  // the verdict that decided the response
    std::string trace_id;          // agent loop trace, when one ran
    std::vector<std::string> stages;  // executed stage names, in order
    std::vector<std::string> warnings;
    bool blocked = false;
    std::optional<StageError> error;
};

Json to_json(const IntentDecision& d);
Json to_json(const ValidationReport& r);
Json to_json(const ModerationVerdict& v);
Json to_json(const AnswerResponse& r);

// The orchestration engine: screen -> rephrase -> classify -> route ->
// handler or agent loop -> scripture guard -> output screen. Owns the
// immutable corpora indexes, the tool registry (nine intent handlers plus
// platform tool stubs) and per-conversation history.
class Engine {
  public:
    Engine(ServiceConfig config, ClientBundle clients);

    AnswerResponse answer(const AnswerRequest& request);
    Json answer_json(const AnswerRequest& request);

    const ToolRegistry& registry() const { return registry_; }
    const ServiceConfig& config() const { return config_; }
    std::map<std::string, std::size_t> corpus_sizes() const;
    std::uint64_t jurisprudence_checksum() const { return jurisprudence_.checksum; }
    const std::string& jurisprudence_version() const { return jurisprudence_.version; }

    void reset_conversation(const std::string& conversation_id);

  private:
    void load_components();
    void register_handlers();
    std::vector<ConversationTurn> history_snapshot(const std::string& conversation_id) const;
    void record_turns(const std::string& conversation_id, const std::string& user_text,
                      const std::string& assistant_text);

    Json handler_args(Intent intent, const std::string& query, const AnswerOptions& options) const;

    ToolResult handle_fiqh(const Json& args);
    ToolResult handle_quran(const Json& args);
    ToolResult handle_hadith(const Json& args);
    ToolResult handle_zakat(const Json& args);
    ToolResult handle_inheritance(const Json& args);
    ToolResult handle_supplication(const Json& args);
    ToolResult handle_calendar(const Json& args);
    ToolResult handle_prayer(const Json& args);
    ToolResult handle_general(const Json& args);

    std::vector<EvidenceDoc> gather_evidence(const SearchIndex& index, const std::string& query) const;

    ServiceConfig config_;
    ClientBundle clients_;

    std::unique_ptr<IntentRouter> router_;
    JurisprudenceConfig jurisprudence_;
    MethodPresets presets_;
    EventTable events_;
    std::unique_ptr<Blocklist> blocklist_;
    SafetyTemplates templates_;

    SearchIndex quran_index_, hadith_index_, supplication_index_, fiqh_index_, general_index_;
    ToolRegistry registry_;

    mutable std::mutex conversations_mu_;
    std::map<std::string, std::vector<ConversationTurn>> conversations_;
};

// "2024-01-15" -> GregorianDate; throws InvalidInput.
GregorianDate parse_iso_date(const std::string& text);

}  // namespace masar
