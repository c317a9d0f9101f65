#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "masar/clients.hpp"
#include "masar/intent.hpp"

namespace masar {

using Json = nlohmann::json;

// Tag wire format (bit-exact):
//   <tool_call>{"name": ..., "arguments": {...}}</tool_call>
//   <no_tool_call>
inline constexpr const char* kToolCallOpen = "<tool_call>";
inline constexpr const char* kToolCallClose = "</tool_call>";
inline constexpr const char* kNoToolCallTag = "<no_tool_call>";

struct ToolCall {
    std::string name;
    Json arguments = Json::object();

    friend bool operator==(const ToolCall& a, const ToolCall& b) {
        return a.name == b.name && a.arguments == b.arguments;
    }
};

std::string render_tool_call(const ToolCall& call);

enum class ActionKind { tool_calls, no_tool_call, final_answer, malformed };

struct ParsedAction {
    ActionKind kind = ActionKind::final_answer;
    std::vector<ToolCall> calls;  // one or more when kind == tool_calls
    std::string text;             // final answer text
    std::string error;            // malformed: what was wrong
};

// Total over all finite strings: every input lands in exactly one of the four
// kinds. Malformed is distinct from final_answer so the loop can re-prompt.
ParsedAction parse_model_output(const std::string& raw);

struct ToolParam {
    std::string name;
    std::string type = "string";  // string|number|integer|boolean|object|array
    bool required = false;
    std::string description;
};

struct ToolSpec {
    std::string name;
    std::string description;
    std::vector<ToolParam> parameters;
    std::string output_description;
};

struct ToolResult {
    bool ok = true;
    Json content = Json::object();
    std::string error;

    static ToolResult failure(std::string message) {
        ToolResult r;
        r.ok = false;
        r.error = std::move(message);
        return r;
    }
};

using ToolHandler = std::function<ToolResult(const Json& args)>;

class ToolRegistry {
  public:
    // Throws DuplicateToolName.
    void register_tool(ToolSpec spec, ToolHandler handler);

    bool has(const std::string& name) const { return tools_.count(name) > 0; }
    const ToolSpec& spec(const std::string& name) const;  // throws UnknownTool
    std::vector<std::string> names() const;

    // Validates arguments against the declared schema, then runs the handler.
    // Handler exceptions and schema violations come back as failed results.
    ToolResult invoke(const std::string& name, const Json& args) const;  // throws UnknownTool

    // Fail-fast startup check: every label must resolve to a registered tool.
    // Throws MissingHandler on the first gap.
    void validate_handlers(const std::vector<std::string>& required_names) const;

  private:
    struct Entry {
        ToolSpec spec;
        ToolHandler handler;
    };
    std::map<std::string, Entry> tools_;
};

// Route an intent decision to its handler name; total over the enum once
// validate_handlers has passed.
const ToolSpec& route(const IntentDecision& decision, const ToolRegistry& registry);

struct AgentStep {
    std::string model_output;
    ParsedAction action;
    std::vector<std::pair<ToolCall, ToolResult>> tool_runs;
    std::string note;
};

struct AgentTrace {
    std::string id;
    std::vector<AgentStep> steps;
    int iterations = 0;
    bool truncated = false;
};

enum class LoopStatus { completed, truncated, failed_malformed, failed_unknown_tool, failed_client };

const char* to_string(LoopStatus s);

struct LoopConfig {
    int max_iterations = 6;
    std::string fallback_answer_en = "I could not complete this request within the allotted tool budget.";
    std::string fallback_answer_ar = "تعذر إكمال هذا الطلب ضمن الحد المسموح من خطوات الأدوات.";
    std::string locale = "en";

    std::string fallback_answer() const { return locale == "ar" ? fallback_answer_ar : fallback_answer_en; }
};

struct LoopResult {
    std::string answer;
    AgentTrace trace;
    LoopStatus status = LoopStatus::completed;
};

// Iterative tool-calling loop: model -> parse -> execute -> feed back, until
// a final answer or the iteration budget runs out. One retry each for
// malformed output and unknown tools; tool execution failures are surfaced
// to the model inside the transcript.
LoopResult run_loop(const std::vector<ConversationTurn>& conversation, const ToolRegistry& registry,
                    TextClient& model, const LoopConfig& config);

std::string render_tool_result(const std::string& tool_name, const ToolResult& result);
std::string build_loop_prompt(const std::vector<ConversationTurn>& transcript, const ToolRegistry& registry);

struct EvidenceDoc {
    std::string doc_id;
    std::string text;
    std::string reference;
};

struct Citation {
    std::string claim;
    std::string source_ref;  // matches an EvidenceDoc doc_id
};

struct GroundedAnswer {
    std::optional<std::string> ruling;
    std::optional<std::string> evidence;
    std::optional<std::string> explanation;
    std::optional<std::string> notes;
    std::vector<Citation> citations;
};

struct AssemblyConfig {
    std::string locale = "en";
    std::string abstention_en = "No ruling can be given: no supporting evidence was retrieved.";
    std::string abstention_ar = "لا يمكن تقديم حكم: لم يتم استرجاع أدلة داعمة.";

    std::string abstention() const { return locale == "ar" ? abstention_ar : abstention_en; }
};

// Builds the sectioned answer. The Evidence section is assembled
// deterministically from the hits, each line tagged [doc_id]; Ruling,
// Explanation and Notes come from the model under a documented prompt
// contract. Empty evidence or a failing client yields an abstention.
GroundedAnswer assemble_grounded_answer(const std::vector<EvidenceDoc>& evidence, TextClient* model,
                                        const AssemblyConfig& config = {});

std::string render_grounded_answer(const GroundedAnswer& answer);

}  // namespace masar
