#include "masar/agent.hpp"

#include <atomic>
#include <sstream>

#include "masar/text.hpp"

namespace masar {

const char* to_string(LoopStatus s) {
    switch (s) {
        case LoopStatus::completed: return "completed";
        case LoopStatus::truncated: return "truncated";
        case LoopStatus::failed_malformed: return "failed_malformed";
        case LoopStatus::failed_unknown_tool: return "failed_unknown_tool";
        case LoopStatus::failed_client: return "failed_client";
    }
    return "completed";
}

std::string render_tool_call(const ToolCall& call) {
    Json body = Json::object();
    body["name"] = call.name;
    body["arguments"] = call.arguments;
    return std::string(kToolCallOpen) + body.dump() + kToolCallClose;
}

ParsedAction parse_model_output(const std::string& raw) {
    ParsedAction out;
    const std::string open = kToolCallOpen;
    const std::string close = kToolCallClose;

    if (raw.find(open) != std::string::npos) {
        size_t pos = 0;
        while ((pos = raw.find(open, pos)) != std::string::npos) {
            size_t body_start = pos + open.size();
            size_t end = raw.find(close, body_start);
            if (end == std::string::npos) {
                out.kind = ActionKind::malformed;
                out.error = "unclosed <tool_call> tag";
                out.calls.clear();
                return out;
            }
            std::string body = raw.substr(body_start, end - body_start);
            Json parsed = Json::parse(body, nullptr, false);
            if (parsed.is_discarded() || !parsed.is_object()) {
                out.kind = ActionKind::malformed;
                out.error = "tool call body is not a JSON object";
                out.calls.clear();
                return out;
            }
            if (!parsed.contains("name") || !parsed["name"].is_string() ||
                parsed["name"].get<std::string>().empty()) {
                out.kind = ActionKind::malformed;
                out.error = "tool call is missing a name";
                out.calls.clear();
                return out;
            }
            ToolCall call;
            call.name = parsed["name"].get<std::string>();
            if (parsed.contains("arguments")) {
                if (!parsed["arguments"].is_object()) {
                    out.kind = ActionKind::malformed;
                    out.error = "tool call arguments must be an object";
                    out.calls.clear();
                    return out;
                }
                call.arguments = parsed["arguments"];
            }
            out.calls.push_back(std::move(call));
            pos = end + close.size();
        }
        out.kind = ActionKind::tool_calls;
        return out;
    }

    if (raw.find(kNoToolCallTag) != std::string::npos) {
        out.kind = ActionKind::no_tool_call;
        return out;
    }

    out.kind = ActionKind::final_answer;
    out.text = raw;
    return out;
}

void ToolRegistry::register_tool(ToolSpec spec, ToolHandler handler) {
    if (tools_.count(spec.name)) throw DuplicateToolName(spec.name);
    std::string name = spec.name;
    tools_.emplace(std::move(name), Entry{std::move(spec), std::move(handler)});
}

const ToolSpec& ToolRegistry::spec(const std::string& name) const {
    auto it = tools_.find(name);
    if (it == tools_.end()) throw UnknownTool(name);
    return it->second.spec;
}

std::vector<std::string> ToolRegistry::names() const {
    std::vector<std::string> out;
    out.reserve(tools_.size());
    for (const auto& [name, _] : tools_) out.push_back(name);
    return out;
}

namespace {

bool type_matches(const std::string& type, const Json& value) {
    if (type == "string") return value.is_string();
    if (type == "number") return value.is_number();
    if (type == "integer") return value.is_number_integer();
    if (type == "boolean") return value.is_boolean();
    if (type == "object") return value.is_object();
    if (type == "array") return value.is_array();
    return true;  // unconstrained
}

}  // namespace

ToolResult ToolRegistry::invoke(const std::string& name, const Json& args) const {
    auto it = tools_.find(name);
    if (it == tools_.end()) throw UnknownTool(name);
    const auto& entry = it->second;

    if (!args.is_object()) return ToolResult::failure("arguments must be an object");
    for (const auto& param : entry.spec.parameters) {
        auto found = args.find(param.name);
        if (found == args.end()) {
            if (param.required)
                return ToolResult::failure("missing required argument '" + param.name + "'");
            continue;
        }
        if (!found->is_null() && !type_matches(param.type, *found))
            return ToolResult::failure("argument '" + param.name + "' must be of type " + param.type);
    }

    try {
        return entry.handler(args);
    } catch (const std::exception& e) {
        return ToolResult::failure(std::string("tool execution failed: ") + e.what());
    }
}

void ToolRegistry::validate_handlers(const std::vector<std::string>& required_names) const {
    for (const auto& name : required_names)
        if (!has(name)) throw MissingHandler(name);
}

const ToolSpec& route(const IntentDecision& decision, const ToolRegistry& registry) {
    const char* name = to_string(decision.label);
    if (!registry.has(name)) throw MissingHandler(name);
    return registry.spec(name);
}

std::string render_tool_result(const std::string& tool_name, const ToolResult& result) {
    Json body = Json::object();
    body["ok"] = result.ok;
    if (result.ok)
        body["content"] = result.content;
    else
        body["error"] = result.error;
    return "<tool_result name=\"" + tool_name + "\">\n" + body.dump(2) + "\n</tool_result>";
}

std::string build_loop_prompt(const std::vector<ConversationTurn>& transcript, const ToolRegistry& registry) {
    std::ostringstream out;
    out << "You can either call a tool or answer directly.\n"
        << "To call a tool emit " << kToolCallOpen << "{\"name\": ..., \"arguments\": {...}}"
        << kToolCallClose << ".\n"
        << "If no tool is needed emit " << kNoToolCallTag << " and you will be asked for the answer.\n"
        << "TOOLS:\n";
    for (const auto& name : registry.names()) {
        const ToolSpec& spec = registry.spec(name);
        out << "- " << spec.name << ": " << spec.description;
        if (!spec.parameters.empty()) {
            out << " (";
            for (size_t i = 0; i < spec.parameters.size(); ++i) {
                const auto& p = spec.parameters[i];
                if (i) out << ", ";
                out << p.name << ": " << p.type << (p.required ? "" : "?");
            }
            out << ")";
        }
        out << "\n";
    }
    out << "CONVERSATION:\n";
    for (const auto& turn : transcript) {
        const char* role = turn.role == Role::user ? "user" : turn.role == Role::assistant ? "assistant" : "tool";
        out << role << ": " << turn.text << "\n";
    }
    out << "assistant:";
    return out.str();
}

namespace {

std::string next_trace_id() {
    static std::atomic<std::uint64_t> counter{0};
    return "trace-" + std::to_string(++counter);
}

}  // namespace

LoopResult run_loop(const std::vector<ConversationTurn>& conversation, const ToolRegistry& registry,
                    TextClient& model, const LoopConfig& config) {
    if (config.max_iterations < 1) throw InvalidInput("max_iterations must be at least 1");

    LoopResult result;
    result.trace.id = next_trace_id();

    std::vector<ConversationTurn> transcript = conversation;
    int next_index = transcript.empty() ? 0 : transcript.back().index + 1;
    auto append = [&](Role role, const std::string& text) {
        transcript.push_back({role, text, next_index++});
    };

    bool retried_malformed = false;
    bool retried_unknown = false;

    for (int iteration = 1; iteration <= config.max_iterations; ++iteration) {
        result.trace.iterations = iteration;
        AgentStep step;

        try {
            step.model_output = model.complete(build_loop_prompt(transcript, registry));
        } catch (const std::exception& e) {
            step.note = std::string("model client failed: ") + e.what();
            result.trace.steps.push_back(std::move(step));
            result.status = LoopStatus::failed_client;
            result.answer = config.fallback_answer();
            return result;
        }

        step.action = parse_model_output(step.model_output);
        switch (step.action.kind) {
            case ActionKind::final_answer: {
                step.note = "terminal: final answer";
                result.trace.steps.push_back(std::move(step));
                result.status = LoopStatus::completed;
                result.answer = result.trace.steps.back().action.text;
                return result;
            }
            case ActionKind::no_tool_call: {
                step.note = "model declined tools; requesting a direct answer";
                append(Role::tool, "No tool was called. Provide the final answer directly.");
                result.trace.steps.push_back(std::move(step));
                continue;
            }
            case ActionKind::malformed: {
                if (!retried_malformed) {
                    retried_malformed = true;
                    step.note = "malformed tool call; re-prompting once";
                    append(Role::tool, "Your last message was malformed (" + step.action.error +
                                           "). Emit a valid tool call or a final answer.");
                    result.trace.steps.push_back(std::move(step));
                    continue;
                }
                step.note = "terminal: malformed tool call after retry";
                result.trace.steps.push_back(std::move(step));
                result.status = LoopStatus::failed_malformed;
                result.answer = config.fallback_answer();
                return result;
            }
            case ActionKind::tool_calls: {
                append(Role::assistant, step.model_output);
                bool fatal_unknown = false;
                for (const auto& call : step.action.calls) {
                    if (!registry.has(call.name)) {
                        if (!retried_unknown) {
                            retried_unknown = true;
                            step.note = "unknown tool '" + call.name + "'; surfacing to the model once";
                            std::string names;
                            for (const auto& n : registry.names()) names += (names.empty() ? "" : ", ") + n;
                            append(Role::tool,
                                   "Unknown tool '" + call.name + "'. Available tools: " + names + ".");
                        } else {
                            step.note = "terminal: unknown tool '" + call.name + "' after retry";
                            fatal_unknown = true;
                        }
                        break;
                    }
                    ToolResult tool_result = registry.invoke(call.name, call.arguments);
                    append(Role::tool, render_tool_result(call.name, tool_result));
                    step.tool_runs.emplace_back(call, std::move(tool_result));
                }
                result.trace.steps.push_back(std::move(step));
                if (fatal_unknown) {
                    result.status = LoopStatus::failed_unknown_tool;
                    result.answer = config.fallback_answer();
                    return result;
                }
                continue;
            }
        }
    }

    result.trace.truncated = true;
    result.status = LoopStatus::truncated;
    result.answer = config.fallback_answer();
    AgentStep terminal;
    terminal.note = "terminal: iteration budget exhausted";
    result.trace.steps.push_back(std::move(terminal));
    return result;
}

std::string build_assembly_prompt(const std::vector<EvidenceDoc>& evidence) {
    std::ostringstream out;
    out << "Write a grounded answer with sections 'Ruling:', 'Explanation:' and 'Notes:' "
           "based only on the evidence. Keep each section on its own lines.\n"
        << "EVIDENCE:\n";
    for (const auto& doc : evidence) out << "[" << doc.doc_id << "] " << doc.text << "\n";
    return out.str();
}

namespace {

std::optional<std::string> extract_section(const std::string& text, const std::string& header) {
    size_t pos = text.find(header);
    if (pos == std::string::npos) return std::nullopt;
    size_t begin = pos + header.size();
    size_t end = text.size();
    for (const char* other : {"Ruling:", "Explanation:", "Notes:", "Evidence:"}) {
        if (header == other) continue;
        size_t p = text.find(other, begin);
        if (p != std::string::npos && p < end) end = p;
    }
    std::string section = text::trim(text.substr(begin, end - begin));
    if (section.empty()) return std::nullopt;
    return section;
}

}  // namespace

GroundedAnswer assemble_grounded_answer(const std::vector<EvidenceDoc>& evidence, TextClient* model,
                                        const AssemblyConfig& config) {
    GroundedAnswer answer;

    if (evidence.empty()) {
        answer.ruling = config.abstention();
        return answer;
    }

    // deterministic evidence section: one line per hit, tagged with its id
    std::string evidence_text;
    for (const auto& doc : evidence) {
        if (!evidence_text.empty()) evidence_text += "\n";
        evidence_text += doc.text + " [" + doc.doc_id + "]";
        answer.citations.push_back({doc.text, doc.doc_id});
    }
    answer.evidence = evidence_text;

    if (model == nullptr) {
        answer.ruling = config.abstention();
        return answer;
    }
    try {
        std::string raw = model->complete(build_assembly_prompt(evidence));
        answer.ruling = extract_section(raw, "Ruling:");
        answer.explanation = extract_section(raw, "Explanation:");
        answer.notes = extract_section(raw, "Notes:");
        if (!answer.ruling) answer.ruling = config.abstention();
    } catch (const std::exception&) {
        answer.ruling = config.abstention();
    }
    return answer;
}

std::string render_grounded_answer(const GroundedAnswer& answer) {
    std::ostringstream out;
    if (answer.ruling) out << "Ruling: " << *answer.ruling << "\n";
    if (answer.evidence) out << "Evidence:\n" << *answer.evidence << "\n";
    if (answer.explanation) out << "Explanation: " << *answer.explanation << "\n";
    if (answer.notes) out << "Notes: " << *answer.notes << "\n";
    std::string s = out.str();
    if (!s.empty() && s.back() == '\n') s.pop_back();
    return s;
}

}  // namespace masar
