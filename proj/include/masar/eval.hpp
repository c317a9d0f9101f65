#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "masar/agent.hpp"

namespace masar {

// Class key used when no tool is called; absence of a call is scored as a
// class of its own.
inline constexpr const char* kNoCallClass = "<no_tool_call>";

struct EvalRecord {
    std::string id;
    std::optional<ToolCall> gold;       // nullopt = no tool call expected
    std::optional<ToolCall> predicted;  // nullopt = no tool call predicted
    std::string language;               // "ar" | "en" | ...
    std::string dataset;
};

struct ToolMetrics {
    double precision = 0.0;
    double recall = 0.0;
    long long support = 0;  // gold instances of this class
};

struct MetricReport {
    std::map<std::string, ToolMetrics> per_tool;
    double weighted_precision = 0.0;
    double weighted_recall = 0.0;
    std::optional<double> arg_accuracy;  // empty when no positive cases exist
    long long total_records = 0;
    long long positive_cases = 0;  // gold tool calls
    long long exact_matches = 0;   // after normalization
};

// Canonical form for exact-match comparison:
//   - tool name lowercased/trimmed
//   - string values: whitespace runs collapsed; recognized date patterns
//     rewritten to YYYY-MM-DD; pure numeric strings canonicalized (no leading
//     integer zeros, no trailing fractional zeros, '+' dropped); everything
//     else lowercased
//   - arrays normalized element-wise (order significant), objects by value
// Idempotent; unrecognized strings pass through lowercased.
ToolCall normalize_call(const ToolCall& call);
Json normalize_argument_value(const Json& value);
std::string normalize_string_value(const std::string& value);

// Multiclass one-vs-rest precision/recall over function names only, no-call
// as its own class, aggregated by support weights. Classes that are never
// predicted score precision 0 (documented convention). Throws EmptyDataset.
MetricReport weighted_precision_recall(const std::vector<EvalRecord>& records);

// Exact matches after normalization over records whose gold is a tool call.
// Throws EmptyDataset / NoPositiveCases.
double arg_accuracy(const std::vector<EvalRecord>& records);

// weighted_precision_recall plus arg_accuracy in one pass (arg_accuracy left
// empty when the dataset has no positive cases).
MetricReport evaluate(const std::vector<EvalRecord>& records);

// Fleiss' kappa over an items x categories count matrix; every row must sum
// to the same number of annotators n >= 2. Throws DegenerateAgreement when
// expected agreement is exactly 1.
double fleiss_kappa(const std::vector<std::vector<long long>>& counts);

// Exact-match fraction. Throws LengthMismatch / EmptyDataset.
double routing_accuracy(const std::vector<std::string>& predicted, const std::vector<std::string>& gold);

// JSONL dataset: one record per line,
//   {"id": ..., "language": ..., "dataset": ...,
//    "gold": {"type": "tool_call", "name": ..., "arguments": {...}} | {"type": "no_tool_call"},
//    "predicted": same shape}
std::vector<EvalRecord> load_eval_records_jsonl(const std::string& path);
std::vector<EvalRecord> parse_eval_records_jsonl(const std::string& content);

Json report_to_json(const MetricReport& report);
std::string render_report_table(const MetricReport& report);

}  // namespace masar
