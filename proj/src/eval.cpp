#include "masar/eval.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "masar/text.hpp"

namespace masar {

namespace {

bool all_digits(const std::string& s, size_t begin, size_t end) {
    if (begin >= end) return false;
    for (size_t i = begin; i < end; ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
}

struct DateParts {
    int year, month, day;
};

std::string format_iso(const DateParts& d) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", d.year, d.month, d.day);
    return buf;
}

bool plausible(const DateParts& d) {
    return d.year >= 1 && d.year <= 9999 && d.month >= 1 && d.month <= 12 && d.day >= 1 && d.day <= 31;
}

std::vector<std::string> split_on(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(cur);
    return parts;
}

int month_from_name(const std::string& lowered) {
    static const char* names[] = {"january", "february", "march",     "april",   "may",      "june",
                                  "july",    "august",   "september", "october", "november", "december"};
    for (int i = 0; i < 12; ++i) {
        const std::string full = names[i];
        if (lowered == full || lowered == full.substr(0, 3)) return i + 1;
    }
    return 0;
}

// Recognized date patterns (the documented inventory):
//   Y-M-D, Y/M/D, Y.M.D          (4-digit year first)
//   D-M-Y, D/M/Y, D.M.Y          (4-digit year last, day-first; read as
//                                 month-first only when day-first is invalid)
//   "January 15, 2024", "15 January 2024", 3-letter month abbreviations too
std::optional<std::string> canonicalize_date(const std::string& s) {
    for (char sep : {'-', '/', '.'}) {
        auto parts = split_on(s, sep);
        if (parts.size() != 3) continue;
        const auto& a = parts[0];
        const auto& b = parts[1];
        const auto& c = parts[2];
        if (!all_digits(a, 0, a.size()) || !all_digits(b, 0, b.size()) || !all_digits(c, 0, c.size()))
            continue;
        if (a.size() == 4 && b.size() <= 2 && c.size() <= 2) {
            DateParts d{std::stoi(a), std::stoi(b), std::stoi(c)};
            if (plausible(d)) return format_iso(d);
        }
        if (c.size() == 4 && a.size() <= 2 && b.size() <= 2) {
            DateParts day_first{std::stoi(c), std::stoi(b), std::stoi(a)};
            if (plausible(day_first)) return format_iso(day_first);
            DateParts month_first{std::stoi(c), std::stoi(a), std::stoi(b)};
            if (plausible(month_first)) return format_iso(month_first);
        }
    }

    // "January 15, 2024" / "15 January 2024"
    std::string lowered = text::lower_ascii(s);
    std::string cleaned;
    for (char ch : lowered) cleaned += (ch == ',') ? ' ' : ch;
    std::istringstream in(cleaned);
    std::vector<std::string> words;
    std::string w;
    while (in >> w) words.push_back(w);
    if (words.size() == 3) {
        int m = month_from_name(words[0]);
        if (m && all_digits(words[1], 0, words[1].size()) && all_digits(words[2], 0, words[2].size()) &&
            words[2].size() == 4) {
            DateParts d{std::stoi(words[2]), m, std::stoi(words[1])};
            if (plausible(d)) return format_iso(d);
        }
        m = month_from_name(words[1]);
        if (m && all_digits(words[0], 0, words[0].size()) && all_digits(words[2], 0, words[2].size()) &&
            words[2].size() == 4) {
            DateParts d{std::stoi(words[2]), m, std::stoi(words[0])};
            if (plausible(d)) return format_iso(d);
        }
    }
    return std::nullopt;
}

// Pure numeric strings: "007" -> "7", "2.50" -> "2.5", "+3" -> "3",
// ".5" -> "0.5", "-0" -> "0".
std::optional<std::string> canonicalize_number(const std::string& s) {
    if (s.empty()) return std::nullopt;
    size_t i = 0;
    bool negative = false;
    if (s[0] == '+' || s[0] == '-') {
        negative = s[0] == '-';
        i = 1;
    }
    size_t int_begin = i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    size_t int_end = i;
    std::string frac;
    if (i < s.size() && s[i] == '.') {
        size_t frac_begin = ++i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        if (i != s.size()) return std::nullopt;
        frac = s.substr(frac_begin, i - frac_begin);
    } else if (i != s.size()) {
        return std::nullopt;
    }
    if (int_begin == int_end && frac.empty()) return std::nullopt;

    std::string int_part = s.substr(int_begin, int_end - int_begin);
    size_t nz = int_part.find_first_not_of('0');
    int_part = nz == std::string::npos ? "0" : int_part.substr(nz);
    if (int_part.empty()) int_part = "0";

    while (!frac.empty() && frac.back() == '0') frac.pop_back();

    std::string out = int_part;
    if (!frac.empty()) out += "." + frac;
    bool is_zero = out == "0";
    if (negative && !is_zero) out.insert(out.begin(), '-');
    return out;
}

}  // namespace

std::string normalize_string_value(const std::string& value) {
    std::string collapsed = text::collapse_whitespace(value);
    if (auto date = canonicalize_date(collapsed)) return *date;
    if (auto num = canonicalize_number(collapsed)) return *num;
    return text::lower_ascii(collapsed);
}

Json normalize_argument_value(const Json& value) {
    if (value.is_string()) return normalize_string_value(value.get<std::string>());
    if (value.is_array()) {
        Json out = Json::array();
        for (const auto& item : value) out.push_back(normalize_argument_value(item));
        return out;
    }
    if (value.is_object()) {
        Json out = Json::object();
        for (const auto& [key, v] : value.items()) out[key] = normalize_argument_value(v);
        return out;
    }
    return value;  // numbers, booleans, null already canonical
}

ToolCall normalize_call(const ToolCall& call) {
    ToolCall out;
    out.name = text::lower_ascii(text::collapse_whitespace(call.name));
    out.arguments = normalize_argument_value(call.arguments);
    return out;
}

namespace {

std::string class_of(const std::optional<ToolCall>& call) {
    if (!call) return kNoCallClass;
    return text::lower_ascii(text::collapse_whitespace(call->name));
}

}  // namespace

MetricReport weighted_precision_recall(const std::vector<EvalRecord>& records) {
    if (records.empty()) throw EmptyDataset();

    struct Counts {
        long long tp = 0, fp = 0, fn = 0, support = 0;
    };
    std::map<std::string, Counts> by_class;

    for (const auto& record : records) {
        std::string gold = class_of(record.gold);
        std::string pred = class_of(record.predicted);
        by_class[gold].support += 1;
        if (gold == pred) {
            by_class[gold].tp += 1;
        } else {
            by_class[gold].fn += 1;
            by_class[pred].fp += 1;
        }
    }

    MetricReport report;
    report.total_records = static_cast<long long>(records.size());
    double weighted_p = 0.0, weighted_r = 0.0;
    const double n_total = static_cast<double>(records.size());

    for (const auto& [name, c] : by_class) {
        ToolMetrics m;
        m.support = c.support;
        long long predicted = c.tp + c.fp;
        m.precision = predicted > 0 ? static_cast<double>(c.tp) / static_cast<double>(predicted) : 0.0;
        long long actual = c.tp + c.fn;
        m.recall = actual > 0 ? static_cast<double>(c.tp) / static_cast<double>(actual) : 0.0;
        weighted_p += (static_cast<double>(c.support) / n_total) * m.precision;
        weighted_r += (static_cast<double>(c.support) / n_total) * m.recall;
        report.per_tool[name] = m;
    }
    report.weighted_precision = weighted_p;
    report.weighted_recall = weighted_r;
    return report;
}

double arg_accuracy(const std::vector<EvalRecord>& records) {
    if (records.empty()) throw EmptyDataset();
    long long positives = 0, exact = 0;
    for (const auto& record : records) {
        if (!record.gold) continue;
        ++positives;
        if (!record.predicted) continue;
        if (normalize_call(*record.gold) == normalize_call(*record.predicted)) ++exact;
    }
    if (positives == 0) throw NoPositiveCases();
    return static_cast<double>(exact) / static_cast<double>(positives);
}

MetricReport evaluate(const std::vector<EvalRecord>& records) {
    MetricReport report = weighted_precision_recall(records);
    for (const auto& record : records) {
        if (!record.gold) continue;
        ++report.positive_cases;
        if (record.predicted && normalize_call(*record.gold) == normalize_call(*record.predicted))
            ++report.exact_matches;
    }
    if (report.positive_cases > 0)
        report.arg_accuracy =
            static_cast<double>(report.exact_matches) / static_cast<double>(report.positive_cases);
    return report;
}

double fleiss_kappa(const std::vector<std::vector<long long>>& counts) {
    if (counts.empty() || counts[0].empty()) throw EmptyDataset();
    const size_t categories = counts[0].size();
    long long annotators = 0;
    for (long long c : counts[0]) annotators += c;
    if (annotators < 2) throw InvalidInput("fleiss_kappa needs at least 2 annotators per item");

    const double n = static_cast<double>(annotators);
    const double n_items = static_cast<double>(counts.size());

    double p_bar = 0.0;
    std::vector<double> category_mass(categories, 0.0);
    for (const auto& row : counts) {
        if (row.size() != categories) throw LengthMismatch();
        long long row_sum = 0;
        double agree = 0.0;
        for (size_t j = 0; j < categories; ++j) {
            row_sum += row[j];
            agree += static_cast<double>(row[j]) * static_cast<double>(row[j]);
            category_mass[j] += static_cast<double>(row[j]);
        }
        if (row_sum != annotators) throw InvalidInput("fleiss_kappa rows must share one annotator count");
        p_bar += (agree - n) / (n * (n - 1.0));
    }
    p_bar /= n_items;

    double p_e = 0.0;
    for (double mass : category_mass) {
        double p_j = mass / (n_items * n);
        p_e += p_j * p_j;
    }
    if (p_e >= 1.0) throw DegenerateAgreement();
    return (p_bar - p_e) / (1.0 - p_e);
}

double routing_accuracy(const std::vector<std::string>& predicted, const std::vector<std::string>& gold) {
    if (predicted.size() != gold.size()) throw LengthMismatch();
    if (predicted.empty()) throw EmptyDataset();
    long long hits = 0;
    for (size_t i = 0; i < predicted.size(); ++i)
        if (predicted[i] == gold[i]) ++hits;
    return static_cast<double>(hits) / static_cast<double>(predicted.size());
}

namespace {

std::optional<ToolCall> call_from_json(const Json& j, const std::string& context) {
    if (!j.is_object() || !j.contains("type"))
        throw InvalidInput(context + ": expected {\"type\": \"tool_call\"|\"no_tool_call\", ...}");
    std::string type = j["type"].get<std::string>();
    if (type == "no_tool_call") return std::nullopt;
    if (type != "tool_call") throw InvalidInput(context + ": unknown type '" + type + "'");
    ToolCall call;
    call.name = j.value("name", "");
    if (call.name.empty()) throw InvalidInput(context + ": tool_call requires a name");
    if (j.contains("arguments")) {
        if (!j["arguments"].is_object()) throw InvalidInput(context + ": arguments must be an object");
        call.arguments = j["arguments"];
    }
    return call;
}

}  // namespace

std::vector<EvalRecord> parse_eval_records_jsonl(const std::string& content) {
    std::vector<EvalRecord> records;
    std::istringstream in(content);
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string trimmed = text::trim(line);
        if (trimmed.empty() || trimmed[0] == '#') continue;
        Json j = Json::parse(trimmed, nullptr, false);
        if (j.is_discarded() || !j.is_object())
            throw InvalidInput("eval record line " + std::to_string(line_no) + " is not a JSON object");
        EvalRecord record;
        record.id = j.value("id", "line-" + std::to_string(line_no));
        record.language = j.value("language", "");
        record.dataset = j.value("dataset", "");
        record.gold = call_from_json(j.at("gold"), record.id + ".gold");
        record.predicted = call_from_json(j.at("predicted"), record.id + ".predicted");
        records.push_back(std::move(record));
    }
    return records;
}

std::vector<EvalRecord> load_eval_records_jsonl(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInput("cannot open eval dataset: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_eval_records_jsonl(buf.str());
}

Json report_to_json(const MetricReport& report) {
    Json j = Json::object();
    j["weighted_precision"] = report.weighted_precision;
    j["weighted_recall"] = report.weighted_recall;
    if (report.arg_accuracy) j["arg_accuracy"] = *report.arg_accuracy;
    j["total_records"] = report.total_records;
    j["positive_cases"] = report.positive_cases;
    j["exact_matches"] = report.exact_matches;
    Json per_tool = Json::object();
    for (const auto& [name, m] : report.per_tool) {
        per_tool[name] = {{"precision", m.precision}, {"recall", m.recall}, {"support", m.support}};
    }
    j["per_tool"] = per_tool;
    return j;
}

std::string render_report_table(const MetricReport& report) {
    std::ostringstream out;
    size_t width = 12;
    for (const auto& [name, _] : report.per_tool) width = std::max(width, name.size());

    out << std::left << std::setw(static_cast<int>(width) + 2) << "tool"
        << std::right << std::setw(11) << "precision" << std::setw(9) << "recall" << std::setw(10)
        << "support" << "\n";
    out << std::string(width + 2 + 30, '-') << "\n";
    out << std::fixed << std::setprecision(4);
    for (const auto& [name, m] : report.per_tool) {
        out << std::left << std::setw(static_cast<int>(width) + 2) << name << std::right << std::setw(11)
            << m.precision << std::setw(9) << m.recall << std::setw(10) << m.support << "\n";
    }
    out << std::string(width + 2 + 30, '-') << "\n";
    out << std::left << std::setw(static_cast<int>(width) + 2) << "weighted" << std::right << std::setw(11)
        << report.weighted_precision << std::setw(9) << report.weighted_recall << std::setw(10)
        << report.total_records << "\n";
    if (report.arg_accuracy)
        out << "arg_accuracy: " << *report.arg_accuracy << "  (" << report.exact_matches << "/"
            << report.positive_cases << " exact after normalization)\n";
    else
        out << "arg_accuracy: n/a (no positive cases)\n";
    return out.str();
}

}  // namespace masar
