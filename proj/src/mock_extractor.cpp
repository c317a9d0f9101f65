#include <cctype>
#include <cstdlib>
#include <map>
#include <vector>

#include <json.hpp>

#include "masar/mocks.hpp"
#include "masar/text.hpp"

namespace masar::mocks {

using Json = nlohmann::json;

std::string RuleBasedExtractorClient::query_of(const std::string& prompt) {
    const std::string open = "QUERY:\n";
    const std::string close = "\nEND_QUERY";
    size_t begin = prompt.find(open);
    if (begin == std::string::npos) return prompt;
    begin += open.size();
    size_t end = prompt.find(close, begin);
    if (end == std::string::npos) return prompt.substr(begin);
    return prompt.substr(begin, end - begin);
}

std::string RuleBasedExtractorClient::complete(const std::string& prompt) {
    std::string query = query_of(prompt);
    if (prompt.find("zakat parameters") != std::string::npos) return extract_zakat(query);
    if (prompt.find("estate parameters") != std::string::npos) return extract_estate(query);
    return "{}";
}

namespace {

// numeric tokens with thousands separators stripped; "10,000" -> "10000"
std::vector<std::string> numeric_tokens(const std::string& normalized) {
    std::vector<std::string> out;
    std::string current;
    auto flush = [&] {
        if (!current.empty() && current != ".") out.push_back(current);
        current.clear();
    };
    for (size_t i = 0; i < normalized.size(); ++i) {
        char c = normalized[i];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            current += c;
        } else if (c == '.' && !current.empty() && i + 1 < normalized.size() &&
                   std::isdigit(static_cast<unsigned char>(normalized[i + 1]))) {
            current += c;
        } else if (c == ',' && !current.empty()) {
            continue;  // thousands separator
        } else {
            flush();
        }
    }
    flush();
    return out;
}

int count_word(const std::string& token) {
    static const std::map<std::string, int> words = {
        {"واحد", 1},  {"واحده", 1}, {"اثنان", 2}, {"اثنين", 2},  {"اثنتان", 2}, {"اثنتين", 2},
        {"ثلاث", 3},  {"ثلاثه", 3}, {"اربع", 4},  {"اربعه", 4},
        {"one", 1},   {"two", 2},   {"three", 3}, {"four", 4},
    };
    auto it = words.find(token);
    return it == words.end() ? 0 : it->second;
}

struct HeirWord {
    const char* token;
    const char* relation;
    int implied_count;
};

// singular, dual and plural token forms (normalized spelling)
const std::vector<HeirWord>& heir_words() {
    static const std::vector<HeirWord> words = {
        {"زوجه", "wife", 1},     {"زوجتان", "wife", 2},   {"زوجتين", "wife", 2},  {"زوجات", "wife", 3},
        {"زوج", "husband", 1},
        {"ابن", "son", 1},       {"ابنان", "son", 2},     {"ابنين", "son", 2},    {"ابناء", "son", 3},
        {"بنت", "daughter", 1},  {"بنتان", "daughter", 2}, {"بنتين", "daughter", 2}, {"بنات", "daughter", 3},
        {"اب", "father", 1},     {"والد", "father", 1},
        {"ام", "mother", 1},     {"والده", "mother", 1},
        {"جد", "paternal_grandfather", 1},
        {"جده", "grandmother", 1}, {"جدتان", "grandmother", 2}, {"جدتين", "grandmother", 2},
        {"اخ", "full_brother", 1}, {"اخوان", "full_brother", 2}, {"اخوين", "full_brother", 2},
        {"اخوه", "full_brother", 3},
        {"اخت", "full_sister", 1}, {"اختان", "full_sister", 2}, {"اختين", "full_sister", 2},
        {"اخوات", "full_sister", 3},
        {"husband", "husband", 1}, {"wife", "wife", 1},     {"wives", "wife", 3},
        {"son", "son", 1},       {"sons", "son", 3},
        {"daughter", "daughter", 1}, {"daughters", "daughter", 3},
        {"father", "father", 1}, {"mother", "mother", 1},
        {"grandfather", "paternal_grandfather", 1}, {"grandmother", "grandmother", 1},
        {"grandson", "son_of_son", 1}, {"grandsons", "son_of_son", 3},
        {"granddaughter", "daughter_of_son", 1}, {"granddaughters", "daughter_of_son", 3},
        {"brother", "full_brother", 1}, {"brothers", "full_brother", 3},
        {"sister", "full_sister", 1}, {"sisters", "full_sister", 3},
    };
    return words;
}

const HeirWord* lookup_exact(const std::string& token) {
    for (const auto& w : heir_words())
        if (token == w.token) return &w;
    return nullptr;
}

// try the token as-is, then with the glued conjunction/article prefixes
// peeled off: "وبنت" -> "بنت", "الاب" -> "اب", "وللزوجه" is out of scope
std::vector<std::string> token_variants(const std::string& token) {
    std::vector<std::string> variants{token};
    const std::string waw = "و";
    const std::string al = "ال";
    std::string t = token;
    if (t.size() > waw.size() && t.compare(0, waw.size(), waw) == 0) {
        t = t.substr(waw.size());
        variants.push_back(t);
    }
    if (t.size() > al.size() && t.compare(0, al.size(), al) == 0) variants.push_back(t.substr(al.size()));
    return variants;
}

const HeirWord* lookup_heir(const std::string& token) {
    for (const auto& variant : token_variants(token))
        if (const HeirWord* w = lookup_exact(variant)) return w;
    return nullptr;
}

int lookup_count_word(const std::string& token) {
    for (const auto& variant : token_variants(token))
        if (int c = count_word(variant)) return c;
    return 0;
}

bool is_son_token(const std::string& token) {
    for (const auto& variant : token_variants(token))
        if (variant == "ابن" || variant == "son") return true;
    return false;
}

}  // namespace

std::string RuleBasedExtractorClient::extract_zakat(const std::string& query) {
    std::string norm = text::normalize_arabic(query);
    Json out = Json::object();
    Json assets = Json::array();

    std::string cls = "monetary";
    if (norm.find("ذهب") != std::string::npos || norm.find("gold") != std::string::npos)
        cls = "gold";
    else if (norm.find("فضه") != std::string::npos || norm.find("silver") != std::string::npos)
        cls = "silver";
    else if (norm.find("تجار") != std::string::npos || norm.find("عروض") != std::string::npos ||
             norm.find("trade") != std::string::npos)
        cls = "trade_goods";

    auto numbers = numeric_tokens(norm);
    if (!numbers.empty()) assets.push_back({{"class", cls}, {"amount", numbers.front()}});
    out["assets"] = assets;

    bool hawl = true;
    if (norm.find("اقل من سنه") != std::string::npos || norm.find("لم يحل الحول") != std::string::npos ||
        norm.find("less than a year") != std::string::npos)
        hawl = false;
    out["hawl_satisfied"] = hawl;
    return out.dump();
}

std::string RuleBasedExtractorClient::extract_estate(const std::string& query) {
    std::string norm = text::normalize_arabic(query);
    auto tokens = text::tokenize(norm);

    Json heirs = Json::object();
    auto add = [&](const std::string& relation, int count) {
        int existing = heirs.contains(relation) ? heirs[relation].get<int>() : 0;
        heirs[relation] = existing + count;
    };

    std::string estate_value;
    int pending_count = 0;
    for (size_t i = 0; i < tokens.size(); ++i) {
        const std::string& tok = tokens[i];

        if (!tok.empty() && std::isdigit(static_cast<unsigned char>(tok[0]))) {
            // large numbers read as the estate value, small ones as heir counts
            if (tok.size() >= 3 && estate_value.empty())
                estate_value = tok;
            else
                pending_count = std::atoi(tok.c_str());
            continue;
        }
        if (int wc = lookup_count_word(tok)) {
            pending_count = wc;
            continue;
        }

        const HeirWord* heir = lookup_heir(tok);
        if (!heir) continue;
        std::string relation = heir->relation;
        // "ابن ابن" / "بنت ابن": a following son-token retargets one level down
        if ((relation == "son" || relation == "daughter") && i + 1 < tokens.size() &&
            is_son_token(tokens[i + 1])) {
            relation = relation == "son" ? "son_of_son" : "daughter_of_son";
            ++i;
        }
        int count = pending_count > 0 ? pending_count : heir->implied_count;
        pending_count = 0;
        add(relation, count);
    }

    Json out = Json::object();
    if (!estate_value.empty()) out["estate_value"] = estate_value;
    out["heirs"] = heirs;
    return out.dump();
}

}  // namespace masar::mocks
