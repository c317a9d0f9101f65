#include "masar/zakat.hpp"

#include <sstream>

#include <json.hpp>

#include "masar/text.hpp"

namespace masar {

ZakatResult compute_zakat(const ZakatInput& input) {
    ZakatResult result;
    result.total_due = Rational(0);

    for (const auto& asset : input.assets) {
        if (asset.amount.is_negative())
            throw InvalidInput(std::string("negative amount for ") + to_string(asset.asset_class));
        auto nisab_it = input.params.nisab.find(asset.asset_class);
        auto rate_it = input.params.rate.find(asset.asset_class);
        if (nisab_it == input.params.nisab.end())
            throw InvalidInput(std::string("no nisab entry for ") + to_string(asset.asset_class));
        if (rate_it == input.params.rate.end())
            throw InvalidInput(std::string("no rate entry for ") + to_string(asset.asset_class));

        const char* cls = to_string(asset.asset_class);
        ZakatLine line{asset.asset_class, Rational(0)};
        if (!input.hawl_satisfied) {
            result.explanation.push_back(std::string(cls) + ": hawl not satisfied, no zakat due");
        } else if (asset.amount < nisab_it->second) {
            result.explanation.push_back(std::string(cls) + ": amount " + asset.amount.to_string() +
                                         " below nisab " + nisab_it->second.to_string() + ", no zakat due");
        } else {
            line.due = asset.amount * rate_it->second;
            result.explanation.push_back(std::string(cls) + ": amount " + asset.amount.to_string() +
                                         " meets nisab " + nisab_it->second.to_string() + " and hawl holds; rate " +
                                         rate_it->second.to_string() + " applied, due " + line.due.to_string());
        }
        result.total_due += line.due;
        result.per_class_due.push_back(std::move(line));
    }
    return result;
}

std::string build_zakat_extraction_prompt(const std::string& query) {
    std::ostringstream out;
    out << "Extract zakat parameters from the query. Reply with one JSON object of the form "
           "{\"assets\": [{\"class\": \"monetary|gold|silver|trade_goods\", \"amount\": \"<number>\"}], "
           "\"hawl_satisfied\": true|false}. Omit any field you cannot find; never invent values.\n";
    out << "QUERY:\n" << query << "\nEND_QUERY\n";
    return out.str();
}

ZakatInput extract_zakat_params(const std::string& query, TextClient& extractor, const ZakatParams& params) {
    if (text::trim(query).empty()) throw InvalidInput("empty zakat query");

    std::string raw;
    try {
        raw = extractor.complete(build_zakat_extraction_prompt(query));
    } catch (const std::exception& e) {
        throw ExtractionIncomplete({std::string("extractor unavailable: ") + e.what()});
    }

    nlohmann::json j = nlohmann::json::parse(raw, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw ExtractionIncomplete({"assets"});

    ZakatInput input;
    input.params = params;
    input.hawl_satisfied = j.value("hawl_satisfied", true);

    std::vector<std::string> missing;
    if (!j.contains("assets") || !j["assets"].is_array() || j["assets"].empty()) {
        throw ExtractionIncomplete({"assets.amount"});
    }
    for (const auto& a : j["assets"]) {
        if (!a.is_object()) {
            missing.push_back("assets.entry");
            continue;
        }
        auto cls = asset_class_from_string(a.value("class", ""));
        if (!cls) {
            missing.push_back("assets.class");
            continue;
        }
        if (!a.contains("amount")) {
            missing.push_back(std::string(to_string(*cls)) + ".amount");
            continue;
        }
        Rational amount;
        try {
            if (a["amount"].is_string())
                amount = Rational::parse(a["amount"].get<std::string>());
            else if (a["amount"].is_number_integer())
                amount = Rational(a["amount"].get<std::int64_t>());
            else if (a["amount"].is_number())
                amount = Rational::parse(a["amount"].dump());
            else
                throw InvalidInput("bad amount");
        } catch (const std::exception&) {
            missing.push_back(std::string(to_string(*cls)) + ".amount");
            continue;
        }
        if (amount.is_negative()) {
            missing.push_back(std::string(to_string(*cls)) + ".amount (negative)");
            continue;
        }
        input.assets.push_back({*cls, amount});
    }

    if (!missing.empty()) throw ExtractionIncomplete(std::move(missing));
    if (input.assets.empty()) throw ExtractionIncomplete({"assets.amount"});
    return input;
}

}  // namespace masar
