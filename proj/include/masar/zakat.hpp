#pragma once

#include <string>
#include <vector>

#include "masar/clients.hpp"
#include "masar/jurisprudence.hpp"
#include "masar/rational.hpp"

namespace masar {

struct ZakatAsset {
    AssetClass asset_class = AssetClass::monetary;
    Rational amount;  // in the declared unit of its class
};

struct ZakatInput {
    std::vector<ZakatAsset> assets;
    ZakatParams params;          // per-class nisab + rate, same units as amounts
    bool hawl_satisfied = true;  // lunar-year holding condition
};

struct ZakatLine {
    AssetClass asset_class = AssetClass::monetary;
    Rational due;
};

struct ZakatResult {
    std::vector<ZakatLine> per_class_due;
    Rational total_due;
    std::vector<std::string> explanation;  // ordered applied-rule descriptions
};

// Per class: due = amount * rate when amount >= nisab and the hawl holds,
// else zero. Throws InvalidInput for negative amounts or missing table rows.
ZakatResult compute_zakat(const ZakatInput& input);

// Pulls structured parameters out of a natural-language query via the
// extractor client. The client must answer with a JSON object:
//   {"assets": [{"class": "monetary|gold|silver|trade_goods",
//                "amount": "number as string or number"}...],
//    "hawl_satisfied": bool (optional, default true)}
// Missing or invalid values raise ExtractionIncomplete listing the gaps —
// the engine never guesses a default for an obligation.
ZakatInput extract_zakat_params(const std::string& query, TextClient& extractor, const ZakatParams& params);

std::string build_zakat_extraction_prompt(const std::string& query);

}  // namespace masar
