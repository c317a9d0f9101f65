#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "masar/jurisprudence.hpp"
#include "masar/rational.hpp"

namespace masar {

struct EstateSpec {
    Rational estate_value{1};
    std::map<Relation, int> heirs;  // relation -> count
};

enum class Adjustment { awl, radd, blocking };

const char* to_string(Adjustment a);

struct ShareAllocation {
    // Class totals as exact fractions of the estate; every input relation is
    // present (0 for excluded heirs). Sums to exactly 1.
    std::map<Relation, Rational> shares;
    std::set<Adjustment> adjustments_applied;
    std::vector<std::string> trace;
};

// Deterministic Faraid pipeline over one estate:
//   1. exclusion per the configured blocking table (plus the conditional
//      exclusion of son's daughters by two or more daughters)
//   2. fixed shares from the configured share fractions
//   3. residuary allocation, male:female per the configured ratio
//   4. proportional reduction (awl) when fixed shares exceed the estate
//   5. proportional return (radd) when a remainder has no residuary taker
// All arithmetic is exact rational.
ShareAllocation compute_inheritance(const EstateSpec& spec, const FaraidParams& params);

}  // namespace masar
