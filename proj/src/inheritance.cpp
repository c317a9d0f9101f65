#include "masar/inheritance.hpp"

#include <algorithm>

#include "masar/errors.hpp"

namespace masar {

const char* to_string(Adjustment a) {
    switch (a) {
        case Adjustment::awl: return "awl";
        case Adjustment::radd: return "radd";
        case Adjustment::blocking: return "blocking";
    }
    return "blocking";
}

namespace {

struct Ctx {
    const FaraidParams& params;
    std::map<Relation, int> present;  // unblocked heirs
    ShareAllocation& out;

    int count(Relation r) const {
        auto it = present.find(r);
        return it == present.end() ? 0 : it->second;
    }
    bool has(Relation r) const { return count(r) > 0; }
};

void validate(const EstateSpec& spec) {
    if (spec.heirs.empty()) throw NoHeirs();
    if (!(Rational(0) < spec.estate_value)) throw InvalidInput("estate value must be positive");
    for (const auto& [rel, count] : spec.heirs) {
        if (count <= 0) throw InvalidInput(std::string("non-positive count for ") + to_string(rel));
        switch (rel) {
            case Relation::husband:
            case Relation::father:
            case Relation::mother:
            case Relation::paternal_grandfather:
                if (count > 1) throw InvalidInput(std::string("at most one ") + to_string(rel));
                break;
            case Relation::wife:
                if (count > 4) throw InvalidInput("at most four wives");
                break;
            default:
                break;
        }
    }
    if (spec.heirs.count(Relation::husband) && spec.heirs.count(Relation::wife))
        throw InvalidInput("husband and wife cannot both be heirs of one estate");
}

}  // namespace

ShareAllocation compute_inheritance(const EstateSpec& spec, const FaraidParams& params) {
    validate(spec);

    ShareAllocation out;
    for (const auto& [rel, _] : spec.heirs) out.shares[rel] = Rational(0);

    // 1. exclusion by nearer relations (fixpoint over the configured table)
    std::set<Relation> blocked;
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& [blocker, targets] : params.blocking) {
            if (!spec.heirs.count(blocker) || blocked.count(blocker)) continue;
            for (Relation target : targets) {
                if (spec.heirs.count(target) && !blocked.count(target)) {
                    blocked.insert(target);
                    changed = true;
                    out.trace.push_back(std::string(to_string(target)) + " excluded by " + to_string(blocker));
                }
            }
        }
    }

    Ctx ctx{params, {}, out};
    for (const auto& [rel, count] : spec.heirs)
        if (!blocked.count(rel)) ctx.present[rel] = count;

    // conditional exclusion: two or more daughters exhaust the daughters'
    // two-thirds, leaving son's daughters nothing unless a son's son
    // co-present turns them residuary
    if (ctx.count(Relation::daughter) >= 2 && ctx.has(Relation::daughter_of_son) &&
        !ctx.has(Relation::son_of_son)) {
        blocked.insert(Relation::daughter_of_son);
        ctx.present.erase(Relation::daughter_of_son);
        out.trace.push_back("daughter_of_son excluded: two or more daughters and no son_of_son");
    }
    if (!blocked.empty()) out.adjustments_applied.insert(Adjustment::blocking);
    if (ctx.present.empty()) throw NoHeirs();

    const bool has_male_descendant = ctx.has(Relation::son) || ctx.has(Relation::son_of_son);
    const bool has_descendant = has_male_descendant || ctx.has(Relation::daughter) ||
                                ctx.has(Relation::daughter_of_son);

    int sibling_count = 0;
    if (params.blocked_siblings_reduce_mother) {
        auto it_b = spec.heirs.find(Relation::full_brother);
        auto it_s = spec.heirs.find(Relation::full_sister);
        sibling_count = (it_b != spec.heirs.end() ? it_b->second : 0) +
                        (it_s != spec.heirs.end() ? it_s->second : 0);
    } else {
        sibling_count = ctx.count(Relation::full_brother) + ctx.count(Relation::full_sister);
    }

    // 2. fixed shares (class totals)
    std::map<Relation, Rational> fixed;
    auto note = [&](Relation r, const Rational& share, const std::string& why) {
        fixed[r] = share;
        out.trace.push_back(std::string(to_string(r)) + ": fixed share " + share.to_string() + " (" + why + ")");
    };

    if (ctx.has(Relation::husband))
        note(Relation::husband, has_descendant ? params.husband_with_descendant : params.husband_no_descendant,
             has_descendant ? "descendant present" : "no descendant");
    if (ctx.has(Relation::wife))
        note(Relation::wife, has_descendant ? params.wife_with_descendant : params.wife_no_descendant,
             has_descendant ? "descendant present; shared by all wives" : "no descendant; shared by all wives");

    const int daughters = ctx.count(Relation::daughter);
    if (daughters > 0 && !ctx.has(Relation::son))
        note(Relation::daughter, daughters == 1 ? params.daughter_one : params.daughter_two_plus,
             daughters == 1 ? "sole daughter" : "two or more daughters");

    const int granddaughters = ctx.count(Relation::daughter_of_son);
    if (granddaughters > 0 && !ctx.has(Relation::son) && !ctx.has(Relation::son_of_son)) {
        if (daughters == 0)
            note(Relation::daughter_of_son,
                 granddaughters == 1 ? params.granddaughter_one : params.granddaughter_two_plus,
                 "no daughters");
        else if (daughters == 1)
            note(Relation::daughter_of_son, params.granddaughter_with_one_daughter,
                 "completing two thirds beside one daughter");
        // two+ daughters: excluded above
    }

    if (ctx.has(Relation::mother)) {
        bool reduced = has_descendant || sibling_count >= 2;
        note(Relation::mother, reduced ? params.mother_reduced : params.mother_default,
             reduced ? "descendant or two siblings present" : "no descendant, fewer than two siblings");
    }

    if (ctx.has(Relation::father) && has_descendant)
        note(Relation::father, params.father_fixed_with_descendant, "descendant present");
    if (ctx.has(Relation::paternal_grandfather) && has_descendant)
        note(Relation::paternal_grandfather, params.father_fixed_with_descendant,
             "descendant present, father absent");

    if (ctx.has(Relation::grandmother))
        note(Relation::grandmother, params.grandmother_share, "shared equally when several");

    const int sisters = ctx.count(Relation::full_sister);
    const bool sisters_with_descendant_females =
        sisters > 0 && !ctx.has(Relation::full_brother) &&
        (fixed.count(Relation::daughter) || fixed.count(Relation::daughter_of_son));
    if (sisters > 0 && !ctx.has(Relation::full_brother) && !sisters_with_descendant_females)
        note(Relation::full_sister, sisters == 1 ? params.sister_one : params.sister_two_plus,
             sisters == 1 ? "sole full sister" : "two or more full sisters");

    // special case: spouse + mother + father only — the mother takes a third
    // of what remains after the spouse rather than a third of the whole
    bool spouse_present = ctx.has(Relation::husband) || ctx.has(Relation::wife);
    if (params.umariyyatan && spouse_present && ctx.has(Relation::mother) && ctx.has(Relation::father) &&
        ctx.present.size() == 3 && !has_descendant && sibling_count < 2) {
        Rational spouse_share =
            ctx.has(Relation::husband) ? fixed[Relation::husband] : fixed[Relation::wife];
        Rational adjusted = (Rational(1) - spouse_share) * params.mother_default;
        fixed[Relation::mother] = adjusted;
        out.trace.push_back("mother: share adjusted to one third of the remainder after the spouse (" +
                            adjusted.to_string() + ")");
    }

    // 3. residuary class (first applicable)
    enum class ResiduaryKind { none, sons, sons_sons, father, grandfather, brothers, sisters };
    ResiduaryKind residuary = ResiduaryKind::none;
    if (ctx.has(Relation::son))
        residuary = ResiduaryKind::sons;
    else if (ctx.has(Relation::son_of_son))
        residuary = ResiduaryKind::sons_sons;
    else if (ctx.has(Relation::father) && !has_male_descendant)
        residuary = ResiduaryKind::father;
    else if (ctx.has(Relation::paternal_grandfather) && !has_male_descendant)
        residuary = ResiduaryKind::grandfather;
    else if (ctx.has(Relation::full_brother))
        residuary = ResiduaryKind::brothers;
    else if (sisters_with_descendant_females)
        residuary = ResiduaryKind::sisters;

    Rational fixed_sum(0);
    for (const auto& [rel, share] : fixed) fixed_sum += share;

    // 4. awl: fixed claims exceed the estate; scale everything down
    if (Rational(1) < fixed_sum) {
        out.adjustments_applied.insert(Adjustment::awl);
        out.trace.push_back("awl applied: fixed shares sum to " + fixed_sum.to_string() +
                            "; all shares scaled by " + (Rational(1) / fixed_sum).to_string());
        for (auto& [rel, share] : fixed) share = share / fixed_sum;
        fixed_sum = Rational(1);
    }

    Rational residue = Rational(1) - fixed_sum;

    auto split_male_female = [&](Relation male, Relation female) {
        std::int64_t units = params.male_female_ratio * ctx.count(male) + ctx.count(female);
        Rational unit = residue / Rational(units);
        fixed[male] += unit * Rational(params.male_female_ratio * ctx.count(male));
        if (ctx.has(female)) fixed[female] += unit * Rational(ctx.count(female));
        out.trace.push_back(std::string("residue ") + residue.to_string() + " to " + to_string(male) +
                            (ctx.has(female) ? std::string("/") + to_string(female) : std::string()) +
                            " at " + std::to_string(params.male_female_ratio) + ":1 per head");
    };

    if (residue > Rational(0)) {
        switch (residuary) {
            case ResiduaryKind::sons:
                split_male_female(Relation::son, Relation::daughter);
                break;
            case ResiduaryKind::sons_sons:
                split_male_female(Relation::son_of_son, Relation::daughter_of_son);
                break;
            case ResiduaryKind::father:
                fixed[Relation::father] += residue;
                out.trace.push_back("residue " + residue.to_string() + " to father as residuary");
                break;
            case ResiduaryKind::grandfather:
                fixed[Relation::paternal_grandfather] += residue;
                out.trace.push_back("residue " + residue.to_string() + " to paternal_grandfather as residuary");
                break;
            case ResiduaryKind::brothers:
                split_male_female(Relation::full_brother, Relation::full_sister);
                break;
            case ResiduaryKind::sisters:
                fixed[Relation::full_sister] += residue;
                out.trace.push_back("residue " + residue.to_string() +
                                    " to full sisters as residuaries beside daughters");
                break;
            case ResiduaryKind::none: {
                // 5. radd: return the remainder to non-spouse fixed-share heirs
                Rational spouse_share(0);
                if (fixed.count(Relation::husband)) spouse_share += fixed[Relation::husband];
                if (fixed.count(Relation::wife)) spouse_share += fixed[Relation::wife];
                Rational non_spouse = fixed_sum - spouse_share;
                if (non_spouse > Rational(0)) {
                    out.adjustments_applied.insert(Adjustment::radd);
                    Rational scale = residue / non_spouse;
                    for (auto& [rel, share] : fixed) {
                        if (rel == Relation::husband || rel == Relation::wife) continue;
                        Rational bonus = share * scale;
                        share += bonus;
                        out.trace.push_back(std::string(to_string(rel)) + ": radd adds " + bonus.to_string());
                    }
                } else if (params.radd_to_sole_spouse && spouse_share > Rational(0)) {
                    out.adjustments_applied.insert(Adjustment::radd);
                    Relation spouse = fixed.count(Relation::husband) ? Relation::husband : Relation::wife;
                    fixed[spouse] += residue;
                    out.trace.push_back(std::string(to_string(spouse)) +
                                        ": radd of the full remainder (sole heir)");
                }
                break;
            }
        }
    }

    for (const auto& [rel, share] : fixed) out.shares[rel] = share;

    Rational total(0);
    for (const auto& [rel, share] : out.shares) {
        if (share.is_negative())
            throw Error(std::string("internal: negative share for ") + to_string(rel));
        total += share;
    }
    if (total != Rational(1)) throw Error("internal: shares sum to " + total.to_string() + ", not 1");
    return out;
}

}  // namespace masar
