#include "masar/jurisprudence.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "masar/errors.hpp"

namespace masar {

const char* to_string(AssetClass c) {
    switch (c) {
        case AssetClass::monetary: return "monetary";
        case AssetClass::gold: return "gold";
        case AssetClass::silver: return "silver";
        case AssetClass::trade_goods: return "trade_goods";
    }
    return "monetary";
}

std::optional<AssetClass> asset_class_from_string(const std::string& s) {
    if (s == "monetary" || s == "cash" || s == "money") return AssetClass::monetary;
    if (s == "gold") return AssetClass::gold;
    if (s == "silver") return AssetClass::silver;
    if (s == "trade_goods" || s == "trade") return AssetClass::trade_goods;
    return std::nullopt;
}

const char* to_string(Relation r) {
    switch (r) {
        case Relation::husband: return "husband";
        case Relation::wife: return "wife";
        case Relation::son: return "son";
        case Relation::daughter: return "daughter";
        case Relation::father: return "father";
        case Relation::mother: return "mother";
        case Relation::paternal_grandfather: return "paternal_grandfather";
        case Relation::grandmother: return "grandmother";
        case Relation::full_brother: return "full_brother";
        case Relation::full_sister: return "full_sister";
        case Relation::son_of_son: return "son_of_son";
        case Relation::daughter_of_son: return "daughter_of_son";
    }
    return "husband";
}

std::optional<Relation> relation_from_string(const std::string& s) {
    for (Relation r : kAllRelations)
        if (s == to_string(r)) return r;
    return std::nullopt;
}

std::uint64_t fnv1a_checksum(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

namespace {

Rational rat(const nlohmann::json& j, const char* key, Rational fallback) {
    if (!j.contains(key)) return fallback;
    return Rational::parse(j.at(key).get<std::string>());
}

}  // namespace

JurisprudenceConfig JurisprudenceConfig::parse(const std::string& json_text) {
    nlohmann::json j = nlohmann::json::parse(json_text);
    JurisprudenceConfig cfg;
    cfg.version = j.value("version", "unversioned");
    cfg.checksum = fnv1a_checksum(json_text);

    if (j.contains("zakat")) {
        const auto& z = j["zakat"];
        const nlohmann::json nisab = z.value("nisab", nlohmann::json::object());
        for (const auto& [key, value] : nisab.items()) {
            auto cls = asset_class_from_string(key);
            if (!cls) throw InvalidInput("unknown zakat asset class '" + key + "'");
            cfg.zakat.nisab[*cls] = Rational::parse(value.get<std::string>());
        }
        const nlohmann::json rate = z.value("rate", nlohmann::json::object());
        for (const auto& [key, value] : rate.items()) {
            auto cls = asset_class_from_string(key);
            if (!cls) throw InvalidInput("unknown zakat asset class '" + key + "'");
            cfg.zakat.rate[*cls] = Rational::parse(value.get<std::string>());
        }
    }

    if (j.contains("inheritance")) {
        const auto& inh = j["inheritance"];
        auto& f = cfg.faraid;
        if (inh.contains("blocking")) {
            for (const auto& [blocker, blocked_list] : inh["blocking"].items()) {
                auto b = relation_from_string(blocker);
                if (!b) throw InvalidInput("unknown relation in blocking table: " + blocker);
                std::vector<Relation> blocked;
                for (const auto& item : blocked_list) {
                    auto r = relation_from_string(item.get<std::string>());
                    if (!r) throw InvalidInput("unknown relation in blocking table: " + item.dump());
                    blocked.push_back(*r);
                }
                f.blocking[*b] = std::move(blocked);
            }
        }
        if (inh.contains("fixed_shares")) {
            const auto& s = inh["fixed_shares"];
            auto section = [&](const char* name) {
                return s.contains(name) ? s[name] : nlohmann::json::object();
            };
            auto husband = section("husband");
            f.husband_no_descendant = rat(husband, "no_descendant", f.husband_no_descendant);
            f.husband_with_descendant = rat(husband, "with_descendant", f.husband_with_descendant);
            auto wife = section("wife");
            f.wife_no_descendant = rat(wife, "no_descendant", f.wife_no_descendant);
            f.wife_with_descendant = rat(wife, "with_descendant", f.wife_with_descendant);
            auto daughter = section("daughter");
            f.daughter_one = rat(daughter, "one", f.daughter_one);
            f.daughter_two_plus = rat(daughter, "two_plus", f.daughter_two_plus);
            auto gd = section("daughter_of_son");
            f.granddaughter_one = rat(gd, "one", f.granddaughter_one);
            f.granddaughter_two_plus = rat(gd, "two_plus", f.granddaughter_two_plus);
            f.granddaughter_with_one_daughter = rat(gd, "with_one_daughter", f.granddaughter_with_one_daughter);
            auto sister = section("full_sister");
            f.sister_one = rat(sister, "one", f.sister_one);
            f.sister_two_plus = rat(sister, "two_plus", f.sister_two_plus);
            auto mother = section("mother");
            f.mother_default = rat(mother, "default", f.mother_default);
            f.mother_reduced = rat(mother, "reduced", f.mother_reduced);
            auto father = section("father");
            f.father_fixed_with_descendant = rat(father, "with_descendant", f.father_fixed_with_descendant);
            auto grandmother = section("grandmother");
            f.grandmother_share = rat(grandmother, "share", f.grandmother_share);
        }
        if (inh.contains("male_female_ratio"))
            f.male_female_ratio = inh["male_female_ratio"].get<std::int64_t>();
        if (inh.contains("policies")) {
            const auto& p = inh["policies"];
            f.umariyyatan = p.value("umariyyatan", f.umariyyatan);
            f.radd_to_sole_spouse = p.value("radd_to_sole_spouse", f.radd_to_sole_spouse);
            f.blocked_siblings_reduce_mother =
                p.value("blocked_siblings_reduce_mother", f.blocked_siblings_reduce_mother);
        }
    }
    return cfg;
}

JurisprudenceConfig JurisprudenceConfig::load_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInput("cannot open jurisprudence config: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

JurisprudenceConfig JurisprudenceConfig::builtin_default() {
    JurisprudenceConfig cfg;
    cfg.version = "builtin-1";
    cfg.zakat.nisab = {
        {AssetClass::monetary, Rational(5000)},
        {AssetClass::gold, Rational(85)},
        {AssetClass::silver, Rational(595)},
        {AssetClass::trade_goods, Rational(5000)},
    };
    cfg.zakat.rate = {
        {AssetClass::monetary, Rational(1, 40)},
        {AssetClass::gold, Rational(1, 40)},
        {AssetClass::silver, Rational(1, 40)},
        {AssetClass::trade_goods, Rational(1, 40)},
    };
    cfg.faraid.blocking = {
        {Relation::son,
         {Relation::son_of_son, Relation::daughter_of_son, Relation::full_brother, Relation::full_sister}},
        {Relation::son_of_son, {Relation::full_brother, Relation::full_sister}},
        {Relation::father,
         {Relation::paternal_grandfather, Relation::full_brother, Relation::full_sister}},
        {Relation::paternal_grandfather, {Relation::full_brother, Relation::full_sister}},
        {Relation::mother, {Relation::grandmother}},
    };
    return cfg;
}

}  // namespace masar
