#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "masar/rational.hpp"

namespace masar {

enum class AssetClass { monetary, gold, silver, trade_goods };

const char* to_string(AssetClass c);
std::optional<AssetClass> asset_class_from_string(const std::string& s);

enum class Relation {
    husband,
    wife,
    son,
    daughter,
    father,
    mother,
    paternal_grandfather,
    grandmother,
    full_brother,
    full_sister,
    son_of_son,
    daughter_of_son,
};

inline constexpr std::array<Relation, 12> kAllRelations = {
    Relation::husband,        Relation::wife,
    Relation::son,            Relation::daughter,
    Relation::father,         Relation::mother,
    Relation::paternal_grandfather, Relation::grandmother,
    Relation::full_brother,   Relation::full_sister,
    Relation::son_of_son,     Relation::daughter_of_son,
};

const char* to_string(Relation r);
std::optional<Relation> relation_from_string(const std::string& s);

struct ZakatParams {
    std::map<AssetClass, Rational> nisab;
    std::map<AssetClass, Rational> rate;
};

// All jurisprudential constants are data, not code. The engine consumes this
// struct; the shipped default file encodes one classical Sunni parameter set
// and can be swapped wholesale. The field inventory is the documented schema.
struct FaraidParams {
    // unconditional exclusion: presence of key removes every listed relation
    std::map<Relation, std::vector<Relation>> blocking;

    Rational husband_no_descendant{1, 2};
    Rational husband_with_descendant{1, 4};
    Rational wife_no_descendant{1, 4};
    Rational wife_with_descendant{1, 8};
    Rational daughter_one{1, 2};
    Rational daughter_two_plus{2, 3};
    Rational granddaughter_one{1, 2};          // daughter_of_son, no daughters
    Rational granddaughter_two_plus{2, 3};
    Rational granddaughter_with_one_daughter{1, 6};
    Rational sister_one{1, 2};
    Rational sister_two_plus{2, 3};
    Rational mother_default{1, 3};
    Rational mother_reduced{1, 6};
    Rational father_fixed_with_descendant{1, 6};
    Rational grandmother_share{1, 6};
    std::int64_t male_female_ratio = 2;  // residuary split within a class

    // policy switches (each is a documented school-level choice)
    bool umariyyatan = true;                  // spouse+mother+father: mother takes 1/3 of remainder
    bool radd_to_sole_spouse = true;          // spouse alone inherits the whole estate
    bool blocked_siblings_reduce_mother = true;
};

struct JurisprudenceConfig {
    std::string version;
    ZakatParams zakat;
    FaraidParams faraid;
    std::uint64_t checksum = 0;  // FNV-1a of the raw file bytes, logged at startup

    static JurisprudenceConfig load_file(const std::string& path);
    static JurisprudenceConfig parse(const std::string& json_text);
    static JurisprudenceConfig builtin_default();
};

std::uint64_t fnv1a_checksum(const std::string& bytes);

}  // namespace masar
