#pragma once

#include <cstdint>
#include <numeric>
#include <string>

#include "masar/errors.hpp"

namespace masar {

// Exact rational over 64-bit integers. Always normalized: denominator > 0,
// gcd(|num|, den) == 1. Intermediate products go through __int128 and throw
// ArithmeticOverflow instead of wrapping. The jurisprudential calculators
// must sum to exact unity, so there is no floating point on those paths.
class Rational {
  public:
    constexpr Rational() : num_(0), den_(1) {}
    constexpr Rational(std::int64_t n) : num_(n), den_(1) {}  // NOLINT: implicit by design
    Rational(std::int64_t n, std::int64_t d) : num_(n), den_(d) { normalize(); }

    // Accepts "3", "-7/8" and decimal notation "10000.25".
    static Rational parse(const std::string& text);

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    bool is_zero() const { return num_ == 0; }
    bool is_negative() const { return num_ < 0; }

    Rational operator-() const { return Rational(checked_negate(num_), den_, already_normal_tag{}); }

    Rational& operator+=(const Rational& o);
    Rational& operator-=(const Rational& o) { return *this += -o; }
    Rational& operator*=(const Rational& o);
    Rational& operator/=(const Rational& o);

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) {
        return (__int128)a.num_ * b.den_ < (__int128)b.num_ * a.den_;
    }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
    friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    // "7/8" for proper fractions, "3" for integers.
    std::string to_string() const;

    // Fixed-point decimal string, round-half-even. Presentation only.
    std::string to_decimal_string(int decimals) const;

  private:
    struct already_normal_tag {};
    Rational(std::int64_t n, std::int64_t d, already_normal_tag) : num_(n), den_(d) {}

    static std::int64_t checked_negate(std::int64_t v);
    static std::int64_t narrow(__int128 v);
    void normalize();

    std::int64_t num_;
    std::int64_t den_;
};

}  // namespace masar
