#include "masar/rational.hpp"

#include <cctype>
#include <cstdlib>
#include <limits>

namespace masar {

namespace {

constexpr std::int64_t kMax = std::numeric_limits<std::int64_t>::max();
constexpr std::int64_t kMin = std::numeric_limits<std::int64_t>::min();

}  // namespace

std::int64_t Rational::checked_negate(std::int64_t v) {
    if (v == kMin) throw ArithmeticOverflow();
    return -v;
}

std::int64_t Rational::narrow(__int128 v) {
    if (v > (__int128)kMax || v < (__int128)kMin) throw ArithmeticOverflow();
    return static_cast<std::int64_t>(v);
}

void Rational::normalize() {
    if (den_ == 0) throw InvalidInput("rational with zero denominator");
    if (den_ < 0) {
        num_ = checked_negate(num_);
        den_ = checked_negate(den_);
    }
    std::int64_t g = std::gcd(num_ < 0 ? checked_negate(num_) : num_, den_);
    if (g > 1) {
        num_ /= g;
        den_ /= g;
    }
}

Rational& Rational::operator+=(const Rational& o) {
    __int128 n = (__int128)num_ * o.den_ + (__int128)o.num_ * den_;
    __int128 d = (__int128)den_ * o.den_;
    // Reduce in 128-bit before narrowing so mid-sized denominators survive.
    __int128 a = n < 0 ? -n : n;
    __int128 b = d;
    while (b != 0) {
        __int128 t = a % b;
        a = b;
        b = t;
    }
    if (a > 1) {
        n /= a;
        d /= a;
    }
    num_ = narrow(n);
    den_ = narrow(d);
    return *this;
}

Rational& Rational::operator*=(const Rational& o) {
    // Cross-reduce first to keep intermediates small.
    std::int64_t g1 = std::gcd(num_ < 0 ? checked_negate(num_) : num_, o.den_);
    std::int64_t g2 = std::gcd(o.num_ < 0 ? checked_negate(o.num_) : o.num_, den_);
    __int128 n = (__int128)(num_ / g1) * (o.num_ / g2);
    __int128 d = (__int128)(den_ / g2) * (o.den_ / g1);
    num_ = narrow(n);
    den_ = narrow(d);
    return *this;
}

Rational& Rational::operator/=(const Rational& o) {
    if (o.num_ == 0) throw InvalidInput("division by zero rational");
    Rational inv(o.den_, o.num_);
    return *this *= inv;
}

Rational Rational::parse(const std::string& text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) throw InvalidInput("empty rational literal");

    auto slash = s.find('/');
    if (slash != std::string::npos) {
        std::int64_t n = std::stoll(s.substr(0, slash));
        std::int64_t d = std::stoll(s.substr(slash + 1));
        return Rational(n, d);
    }
    auto dot = s.find('.');
    if (dot != std::string::npos) {
        std::string ip = s.substr(0, dot);
        std::string fp = s.substr(dot + 1);
        if (fp.empty()) fp = "0";
        bool neg = !ip.empty() && ip[0] == '-';
        if (neg || (!ip.empty() && ip[0] == '+')) ip.erase(0, 1);
        if (ip.empty()) ip = "0";
        for (char c : ip + fp)
            if (!std::isdigit(static_cast<unsigned char>(c))) throw InvalidInput("bad decimal literal '" + text + "'");
        if (fp.size() > 18) throw InvalidInput("decimal literal too precise '" + text + "'");
        std::int64_t scale = 1;
        for (size_t i = 0; i < fp.size(); ++i) scale *= 10;
        __int128 n = (__int128)std::stoll(ip) * scale + std::stoll(fp);
        if (neg) n = -n;
        return Rational(narrow(n), scale);
    }
    return Rational(std::stoll(s));
}

std::string Rational::to_string() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
}

std::string Rational::to_decimal_string(int decimals) const {
    bool neg = num_ < 0;
    __int128 n = neg ? -(__int128)num_ : (__int128)num_;
    __int128 scale = 1;
    for (int i = 0; i < decimals; ++i) scale *= 10;
    __int128 scaled = n * scale;
    __int128 q = scaled / den_;
    __int128 r = scaled % den_;
    // round half to even
    __int128 twice = r * 2;
    if (twice > den_ || (twice == den_ && (q % 2) != 0)) ++q;

    std::string digits;
    if (q == 0) digits = "0";
    while (q > 0) {
        digits.insert(digits.begin(), static_cast<char>('0' + (int)(q % 10)));
        q /= 10;
    }
    while ((int)digits.size() <= decimals) digits.insert(digits.begin(), '0');
    std::string out = digits.substr(0, digits.size() - decimals);
    if (decimals > 0) out += "." + digits.substr(digits.size() - decimals);
    if (neg && out.find_first_not_of("0.") != std::string::npos) out.insert(out.begin(), '-');
    return out;
}

}  // namespace masar
