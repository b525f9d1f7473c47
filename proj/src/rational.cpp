#include "charsum/rational.hpp"

#include <charconv>
#include <limits>
#include <stdexcept>

#include "charsum/errors.hpp"

namespace charsum {

i128 gcd_wide(i128 a, i128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        i128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

Rational::Rational(i64 num, i64 den) {
    if (den == 0) throw InvalidArgument("Rational: zero denominator");
    *this = from_wide(num, den);
}

Rational Rational::from_wide(i128 num, i128 den) {
    if (den == 0) throw InvalidArgument("Rational: zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const i128 g = gcd_wide(num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
    constexpr i128 lo = std::numeric_limits<i64>::min() + 1;
    constexpr i128 hi = std::numeric_limits<i64>::max();
    if (num < lo || num > hi || den > hi) throw std::overflow_error("Rational: result exceeds 64 bits");
    Rational r;
    r.num_ = static_cast<i64>(num);
    r.den_ = static_cast<i64>(den);
    return r;
}

Rational Rational::parse(std::string_view text) {
    auto parse_int = [](std::string_view s) {
        i64 v = 0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
            throw InvalidArgument("Rational: cannot parse '" + std::string(s) + "'");
        return v;
    };
    const auto slash = text.find('/');
    const auto dot = text.find('.');
    if (slash == std::string_view::npos && dot != std::string_view::npos) {
        // terminating decimal, converted exactly
        const auto frac = text.substr(dot + 1);
        if (frac.empty() || frac.size() > 18 || frac.front() == '-' || frac.front() == '+')
            throw InvalidArgument("Rational: cannot parse '" + std::string(text) + "'");
        const bool neg = !text.empty() && text.front() == '-';
        auto whole = text.substr(0, dot);
        const i64 w = (whole == "-" || whole.empty()) ? 0 : parse_int(whole);
        const i64 f = parse_int(frac);
        i128 den = 1;
        for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
        const i128 num = static_cast<i128>(w) * den + (neg ? -f : f);
        return from_wide(num, den);
    }
    if (slash == std::string_view::npos) return Rational(parse_int(text));
    return Rational(parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1)));
}

i64 Rational::floor() const {
    i64 q = num_ / den_;
    if ((num_ % den_ != 0) && (num_ < 0)) --q;
    return q;
}

i64 Rational::ceil() const {
    i64 q = num_ / den_;
    if ((num_ % den_ != 0) && (num_ > 0)) ++q;
    return q;
}

std::string Rational::str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational operator+(const Rational& a, const Rational& b) {
    return Rational::from_wide(static_cast<i128>(a.num_) * b.den_ + static_cast<i128>(b.num_) * a.den_,
                               static_cast<i128>(a.den_) * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) {
    return Rational::from_wide(static_cast<i128>(a.num_) * b.den_ - static_cast<i128>(b.num_) * a.den_,
                               static_cast<i128>(a.den_) * b.den_);
}

Rational operator*(const Rational& a, const Rational& b) {
    return Rational::from_wide(static_cast<i128>(a.num_) * b.num_, static_cast<i128>(a.den_) * b.den_);
}

Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw InvalidArgument("Rational: division by zero");
    return Rational::from_wide(static_cast<i128>(a.num_) * b.den_, static_cast<i128>(a.den_) * b.num_);
}

}  // namespace charsum
