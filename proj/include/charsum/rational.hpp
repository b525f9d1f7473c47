#pragma once

#include <compare>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

#include "charsum/arith.hpp"

namespace charsum {

// Reduced fraction over 64-bit integers with a positive denominator.
// Arithmetic goes through 128-bit intermediates and throws
// std::overflow_error if a reduced result no longer fits.
class Rational {
public:
    constexpr Rational() = default;
    Rational(i64 num) : num_(num), den_(1) {}  // NOLINT: implicit from integers
    Rational(i64 num, i64 den);

    // Reduces an exact 128-bit fraction, throwing on overflow after reduction.
    static Rational from_wide(i128 num, i128 den);

    // Accepts "n", "-n", "n/d" and terminating decimals such as "35.5".
    static Rational parse(std::string_view text);

    i64 num() const { return num_; }
    i64 den() const { return den_; }

    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
    i64 floor() const;
    i64 ceil() const;
    bool is_integer() const { return den_ == 1; }

    std::string str() const;

    Rational operator-() const { return from_wide(-static_cast<i128>(num_), den_); }
    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }
    Rational& operator/=(const Rational& o) { return *this = *this / o; }

    friend Rational operator+(const Rational& a, const Rational& b);
    friend Rational operator-(const Rational& a, const Rational& b);
    friend Rational operator*(const Rational& a, const Rational& b);
    friend Rational operator/(const Rational& a, const Rational& b);

    friend bool operator==(const Rational&, const Rational&) = default;
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        return static_cast<i128>(a.num_) * b.den_ <=> static_cast<i128>(b.num_) * a.den_;
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

private:
    i64 num_ = 0;
    i64 den_ = 1;
};

i128 gcd_wide(i128 a, i128 b);

}  // namespace charsum
