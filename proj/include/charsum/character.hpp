#pragma once

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "charsum/unit_group.hpp"

namespace charsum {

// e(k/m) = exp(2 pi i k/m). Exact for m dividing 4, and within a few ulps otherwise.
std::complex<double> root_of_unity(u64 k, u64 m);

// A character value held exactly as the root of unity e(k/m), in lowest terms,
// or as zero. `approx` is the matching double-precision value.
struct CharacterValue {
    bool zero = false;
    u64 k = 0;
    u64 m = 1;
    std::complex<double> approx{1.0, 0.0};

    static CharacterValue zero_value();
    static CharacterValue root(u64 k, u64 m);

    CharacterValue conj() const;
    std::string str() const;  // "0", "1", "-1", or "e(k/m)"

    friend CharacterValue operator*(const CharacterValue& a, const CharacterValue& b);
    friend bool operator==(const CharacterValue& a, const CharacterValue& b) {
        return a.zero == b.zero && (a.zero || (a.k == b.k && a.m == b.m));
    }
};

enum class Parity { even, odd };

// A Dirichlet character mod q, stored as an exponent vector over the
// generators of a UnitGroup: chi(g_i) = e(e_i / d_i). Order, parity and
// conductor are derived from the exponents at construction.
class DirichletCharacter {
public:
    DirichletCharacter(UnitGroupPtr group, std::vector<u64> exponents);

    static DirichletCharacter principal(u64 q);

    u64 modulus() const { return group_->modulus(); }
    const UnitGroup& group() const { return *group_; }
    const UnitGroupPtr& group_ptr() const { return group_; }
    const std::vector<u64>& exponents() const { return exponents_; }

    u64 order() const { return order_; }
    Parity parity() const { return parity_; }
    bool is_odd() const { return parity_ == Parity::odd; }
    bool is_even() const { return parity_ == Parity::even; }
    u64 conductor() const { return conductor_; }
    bool primitive() const { return conductor_ == modulus(); }
    bool is_principal() const { return order_ == 1; }
    bool is_real() const { return order_ <= 2; }

    // k with chi(n) = e(k/order); nullopt when gcd(n, q) > 1.
    std::optional<u64> value_index(i64 n) const;

    // Index contribution of generator i: chi(g_i) = e(step(i)/order).
    u64 step(std::size_t i) const { return steps_[i]; }

    CharacterValue operator()(i64 n) const;

    std::string label() const;  // "q:e1,e2,..."

    friend bool operator==(const DirichletCharacter& a, const DirichletCharacter& b) {
        return a.modulus() == b.modulus() && a.exponents_ == b.exponents_;
    }

private:
    UnitGroupPtr group_;
    std::vector<u64> exponents_;
    std::vector<u64> steps_;
    u64 order_ = 1;
    Parity parity_ = Parity::even;
    u64 conductor_ = 1;
};

CharacterValue eval(const DirichletCharacter& chi, i64 n);

// The Legendre symbol (. | q) as a character, for an odd prime q.
DirichletCharacter quadratic_character(u64 q);

// chi1 * psi on the modulus q1 * b; the moduli must be coprime.
DirichletCharacter product_character(const DirichletCharacter& chi1, const DirichletCharacter& psi);

DirichletCharacter conjugate(const DirichletCharacter& chi);

u64 conductor(const DirichletCharacter& chi);

// Characters are indexed by their exponent vector read as a mixed-radix
// number, first generator least significant.
DirichletCharacter character_from_index(const UnitGroupPtr& group, u64 index);
u64 character_index(const DirichletCharacter& chi);

std::vector<DirichletCharacter> enumerate_characters(u64 q);
std::vector<DirichletCharacter> enumerate_characters(const UnitGroupPtr& group);
std::vector<DirichletCharacter> primitive_characters(u64 q);

// Parses "e1,e2,..." into an exponent vector for the given group.
DirichletCharacter character_from_exponents(const UnitGroupPtr& group, std::string_view text);

}  // namespace charsum
