#pragma once
// Characters of large conductor that agree with a fixed small character on
// all small primes, built from Legendre-symbol conditions compiled into
// residue classes.

#include <optional>
#include <vector>

#include "charsum/arith.hpp"
#include "charsum/character.hpp"
#include "charsum/kernels.hpp"

namespace charsum {

// (p | q) = symbol for prime q. p = 2 is allowed.
struct LocalCondition {
    u64 prime = 2;
    int symbol = 1;
};

struct SearchSpec {
    std::vector<LocalCondition> conditions;
    ResidueClass parity{1, 1};  // q = residue (mod 1, 2, 4 or 8)
    u64 lo = 2;
    u64 hi = u64{1} << 62;
    bool want_prime = true;
    u64 avoid = 1;  // skip q sharing a factor with this
};

inline constexpr u64 kMaxSearchModulus = u64{1} << 62;
inline constexpr u64 kMaxDepth = 40;

// Least residue r mod m = 8 prod p such that every q = r (mod m) satisfies
// the conditions and the parity class. Throws Infeasible when no class does.
ResidueClass reciprocity_conditions(const SearchSpec& spec);

// True when q meets every condition in `spec`, checked with Jacobi symbols.
bool satisfies(const SearchSpec& spec, u64 q);

// Smallest prime p = r (mod m) in [lo, hi].
std::optional<u64> find_prime_in_class(u64 r, u64 m, u64 lo, u64 hi, kernels::Exec exec = kernels::Exec::parallel);

// Smallest q in [lo, hi] satisfying `spec` (prime when want_prime), over
// all admissible classes at once.
std::optional<u64> find_modulus(const SearchSpec& spec);

struct PretentiousModulus {
    u64 q1 = 0;
    u64 depth = 0;              // largest y with agreement on every n < y
    ResidueClass residue_class;  // admissible class of q1 mod 8 prod p
};

// Prime q = 1 (mod 4) with (n | q) = chi_{-4}(n) for all odd n < y.
PretentiousModulus paley_modulus(u64 y, u64 hi = kMaxSearchModulus);

// Prime q1 = 3 (mod 4) with (p | q1) = 1 for all primes p < y, coprime to avoid.
PretentiousModulus residue_one_modulus(u64 y, u64 avoid = 1, u64 hi = kMaxSearchModulus);

// chi = chi1 psi with chi1 = (. | q1) from residue_one_modulus(y, b).
DirichletCharacter build_thm2_character(const DirichletCharacter& psi, u64 y);

// Spec for the conditions of residue_one_modulus and paley_modulus.
SearchSpec residue_one_spec(u64 y, u64 avoid = 1);
SearchSpec paley_spec(u64 y);

}  // namespace charsum
