#pragma once

// Word-size modular arithmetic and elementary number theory.

#include <cstdint>
#include <optional>
#include <vector>

namespace charsum {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;
using i128 = __int128;

struct PrimePower {
    u64 prime;
    int exponent;
    u64 value;  // prime^exponent

    friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

struct ResidueClass {
    u64 residue;
    u64 modulus;

    friend bool operator==(const ResidueClass&, const ResidueClass&) = default;
};

inline u64 mul_mod(u64 a, u64 b, u64 m) { return static_cast<u64>(u128(a) * b % m); }
u64 pow_mod(u64 base, u64 exp, u64 m);

// Least nonnegative residue of a mod m, for any sign of a.
inline u64 reduce(i64 a, u64 m) {
    if (a >= 0) return static_cast<u64>(a) % m;
    u64 r = static_cast<u64>(-(a + 1)) % m;  // avoids overflow at INT64_MIN
    return m - 1 - r;
}

u64 gcd(u64 a, u64 b);
u64 lcm(u64 a, u64 b);

// Inverse of a modulo m; throws InvalidArgument when gcd(a, m) != 1.
u64 inv_mod(u64 a, u64 m);

// Deterministic Miller-Rabin for all 64-bit n.
bool is_prime(u64 n);

// Trial division; fine for n up to about 2^44.
std::vector<PrimePower> factorize(u64 n);

u64 euler_phi(u64 n);

// Primes p < limit, via Eratosthenes.
std::vector<std::uint32_t> primes_below(std::uint32_t limit);

// Jacobi symbol (n | q) for odd q >= 1. Throws InvalidArgument for even q.
int jacobi_symbol(i64 n, u64 q);

// x = r1 (mod m1), x = r2 (mod m2); nullopt when incompatible.
std::optional<ResidueClass> crt(ResidueClass a, ResidueClass b);

}  // namespace charsum
