#include "charsum/arith.hpp"

#include <array>
#include <bit>
#include <numeric>

#include "charsum/errors.hpp"

namespace charsum {

u64 pow_mod(u64 base, u64 exp, u64 m) {
    if (m == 1) return 0;
    u64 result = 1;
    base %= m;
    while (exp > 0) {
        if (exp & 1) result = mul_mod(result, base, m);
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    return result;
}

u64 gcd(u64 a, u64 b) { return std::gcd(a, b); }

u64 lcm(u64 a, u64 b) {
    if (a == 0 || b == 0) return 0;
    return a / gcd(a, b) * b;
}

u64 inv_mod(u64 a, u64 m) {
    require(m >= 1, "inv_mod: modulus must be positive");
    if (m == 1) return 0;
    i128 old_r = a % m, r = m;
    i128 old_s = 1, s = 0;
    while (r != 0) {
        i128 quot = old_r / r;
        i128 t = old_r - quot * r;
        old_r = r;
        r = t;
        t = old_s - quot * s;
        old_s = s;
        s = t;
    }
    if (old_r != 1) throw InvalidArgument("inv_mod: argument not invertible");
    i128 inv = old_s % static_cast<i128>(m);
    if (inv < 0) inv += m;
    return static_cast<u64>(inv);
}

namespace {

bool miller_rabin_round(u64 n, u64 d, int s, u64 a) {
    u64 x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) return true;
    for (int i = 1; i < s; ++i) {
        x = mul_mod(x, x, n);
        if (x == n - 1) return true;
    }
    return false;
}

}  // namespace

bool is_prime(u64 n) {
    if (n < 2) return false;
    static constexpr std::array<u64, 12> small = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    for (u64 p : small) {
        if (n % p == 0) return n == p;
    }
    const int s = std::countr_zero(n - 1);
    const u64 d = (n - 1) >> s;
    // The first twelve primes are a witness set valid below 3.3e24.
    for (u64 a : small) {
        if (!miller_rabin_round(n, d, s, a)) return false;
    }
    return true;
}

std::vector<PrimePower> factorize(u64 n) {
    require(n >= 1, "factorize: n must be positive");
    std::vector<PrimePower> out;
    auto take = [&](u64 p) {
        int e = 0;
        u64 v = 1;
        while (n % p == 0) {
            n /= p;
            v *= p;
            ++e;
        }
        if (e > 0) out.push_back({p, e, v});
    };
    take(2);
    take(3);
    for (u64 p = 5; p * p <= n; p += 6) {
        take(p);
        take(p + 2);
    }
    if (n > 1) out.push_back({n, 1, n});
    return out;
}

u64 euler_phi(u64 n) {
    u64 phi = 1;
    for (const auto& pp : factorize(n)) phi *= (pp.value / pp.prime) * (pp.prime - 1);
    return phi;
}

std::vector<std::uint32_t> primes_below(std::uint32_t limit) {
    std::vector<std::uint32_t> primes;
    if (limit <= 2) return primes;
    std::vector<bool> composite(limit, false);
    for (std::uint64_t i = 2; i < limit; ++i) {
        if (composite[i]) continue;
        primes.push_back(static_cast<std::uint32_t>(i));
        for (std::uint64_t j = i * i; j < limit; j += i) composite[j] = true;
    }
    return primes;
}

int jacobi_symbol(i64 n, u64 q) {
    if (q % 2 == 0) throw InvalidArgument("jacobi_symbol: modulus must be odd");
    u64 a = reduce(n, q);
    u64 m = q;
    int sign = 1;
    while (a != 0) {
        while (a % 2 == 0) {
            a /= 2;
            const u64 r = m % 8;
            if (r == 3 || r == 5) sign = -sign;
        }
        std::swap(a, m);
        if (a % 4 == 3 && m % 4 == 3) sign = -sign;
        a %= m;
    }
    return m == 1 ? sign : 0;
}

std::optional<ResidueClass> crt(ResidueClass a, ResidueClass b) {
    const u64 g = gcd(a.modulus, b.modulus);
    const u64 ra = a.residue % a.modulus;
    const u64 rb = b.residue % b.modulus;
    if ((ra % g) != (rb % g)) return std::nullopt;
    const u64 m1 = a.modulus / g;
    const u64 m2 = b.modulus / g;
    const u64 modulus = m1 * b.modulus;
    if (m2 == 1) return ResidueClass{ra % modulus, modulus};
    // ra + a.modulus * t = rb (mod b.modulus)  <=>  m1 * t = (rb - ra)/g (mod m2)
    const i128 delta = (static_cast<i128>(rb) - static_cast<i128>(ra)) / static_cast<i128>(g);
    const u64 rhs = reduce(static_cast<i64>(delta % static_cast<i128>(m2)), m2);
    const u64 t = mul_mod(rhs, inv_mod(m1 % m2, m2), m2);
    const u64 x = static_cast<u64>((static_cast<u128>(a.modulus) * t + ra) % modulus);
    return ResidueClass{x, modulus};
}

}  // namespace charsum
