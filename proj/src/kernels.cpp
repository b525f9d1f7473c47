#include "charsum/kernels.hpp"

#include <cmath>

#include "charsum/errors.hpp"

namespace charsum::kernels {

namespace {

void check_table_size(const DirichletCharacter& chi) {
    require(chi.modulus() <= kMaxTableModulus, "value table: modulus exceeds 2^28");
}

std::vector<std::uint32_t> small_primes(u64 bound) {
    return primes_below(static_cast<std::uint32_t>(std::min<u64>(bound, u64{1} << 31)));
}

}  // namespace

namespace serial {

std::vector<std::int32_t> value_indices(const DirichletCharacter& chi) {
    check_table_size(chi);
    const u64 q = chi.modulus();
    std::vector<std::int32_t> out(q);
    for (u64 n = 0; n < q; ++n) {
        const auto k = chi.value_index(static_cast<i64>(n));
        out[n] = k ? static_cast<std::int32_t>(*k) : -1;
    }
    return out;
}

u64 nonsmooth_count(u64 x, u64 B) {
    require(x <= 50'000'000, "serial::nonsmooth_count: reference sieve limited to 5e7");
    std::vector<std::uint32_t> largest(x + 1, 1);
    for (u64 p = 2; p <= x; ++p) {
        if (largest[p] != 1) continue;  // composite: already has a prime factor
        for (u64 m = p; m <= x; m += p) largest[m] = static_cast<std::uint32_t>(p);
    }
    u64 count = 0;
    for (u64 n = 1; n <= x; ++n)
        if (largest[n] >= B) ++count;
    return count;
}

std::optional<u64> first_prime_in_progression(u64 r, u64 m, u64 lo, u64 hi) {
    r %= m;
    if (lo > hi) return std::nullopt;
    u64 n = lo + (r + m - lo % m) % m;
    for (; n <= hi; n += m)
        if (is_prime(n)) return n;
    return std::nullopt;
}

}  // namespace serial

namespace omp {

std::vector<std::int32_t> value_indices(const DirichletCharacter& chi) {
    check_table_size(chi);
    const UnitGroup& group = chi.group();
    const u64 q = chi.modulus();
    const u64 order = chi.order();

    // Per component, the index contribution of every residue mod p^e.
    std::vector<std::vector<std::int32_t>> local;
    std::vector<u64> moduli;
    for (std::size_t c = 0; c < group.components().size(); ++c) {
        const Component& comp = group.components()[c];
        const u64 pe = comp.power.value;
        const std::size_t first = group.first_generator(c);
        std::vector<std::int32_t> table(pe, -1);
        if (comp.generators.empty()) {
            table[1 % pe] = 0;
        } else if (comp.power.prime == 2 && comp.power.exponent == 2) {
            table[1] = 0;
            table[3] = static_cast<std::int32_t>(chi.step(first));
        } else if (comp.power.prime == 2) {
            const u64 sign_step = chi.step(first);
            const u64 five_step = chi.step(first + 1);
            u64 x = 1, acc = 0;
            for (u64 b = 0; b < pe / 4; ++b) {
                table[x] = static_cast<std::int32_t>(acc);
                table[pe - x] = static_cast<std::int32_t>((acc + sign_step) % order);
                acc = (acc + five_step) % order;
                x = x * 5 % pe;
            }
        } else {
            const u64 g = comp.generators[0].local;
            const u64 s = chi.step(first);
            u64 x = 1, acc = 0;
            for (u64 l = 0; l < comp.generators[0].order; ++l) {
                table[x] = static_cast<std::int32_t>(acc);
                acc = (acc + s) % order;
                x = mul_mod(x, g, pe);
            }
        }
        local.push_back(std::move(table));
        moduli.push_back(pe);
    }

    std::vector<std::int32_t> out(q);
    if (local.size() == 1 && moduli[0] == q) {
        out = std::move(local[0]);
        return out;
    }
    if (local.empty()) {  // q = 1
        out[0] = 0;
        return out;
    }
    const std::size_t components = local.size();
#pragma omp parallel for schedule(static)
    for (i64 n = 0; n < static_cast<i64>(q); ++n) {
        u64 k = 0;
        std::int32_t result = 0;
        for (std::size_t c = 0; c < components; ++c) {
            const std::int32_t v = local[c][static_cast<u64>(n) % moduli[c]];
            if (v < 0) {
                result = -1;
                break;
            }
            k += static_cast<u64>(v);
        }
        out[n] = result < 0 ? -1 : static_cast<std::int32_t>(k % order);
    }
    return out;
}

u64 nonsmooth_count(u64 x, u64 B) {
    if (x == 0) return 0;
    const auto primes = small_primes(B);  // primes < B
    constexpr u64 kBlock = u64{1} << 16;
    const u64 blocks = (x + kBlock - 1) / kBlock;
    u64 count = 0;
#pragma omp parallel for schedule(dynamic, 4) reduction(+ : count)
    for (i64 blk = 0; blk < static_cast<i64>(blocks); ++blk) {
        const u64 lo = 1 + static_cast<u64>(blk) * kBlock;
        const u64 hi = std::min(x, lo + kBlock - 1);
        std::vector<u64> rest(hi - lo + 1);
        for (u64 n = lo; n <= hi; ++n) rest[n - lo] = n;
        for (std::uint32_t p : primes) {
            for (u64 n = (lo + p - 1) / p * p; n <= hi; n += p) {
                u64& v = rest[n - lo];
                do v /= p;
                while (v % p == 0);
            }
        }
        u64 local = 0;
        for (u64 v : rest)
            if (v != 1) ++local;
        count += local;
    }
    return count;
}

std::optional<u64> first_prime_in_progression(u64 r, u64 m, u64 lo, u64 hi) {
    r %= m;
    if (lo > hi) return std::nullopt;
    const u64 start = lo + (r + m - lo % m) % m;
    if (start > hi) return std::nullopt;
    const u64 total = (hi - start) / m + 1;  // candidates in range
    constexpr u64 kCandidates = 2048;
    constexpr u64 kWave = 64;
    const u64 chunks = (total + kCandidates - 1) / kCandidates;
    for (u64 wave = 0; wave < chunks; wave += kWave) {
        const u64 width = std::min(kWave, chunks - wave);
        std::vector<u64> found(width, 0);
#pragma omp parallel for schedule(dynamic, 1)
        for (i64 c = 0; c < static_cast<i64>(width); ++c) {
            const u64 first = (wave + static_cast<u64>(c)) * kCandidates;
            const u64 last = std::min(total, first + kCandidates);
            for (u64 j = first; j < last; ++j) {
                const u64 n = start + j * m;
                if (is_prime(n)) {
                    found[c] = n;
                    break;
                }
            }
        }
        for (u64 f : found)
            if (f != 0) return f;
    }
    return std::nullopt;
}

}  // namespace omp

}  // namespace charsum::kernels
