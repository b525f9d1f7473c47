#pragma once

// Hot loops, each in two flavours: a straightforward serial reference kept
// for testing and benchmarking, and an OpenMP version used by the library.
//
// Parallel reductions split their range into chunks of fixed length kChunk
// and merge the per-chunk partials in chunk order, so a result never depends
// on the thread count or on scheduling. Serial references accumulate in one
// pass and may differ from the parallel result in the last few ulps.

#include <algorithm>
#include <complex>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "charsum/character.hpp"
#include "charsum/compensated.hpp"

namespace charsum::kernels {

enum class Exec { serial, parallel };

inline constexpr std::size_t kChunk = std::size_t{1} << 14;

// Largest modulus for which per-residue tables are built.
inline constexpr u64 kMaxTableModulus = u64{1} << 28;

struct ArgMax {
    i64 index = 0;
    double value = 0.0;
};

namespace serial {

// k(n) with chi(n) = e(k/order) for 0 <= n < q, -1 off the units. One
// discrete log per residue.
std::vector<std::int32_t> value_indices(const DirichletCharacter& chi);

template <class Term>
std::complex<double> sum(std::size_t begin, std::size_t end, Term&& term) {
    CompensatedComplexSum acc;
    for (std::size_t n = begin; n < end; ++n) acc.add(term(n));
    return acc.value();
}

// Smallest index in [begin, end) maximising score(i).
template <class Magnitude>
ArgMax argmax(i64 begin, i64 end, Magnitude&& magnitude) {
    ArgMax best{begin, -std::numeric_limits<double>::infinity()};
    for (i64 i = begin; i < end; ++i) {
        const double v = magnitude(i);
        if (v > best.value) best = {i, v};
    }
    return best;
}

// #{1 <= n <= x : n has a prime factor >= B}, via a largest-prime-factor sieve.
u64 nonsmooth_count(u64 x, u64 B);

// Smallest prime p = r (mod m) with lo <= p <= hi.
std::optional<u64> first_prime_in_progression(u64 r, u64 m, u64 lo, u64 hi);

}  // namespace serial

namespace omp {

// Same contract as serial::value_indices; walks generator powers to build
// local tables, then combines residues in parallel.
std::vector<std::int32_t> value_indices(const DirichletCharacter& chi);

template <class Term>
std::complex<double> sum(std::size_t begin, std::size_t end, Term&& term) {
    if (end <= begin) return {};
    const std::size_t chunks = (end - begin + kChunk - 1) / kChunk;
    if (chunks == 1) return serial::sum(begin, end, term);
    std::vector<CompensatedComplexSum> partial(chunks);
#pragma omp parallel for schedule(static)
    for (std::size_t c = 0; c < chunks; ++c) {
        const std::size_t lo = begin + c * kChunk;
        const std::size_t hi = std::min(end, lo + kChunk);
        CompensatedComplexSum acc;
        for (std::size_t n = lo; n < hi; ++n) acc.add(term(n));
        partial[c] = acc;
    }
    CompensatedComplexSum total;
    for (const auto& p : partial) total.merge(p);
    return total.value();
}

template <class Magnitude>
ArgMax argmax(i64 begin, i64 end, Magnitude&& magnitude) {
    if (end <= begin) return {begin, -std::numeric_limits<double>::infinity()};
    const std::size_t chunks = (static_cast<std::size_t>(end - begin) + kChunk - 1) / kChunk;
    if (chunks == 1) return serial::argmax(begin, end, magnitude);
    std::vector<ArgMax> partial(chunks);
#pragma omp parallel for schedule(static)
    for (std::size_t c = 0; c < chunks; ++c) {
        const i64 lo = begin + static_cast<i64>(c * kChunk);
        const i64 hi = std::min<i64>(end, lo + static_cast<i64>(kChunk));
        ArgMax best{lo, -std::numeric_limits<double>::infinity()};
        for (i64 i = lo; i < hi; ++i) {
            const double v = magnitude(i);
            if (v > best.value) best = {i, v};
        }
        partial[c] = best;
    }
    ArgMax best = partial.front();
    for (const auto& p : partial)
        if (p.value > best.value) best = p;
    return best;
}

// Segmented: divides out every prime below B block by block.
u64 nonsmooth_count(u64 x, u64 B);

// Scans fixed-size chunks of the progression in waves; the earliest chunk
// holding a prime wins, so the answer matches the serial scan.
std::optional<u64> first_prime_in_progression(u64 r, u64 m, u64 lo, u64 hi);

}  // namespace omp

inline std::vector<std::int32_t> value_indices(const DirichletCharacter& chi, Exec exec = Exec::parallel) {
    return exec == Exec::serial ? serial::value_indices(chi) : omp::value_indices(chi);
}

inline u64 nonsmooth_count(u64 x, u64 B, Exec exec = Exec::parallel) {
    return exec == Exec::serial ? serial::nonsmooth_count(x, B) : omp::nonsmooth_count(x, B);
}

inline std::optional<u64> first_prime_in_progression(u64 r, u64 m, u64 lo, u64 hi, Exec exec = Exec::parallel) {
    return exec == Exec::serial ? serial::first_prime_in_progression(r, m, lo, hi)
                                : omp::first_prime_in_progression(r, m, lo, hi);
}

template <class Term>
std::complex<double> sum(std::size_t begin, std::size_t end, Term&& term, Exec exec = Exec::parallel) {
    return exec == Exec::serial ? serial::sum(begin, end, term) : omp::sum(begin, end, term);
}

template <class Magnitude>
ArgMax argmax(i64 begin, i64 end, Magnitude&& magnitude, Exec exec = Exec::parallel) {
    return exec == Exec::serial ? serial::argmax(begin, end, magnitude) : omp::argmax(begin, end, magnitude);
}

}  // namespace charsum::kernels
