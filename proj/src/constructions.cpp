#include "charsum/constructions.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>

#include "charsum/errors.hpp"

namespace charsum {

namespace {

void validate(const SearchSpec& spec) {
    std::map<u64, int> seen;
    for (const auto& c : spec.conditions) {
        require(is_prime(c.prime), "search: condition prime " + std::to_string(c.prime) + " is not prime");
        require(c.symbol == 1 || c.symbol == -1, "search: required symbol must be +1 or -1");
        const auto [it, fresh] = seen.emplace(c.prime, c.symbol);
        if (!fresh && it->second != c.symbol)
            throw Infeasible("search: conflicting conditions at " + std::to_string(c.prime));
    }
    const u64 pm = spec.parity.modulus;
    require(pm == 1 || pm == 2 || pm == 4 || pm == 8, "search: parity class must be modulo 1, 2, 4 or 8");
    require(spec.lo < spec.hi, "search: need lo < hi");
    require(spec.hi <= kMaxSearchModulus, "search: hi exceeds 2^62");
}

u64 class_modulus(const SearchSpec& spec) {
    std::set<u64> odd;
    for (const auto& c : spec.conditions)
        if (c.prime != 2) odd.insert(c.prime);
    u64 m = 8;
    for (u64 p : odd) m *= p;
    return m;
}

// Symbol (p | q) for odd q, read off q mod 8 for p = 2.
int symbol(u64 p, u64 q) {
    if (p == 2) {
        const u64 r = q % 8;
        return (r == 1 || r == 7) ? 1 : -1;
    }
    return jacobi_symbol(static_cast<i64>(p), q);
}

bool matches(const SearchSpec& spec, u64 q) {
    if (q % spec.parity.modulus != spec.parity.residue % spec.parity.modulus) return false;
    for (const auto& c : spec.conditions)
        if (q % c.prime == 0 || symbol(c.prime, q) != c.symbol) return false;
    return true;
}

u64 agreement_depth(u64 q, bool paley) {
    // chi_{-4}(n) for Paley, the constant 1 otherwise; even n skipped for Paley.
    u64 n = 1;
    for (;; ++n) {
        if (n >= q) return n;
        if (paley && n % 2 == 0) continue;
        const int want = paley ? (n % 4 == 1 ? 1 : -1) : 1;
        if (jacobi_symbol(static_cast<i64>(n), q) != want) return n;
    }
}

PretentiousModulus pretentious(const SearchSpec& spec, u64 y, bool paley) {
    const auto q = find_modulus(spec);
    if (!q) throw NotFound("no admissible prime up to " + std::to_string(spec.hi) + " for depth " + std::to_string(y));
    PretentiousModulus out;
    out.q1 = *q;
    out.depth = agreement_depth(*q, paley);
    const u64 m = class_modulus(spec);
    out.residue_class = {*q % m, m};
    if (out.depth < y) throw std::logic_error("search: verification scan failed for q = " + std::to_string(*q));
    return out;
}

}  // namespace

bool satisfies(const SearchSpec& spec, u64 q) {
    if (q % 2 == 0) return false;
    if (q % spec.parity.modulus != spec.parity.residue % spec.parity.modulus) return false;
    for (const auto& c : spec.conditions) {
        const int s = c.prime == 2 ? jacobi_symbol(2, q) : jacobi_symbol(static_cast<i64>(c.prime), q);
        if (s != c.symbol) return false;
    }
    return true;
}

ResidueClass reciprocity_conditions(const SearchSpec& spec) {
    validate(spec);
    const u64 pm = spec.parity.modulus;
    const u64 pr = spec.parity.residue % pm;
    // Only the class mod 8 can clash: the symbol at 2 against the parity class.
    bool feasible = false;
    for (u64 r = 1; r < 8; r += 2) {
        if (r % pm != pr % std::min<u64>(pm, 8)) continue;
        const auto two = std::find_if(spec.conditions.begin(), spec.conditions.end(),
                                      [](const LocalCondition& c) { return c.prime == 2; });
        if (two == spec.conditions.end() || symbol(2, r) == two->symbol) feasible = true;
    }
    if (!feasible) throw Infeasible("search: conditions contradict the parity class");

    const u64 m = class_modulus(spec);
    for (u64 r = 1; r < m; r += 2)
        if (gcd(r, m) == 1 && matches(spec, r)) return {r, m};
    throw Infeasible("search: no admissible residue class");
}

std::optional<u64> find_prime_in_class(u64 r, u64 m, u64 lo, u64 hi, kernels::Exec exec) {
    require(m >= 1, "find_prime_in_class: modulus must be positive");
    require(hi <= kMaxSearchModulus, "find_prime_in_class: hi exceeds 2^62");
    if (gcd(r % m, m) != 1) throw Infeasible("find_prime_in_class: gcd(r, m) > 1");
    return kernels::first_prime_in_progression(r % m, m, lo, hi, exec);
}

std::optional<u64> find_modulus(const SearchSpec& spec) {
    reciprocity_conditions(spec);  // validates and rejects infeasible specs
    for (u64 q = spec.lo | 1; q <= spec.hi; q += 2) {
        if (!matches(spec, q)) continue;
        if (spec.avoid > 1 && gcd(q, spec.avoid) != 1) continue;
        if (spec.want_prime && !is_prime(q)) continue;
        return q;
    }
    return std::nullopt;
}

SearchSpec residue_one_spec(u64 y, u64 avoid) {
    require(y >= 2 && y <= kMaxDepth, "residue_one_modulus: depth must lie in [2, 40]");
    SearchSpec spec;
    spec.parity = {3, 4};
    spec.avoid = avoid;
    for (u64 p : primes_below(static_cast<std::uint32_t>(y))) spec.conditions.push_back({p, 1});
    return spec;
}

SearchSpec paley_spec(u64 y) {
    require(y >= 2 && y <= kMaxDepth, "paley_modulus: depth must lie in [2, 40]");
    SearchSpec spec;
    spec.parity = {1, 4};
    for (u64 p : primes_below(static_cast<std::uint32_t>(y)))
        if (p != 2) spec.conditions.push_back({p, p % 4 == 1 ? 1 : -1});
    return spec;
}

PretentiousModulus paley_modulus(u64 y, u64 hi) {
    SearchSpec spec = paley_spec(y);
    spec.hi = hi;
    return pretentious(spec, y, true);
}

PretentiousModulus residue_one_modulus(u64 y, u64 avoid, u64 hi) {
    SearchSpec spec = residue_one_spec(y, avoid);
    spec.hi = hi;
    return pretentious(spec, y, false);
}

DirichletCharacter build_thm2_character(const DirichletCharacter& psi, u64 y) {
    const u64 b = psi.modulus();
    require(psi.primitive(), "build_thm2_character: psi must be primitive");
    const PretentiousModulus found = residue_one_modulus(y, b);
    return product_character(quadratic_character(found.q1), psi);
}

}  // namespace charsum
