#include "charsum/unit_group.hpp"

#include <cmath>
#include <limits>
#include <unordered_map>

#include "charsum/errors.hpp"

namespace charsum {

namespace {

constexpr std::uint32_t kNoLog = std::numeric_limits<std::uint32_t>::max();

// d in [0, n) with g^d = h (mod m), g of order n.
u64 baby_step_giant_step(u64 g, u64 h, u64 n, u64 m) {
    if (n <= 64) {
        u64 x = 1;
        for (u64 d = 0; d < n; ++d) {
            if (x == h) return d;
            x = mul_mod(x, g, m);
        }
        throw InvalidArgument("discrete_log: element not in subgroup");
    }
    const u64 s = static_cast<u64>(std::ceil(std::sqrt(static_cast<double>(n))));
    std::unordered_map<u64, u64> baby;
    baby.reserve(s * 2);
    u64 x = 1;
    for (u64 j = 0; j < s; ++j) {
        baby.emplace(x, j);
        x = mul_mod(x, g, m);
    }
    const u64 giant = inv_mod(pow_mod(g, s, m), m);
    u64 y = h;
    for (u64 i = 0; i <= s; ++i) {
        if (auto it = baby.find(y); it != baby.end()) return (i * s + it->second) % n;
        y = mul_mod(y, giant, m);
    }
    throw InvalidArgument("discrete_log: element not in subgroup");
}

std::vector<PrimePower> merge_factors(std::vector<PrimePower> a, const PrimePower& extra) {
    if (extra.exponent == 0) return a;
    for (auto& pp : a) {
        if (pp.prime == extra.prime) {
            pp.exponent += extra.exponent;
            pp.value *= extra.value;
            return a;
        }
    }
    a.push_back(extra);
    return a;
}

}  // namespace

u64 discrete_log(u64 g, u64 h, u64 order, std::span<const PrimePower> order_factors, u64 m) {
    u64 x = 0;
    u64 modulus = 1;
    for (const auto& pf : order_factors) {
        const u64 r = pf.prime;
        const u64 cofactor = order / pf.value;
        const u64 gamma = pow_mod(g, cofactor, m);
        const u64 target = pow_mod(h, cofactor, m);
        const u64 gamma0 = pow_mod(gamma, pf.value / r, m);  // order r
        u64 xr = 0;
        u64 rk = 1;
        for (int k = 0; k < pf.exponent; ++k) {
            const u64 strip = inv_mod(pow_mod(gamma, xr, m), m);
            const u64 hk = pow_mod(mul_mod(strip, target, m), pf.value / (rk * r), m);
            xr += baby_step_giant_step(gamma0, hk, r, m) * rk;
            rk *= r;
        }
        const auto combined = crt({x, modulus}, {xr, pf.value});
        x = combined->residue;
        modulus = combined->modulus;
    }
    return x % order;
}

u64 least_primitive_root(u64 p, int e) {
    require(p > 2 && is_prime(p) && e >= 1, "least_primitive_root: need an odd prime power");
    const auto factors = factorize(p - 1);
    const u64 p2 = p * p;
    for (u64 g = 2;; ++g) {
        if (g % p == 0) continue;
        bool primitive = true;
        for (const auto& f : factors) {
            if (pow_mod(g, (p - 1) / f.prime, p) == 1) {
                primitive = false;
                break;
            }
        }
        if (!primitive) continue;
        if (e >= 2 && pow_mod(g, p - 1, p2) == 1) continue;
        return g;
    }
}

UnitGroup::UnitGroup(u64 q) : q_(q) {
    require(q >= 1, "unit_group: modulus must be positive");
    require(q <= kMaxModulus, "unit_group: modulus exceeds 2^40");
    if (q > 1) factorization_ = factorize(q);

    auto lift = [q](u64 local, u64 pe) -> u64 {
        if (pe == q) return local % q;
        const u64 cofactor = q / pe;
        const u64 t = mul_mod((local + pe - 1) % pe, inv_mod(cofactor % pe, pe), pe);
        return (1 + mul_mod(cofactor, t, q)) % q;
    };

    for (const auto& pp : factorization_) {
        Component comp{pp, {}};
        LocalTables tables;
        const u64 pe = pp.value;
        if (pp.prime == 2) {
            if (pp.exponent == 2) {
                comp.generators.push_back({3, lift(3, 4), 2});
                minus_one_.push_back(1);
            } else if (pp.exponent >= 3) {
                const u64 order5 = pe / 4;
                comp.generators.push_back({pe - 1, lift(pe - 1, pe), 2});
                comp.generators.push_back({5, lift(5, pe), order5});
                minus_one_.push_back(1);
                minus_one_.push_back(0);
                tables.order_factors = {{2, pp.exponent - 2, order5}};
                if (pe <= kDlogTableLimit) {
                    tables.log.assign(pe, kNoLog);
                    u64 x = 1;
                    for (u64 b = 0; b < order5; ++b) {
                        tables.log[x] = static_cast<std::uint32_t>(b);
                        x = x * 5 % pe;
                    }
                }
            }
        } else {
            const u64 g = least_primitive_root(pp.prime, pp.exponent);
            const u64 order = pe / pp.prime * (pp.prime - 1);
            comp.generators.push_back({g, lift(g, pe), order});
            minus_one_.push_back(order / 2);
            tables.order_factors =
                merge_factors(factorize(pp.prime - 1), {pp.prime, pp.exponent - 1, pe / pp.prime});
            if (pe <= kDlogTableLimit) {
                tables.log.assign(pe, kNoLog);
                u64 x = 1;
                for (u64 l = 0; l < order; ++l) {
                    tables.log[x] = static_cast<std::uint32_t>(l);
                    x = mul_mod(x, g, pe);
                }
            }
        }
        offsets_.push_back(flat_.size());
        for (const auto& gen : comp.generators) {
            flat_.push_back(gen);
            phi_ *= gen.order;
            exponent_ = lcm(exponent_, gen.order);
        }
        components_.push_back(std::move(comp));
        tables_.push_back(std::move(tables));
    }
}

std::vector<u64> UnitGroup::orders() const {
    std::vector<u64> out;
    out.reserve(flat_.size());
    for (const auto& g : flat_) out.push_back(g.order);
    return out;
}

void UnitGroup::local_dlog(std::size_t c, u64 residue, std::span<u64> out) const {
    const Component& comp = components_[c];
    const LocalTables& tables = tables_[c];
    const u64 pe = comp.power.value;
    residue %= pe;
    if (comp.generators.empty()) return;
    if (comp.power.prime == 2) {
        if (comp.power.exponent == 2) {
            out[0] = (residue % 4 == 3) ? 1 : 0;
            return;
        }
        const bool negative = residue % 4 == 3;
        const u64 positive = negative ? pe - residue : residue;
        out[0] = negative ? 1 : 0;
        out[1] = tables.log.empty()
                     ? discrete_log(5, positive, comp.generators[1].order, tables.order_factors, pe)
                     : tables.log[positive];
        return;
    }
    out[0] = tables.log.empty()
                 ? discrete_log(comp.generators[0].local, residue, comp.generators[0].order,
                                tables.order_factors, pe)
                 : tables.log[residue];
}

std::vector<u64> UnitGroup::dlog(i64 n) const {
    const u64 r = reduce(n, q_);
    require(gcd(r, q_) == 1, "dlog: argument is not a unit");
    std::vector<u64> logs(flat_.size(), 0);
    for (std::size_t c = 0; c < components_.size(); ++c) {
        const std::size_t width = components_[c].generators.size();
        local_dlog(c, r, std::span<u64>(logs).subspan(offsets_[c], width));
    }
    return logs;
}

u64 UnitGroup::exponentiate(std::span<const u64> logs) const {
    require(logs.size() == flat_.size(), "exponentiate: wrong number of logs");
    u64 x = 1 % q_;
    for (std::size_t i = 0; i < flat_.size(); ++i) x = mul_mod(x, pow_mod(flat_[i].lifted, logs[i], q_), q_);
    return x;
}

UnitGroupPtr unit_group(u64 q) { return std::make_shared<const UnitGroup>(q); }

}  // namespace charsum
