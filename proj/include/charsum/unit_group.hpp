#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "charsum/arith.hpp"

namespace charsum {

// Largest modulus accepted for a unit group.
inline constexpr u64 kMaxModulus = u64{1} << 40;

// Prime-power components at or below this size keep a full discrete-log
// table; larger ones fall back to Pohlig-Hellman with baby-step giant-step.
inline constexpr u64 kDlogTableLimit = u64{1} << 20;

struct Generator {
    u64 local;   // generator of (Z/p^e)^*
    u64 lifted;  // same element lifted to Z/q: = local mod p^e, = 1 mod q/p^e
    u64 order;
};

// One factor (Z/p^e)^* of the unit group. Odd p and p^e = 4 have a single
// cyclic generator; p^e >= 8 carries the pair (-1, 5); p^e = 2 has none.
struct Component {
    PrimePower power;
    std::vector<Generator> generators;
};

// The structure of (Z/qZ)^* as a product of cyclic groups over a fixed,
// deterministic generator set: the least primitive root for each odd prime
// power, 3 for the modulus 4, and (-1, 5) for powers of two from 8 upward.
// Immutable once built.
class UnitGroup {
public:
    explicit UnitGroup(u64 q);

    u64 modulus() const { return q_; }
    u64 phi() const { return phi_; }
    // lcm of the generator orders.
    u64 exponent() const { return exponent_; }

    const std::vector<PrimePower>& factorization() const { return factorization_; }
    const std::vector<Component>& components() const { return components_; }

    // Flattened generator list; exponent vectors of characters index into it.
    std::size_t rank() const { return flat_.size(); }
    const Generator& generator(std::size_t i) const { return flat_[i]; }
    std::vector<u64> orders() const;
    // Index into the flat generator list of the first generator of component c.
    std::size_t first_generator(std::size_t component) const { return offsets_[component]; }

    bool is_unit(i64 n) const { return gcd(reduce(n, q_), q_) == 1; }

    // Discrete logs of a unit with respect to the generator list.
    // Throws InvalidArgument when gcd(n, q) > 1.
    std::vector<u64> dlog(i64 n) const;

    // Discrete logs of a unit's image in a single component.
    void local_dlog(std::size_t component, u64 residue, std::span<u64> out) const;

    // prod g_i^{logs_i} mod q.
    u64 exponentiate(std::span<const u64> logs) const;

    // Logs of -1, known structurally without a table lookup.
    const std::vector<u64>& minus_one_logs() const { return minus_one_; }

private:
    struct LocalTables {
        std::vector<std::uint32_t> log;  // empty when the component is large
        std::vector<PrimePower> order_factors;
    };

    u64 q_;
    u64 phi_ = 1;
    u64 exponent_ = 1;
    std::vector<PrimePower> factorization_;
    std::vector<Component> components_;
    std::vector<Generator> flat_;
    std::vector<std::size_t> offsets_;
    std::vector<LocalTables> tables_;
    std::vector<u64> minus_one_;
};

using UnitGroupPtr = std::shared_ptr<const UnitGroup>;

UnitGroupPtr unit_group(u64 q);

// Least primitive root modulo p^e for an odd prime p.
u64 least_primitive_root(u64 p, int e);

// x with g^x = h (mod m), g of the given order; nullopt-free: throws if absent.
u64 discrete_log(u64 g, u64 h, u64 order, std::span<const PrimePower> order_factors, u64 m);

}  // namespace charsum
