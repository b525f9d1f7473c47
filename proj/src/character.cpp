#include "charsum/character.hpp"

#include <charconv>
#include <cmath>
#include <numbers>

#include "charsum/errors.hpp"

namespace charsum {

std::complex<double> root_of_unity(u64 k, u64 m) {
    k %= m;
    if (k == 0) return {1.0, 0.0};
    if (4 * k == m) return {0.0, 1.0};
    if (2 * k == m) return {-1.0, 0.0};
    if (4 * k == 3 * m) return {0.0, -1.0};
    // Reduce to (-1/2, 1/2] before scaling so the angle stays small.
    const double frac = (2 * k > m) ? -static_cast<double>(m - k) / static_cast<double>(m)
                                    : static_cast<double>(k) / static_cast<double>(m);
    const double angle = 2.0 * std::numbers::pi * frac;
    return {std::cos(angle), std::sin(angle)};
}

CharacterValue CharacterValue::zero_value() {
    CharacterValue v;
    v.zero = true;
    v.k = 0;
    v.m = 1;
    v.approx = {0.0, 0.0};
    return v;
}

CharacterValue CharacterValue::root(u64 k, u64 m) {
    CharacterValue v;
    k %= m;
    const u64 g = gcd(k, m);
    v.k = k / g;
    v.m = m / g;
    if (v.k == 0) v.m = 1;
    v.approx = root_of_unity(v.k, v.m);
    return v;
}

CharacterValue CharacterValue::conj() const {
    if (zero) return *this;
    return root((m - k) % m, m);
}

std::string CharacterValue::str() const {
    if (zero) return "0";
    if (k == 0) return "1";
    if (m == 2) return "-1";
    return "e(" + std::to_string(k) + "/" + std::to_string(m) + ")";
}

CharacterValue operator*(const CharacterValue& a, const CharacterValue& b) {
    if (a.zero || b.zero) return CharacterValue::zero_value();
    const u64 m = lcm(a.m, b.m);
    const u64 k = (mul_mod(a.k, m / a.m, m) + mul_mod(b.k, m / b.m, m)) % m;
    return CharacterValue::root(k, m);
}

DirichletCharacter::DirichletCharacter(UnitGroupPtr group, std::vector<u64> exponents)
    : group_(std::move(group)), exponents_(std::move(exponents)) {
    require(group_ != nullptr, "DirichletCharacter: null group");
    require(exponents_.size() == group_->rank(), "DirichletCharacter: exponent vector has wrong length");
    for (std::size_t i = 0; i < exponents_.size(); ++i) {
        require(exponents_[i] < group_->generator(i).order, "DirichletCharacter: exponent out of range");
        const u64 d = group_->generator(i).order;
        order_ = lcm(order_, d / gcd(d, exponents_[i]));
    }
    steps_.resize(exponents_.size());
    for (std::size_t i = 0; i < exponents_.size(); ++i) {
        const u64 d = group_->generator(i).order;
        // e_i * order / d_i is integral because the local order divides order_.
        steps_[i] = static_cast<u64>((static_cast<u128>(exponents_[i]) * order_ / d) % order_);
    }

    // Parity from the structural logs of -1.
    u64 minus_one = 0;
    const auto& m1 = group_->minus_one_logs();
    for (std::size_t i = 0; i < steps_.size(); ++i) minus_one = (minus_one + mul_mod(steps_[i], m1[i], order_)) % order_;
    parity_ = (minus_one == 0) ? Parity::even : Parity::odd;

    // Conductor, one prime-power component at a time.
    conductor_ = 1;
    for (std::size_t c = 0; c < group_->components().size(); ++c) {
        const Component& comp = group_->components()[c];
        const std::size_t first = group_->first_generator(c);
        const u64 p = comp.power.prime;
        if (comp.generators.empty()) continue;
        if (p == 2) {
            if (comp.power.exponent == 2) {
                if (exponents_[first] != 0) conductor_ *= 4;
                continue;
            }
            const u64 order5 = comp.generators[1].order;
            const u64 o5 = order5 / gcd(order5, exponents_[first + 1]);
            if (o5 == 1) {
                if (exponents_[first] != 0) conductor_ *= 4;
            } else {
                conductor_ *= o5 * 4;
            }
            continue;
        }
        const u64 d = comp.generators[0].order;
        u64 o = d / gcd(d, exponents_[first]);
        if (o == 1) continue;
        u64 local = p;
        while (o % p == 0) {
            o /= p;
            local *= p;
        }
        conductor_ *= local;
    }
}

DirichletCharacter DirichletCharacter::principal(u64 q) {
    auto g = unit_group(q);
    return DirichletCharacter(g, std::vector<u64>(g->rank(), 0));
}

std::optional<u64> DirichletCharacter::value_index(i64 n) const {
    const u64 q = modulus();
    const u64 r = reduce(n, q);
    if (gcd(r, q) != 1) return std::nullopt;
    if (order_ == 1) return 0;
    const auto logs = group_->dlog(static_cast<i64>(r));
    u64 k = 0;
    for (std::size_t i = 0; i < logs.size(); ++i) k = (k + mul_mod(steps_[i], logs[i] % order_, order_)) % order_;
    return k;
}

CharacterValue DirichletCharacter::operator()(i64 n) const {
    const auto k = value_index(n);
    if (!k) return CharacterValue::zero_value();
    return CharacterValue::root(*k, order_);
}

std::string DirichletCharacter::label() const {
    std::string s = std::to_string(modulus()) + ":";
    for (std::size_t i = 0; i < exponents_.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(exponents_[i]);
    }
    return s;
}

CharacterValue eval(const DirichletCharacter& chi, i64 n) { return chi(n); }

DirichletCharacter quadratic_character(u64 q) {
    require(q > 2 && q % 2 == 1 && is_prime(q), "quadratic_character: modulus must be an odd prime");
    auto g = unit_group(q);
    return DirichletCharacter(g, {(q - 1) / 2});
}

DirichletCharacter product_character(const DirichletCharacter& chi1, const DirichletCharacter& psi) {
    const u64 q1 = chi1.modulus();
    const u64 b = psi.modulus();
    require(gcd(q1, b) == 1, "product_character: moduli must be coprime");
    require(u128(q1) * b <= kMaxModulus, "product_character: modulus exceeds 2^40");
    auto g = unit_group(q1 * b);
    std::vector<u64> exps;
    exps.reserve(g->rank());
    // Local generators depend only on p^e, so each component copies the
    // exponents of whichever factor owns that prime.
    for (const Component& comp : g->components()) {
        const DirichletCharacter& owner = (q1 % comp.power.prime == 0) ? chi1 : psi;
        const UnitGroup& og = owner.group();
        for (std::size_t c = 0; c < og.components().size(); ++c) {
            if (og.components()[c].power.prime != comp.power.prime) continue;
            const std::size_t first = og.first_generator(c);
            for (std::size_t j = 0; j < comp.generators.size(); ++j) exps.push_back(owner.exponents()[first + j]);
        }
    }
    return DirichletCharacter(g, std::move(exps));
}

DirichletCharacter conjugate(const DirichletCharacter& chi) {
    std::vector<u64> exps(chi.exponents().size());
    for (std::size_t i = 0; i < exps.size(); ++i) {
        const u64 d = chi.group().generator(i).order;
        exps[i] = (d - chi.exponents()[i]) % d;
    }
    return DirichletCharacter(chi.group_ptr(), std::move(exps));
}

u64 conductor(const DirichletCharacter& chi) { return chi.conductor(); }

DirichletCharacter character_from_index(const UnitGroupPtr& group, u64 index) {
    require(index < group->phi(), "character_from_index: index out of range");
    std::vector<u64> exps(group->rank());
    for (std::size_t i = 0; i < exps.size(); ++i) {
        const u64 d = group->generator(i).order;
        exps[i] = index % d;
        index /= d;
    }
    return DirichletCharacter(group, std::move(exps));
}

u64 character_index(const DirichletCharacter& chi) {
    u64 index = 0;
    for (std::size_t i = chi.exponents().size(); i-- > 0;)
        index = index * chi.group().generator(i).order + chi.exponents()[i];
    return index;
}

std::vector<DirichletCharacter> enumerate_characters(const UnitGroupPtr& group) {
    std::vector<DirichletCharacter> out;
    out.reserve(group->phi());
    for (u64 i = 0; i < group->phi(); ++i) out.push_back(character_from_index(group, i));
    return out;
}

std::vector<DirichletCharacter> enumerate_characters(u64 q) { return enumerate_characters(unit_group(q)); }

std::vector<DirichletCharacter> primitive_characters(u64 q) {
    std::vector<DirichletCharacter> out;
    auto group = unit_group(q);
    for (u64 i = 0; i < group->phi(); ++i) {
        auto chi = character_from_index(group, i);
        if (chi.primitive()) out.push_back(std::move(chi));
    }
    return out;
}

DirichletCharacter character_from_exponents(const UnitGroupPtr& group, std::string_view text) {
    std::vector<u64> exps;
    if (text.empty()) return DirichletCharacter(group, std::move(exps));
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto comma = text.find(',', pos);
        const auto piece = text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
        u64 v = 0;
        auto [ptr, ec] = std::from_chars(piece.data(), piece.data() + piece.size(), v);
        if (ec != std::errc() || ptr != piece.data() + piece.size() || piece.empty())
            throw InvalidArgument("cannot parse exponent vector '" + std::string(text) + "'");
        exps.push_back(v);
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return DirichletCharacter(group, std::move(exps));
}

}  // namespace charsum
