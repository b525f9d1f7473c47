#include "charsum/prefix_table.hpp"

#include "charsum/errors.hpp"

namespace charsum {

namespace {

struct Split {
    i64 k;  // floor(n / q)
    i64 r;  // n - k q, in [0, q)
};

Split split(i64 n, u64 q) {
    const i64 qq = static_cast<i64>(q);
    i64 k = n / qq;
    i64 r = n - k * qq;
    if (r < 0) {
        r += qq;
        --k;
    }
    return {k, r};
}

}  // namespace

PrefixSumTable::PrefixSumTable(DirichletCharacter chi, kernels::Exec exec)
    : chi_(std::move(chi)), q_(chi_.modulus()), exact_(chi_.is_real()) {
    idx_ = kernels::value_indices(chi_, exec);
    const u64 order = chi_.order();
    roots_.resize(order);
    for (u64 k = 0; k < order; ++k) roots_[k] = root_of_unity(k, order);

    if (exact_) {
        eprefix_.assign(q_ + 1, 0);
        ecumul_.assign(q_ + 1, 0);
        for (u64 n = 1; n <= q_; ++n) {
            const std::int32_t k = idx_[n % q_];
            const i64 v = k < 0 ? 0 : (k == 0 ? 1 : -1);
            eprefix_[n] = eprefix_[n - 1] + v;
            ecumul_[n] = ecumul_[n - 1] + eprefix_[n - 1];
        }
        return;
    }

    prefix_.assign(q_ + 1, {});
    cumul_.assign(q_ + 1, {});
    CompensatedComplexSum running;
    CompensatedComplexSum area;
    for (u64 n = 1; n <= q_; ++n) {
        area.add(prefix_[n - 1]);
        cumul_[n] = area.value();
        const std::int32_t k = idx_[n % q_];
        if (k >= 0) running.add(roots_[static_cast<std::size_t>(k)]);
        prefix_[n] = running.value();
    }
}

int PrefixSumTable::real_value(i64 n) const {
    require(exact_, "real_value: character is not real");
    const auto k = index(n);
    return k < 0 ? 0 : (k == 0 ? 1 : -1);
}

i64 PrefixSumTable::exact_prefix(i64 n) const {
    require(exact_, "exact_prefix: character is not real");
    const auto [k, r] = split(n, q_);
    return k * eprefix_[q_] + eprefix_[static_cast<std::size_t>(r)];
}

std::complex<double> PrefixSumTable::prefix(i64 n) const {
    if (exact_) return {static_cast<double>(exact_prefix(n)), 0.0};
    const auto [k, r] = split(n, q_);
    if (k == 0) return prefix_[static_cast<std::size_t>(r)];
    const std::complex<double> period = chi_.is_principal() ? prefix_[q_] : std::complex<double>{};
    return static_cast<double>(k) * period + prefix_[static_cast<std::size_t>(r)];
}

i128 PrefixSumTable::exact_integral(i64 n) const {
    require(exact_, "exact_integral: character is not real");
    const auto [k, r] = split(n, q_);
    const i128 period = eprefix_[q_];
    const i128 kk = k;
    return kk * ecumul_[q_] + static_cast<i128>(q_) * period * (kk * (kk - 1) / 2) + static_cast<i128>(r) * kk * period +
           ecumul_[static_cast<std::size_t>(r)];
}

std::complex<double> PrefixSumTable::integral(i64 n) const {
    if (exact_) return {static_cast<double>(exact_integral(n)), 0.0};
    const auto [k, r] = split(n, q_);
    const double kk = static_cast<double>(k);
    // Rounding leaves S(q) ~ 1e-16 for non-principal characters; treat it as exactly periodic.
    const std::complex<double> period = chi_.is_principal() ? prefix_[q_] : std::complex<double>{};
    return kk * cumul_[q_] + static_cast<double>(q_) * (kk * (kk - 1) / 2) * period +
           static_cast<double>(r) * kk * period + cumul_[static_cast<std::size_t>(r)];
}

}  // namespace charsum
