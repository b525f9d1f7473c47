#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "charsum/character.hpp"
#include "charsum/kernels.hpp"

namespace charsum {

// S(n) = sum_{m <= n} chi(m) tabulated over one period, together with its
// running integral C(n) = sum_{m < n} S(m) = integral_0^n S(x) dx. Real
// characters are stored as exact integers, complex ones as compensated
// doubles. Immutable once built.
//
// Outside [0, q] both are extended through S(n + q) = S(n) + S(q), which is
// plain periodicity for non-principal characters.
class PrefixSumTable {
public:
    explicit PrefixSumTable(DirichletCharacter chi, kernels::Exec exec = kernels::Exec::parallel);

    const DirichletCharacter& character() const { return chi_; }
    u64 modulus() const { return q_; }
    bool exact() const { return exact_; }

    // Value index k with chi(n) = e(k/order), or -1 off the units.
    std::span<const std::int32_t> indices() const { return idx_; }
    std::int32_t index(i64 n) const { return idx_[reduce(n, q_)]; }
    const std::vector<std::complex<double>>& roots() const { return roots_; }

    std::complex<double> value(i64 n) const {
        const auto k = index(n);
        return k < 0 ? std::complex<double>{} : roots_[static_cast<std::size_t>(k)];
    }
    std::complex<double> conj_value(i64 n) const { return std::conj(value(n)); }
    // Real characters only: chi(n) in {-1, 0, 1}.
    int real_value(i64 n) const;

    // S(n) for any integer n.
    std::complex<double> prefix(i64 n) const;
    // Real characters only.
    i64 exact_prefix(i64 n) const;

    // integral_0^n S(x) dx for any integer n (signed for n < 0).
    std::complex<double> integral(i64 n) const;
    i128 exact_integral(i64 n) const;

    // S(q): zero unless chi is principal.
    std::complex<double> period_sum() const { return prefix(static_cast<i64>(q_)); }

private:
    DirichletCharacter chi_;
    u64 q_;
    bool exact_;
    std::vector<std::int32_t> idx_;
    std::vector<std::complex<double>> roots_;
    std::vector<std::complex<double>> prefix_;  // complex characters
    std::vector<std::complex<double>> cumul_;
    std::vector<i64> eprefix_;                  // real characters
    std::vector<i64> ecumul_;
};

}  // namespace charsum
