#include "charsum/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "charsum/errors.hpp"

namespace charsum {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::complex<double> kI{0.0, 1.0};

i128 floor_div(i128 n, i128 d) {
    i128 q = n / d;
    if ((n % d != 0) && ((n < 0) != (d < 0))) --q;
    return q;
}

// cos and sin of 2 pi num/den, with num reduced mod den first.
std::complex<double> unit_angle(i128 num, i128 den) {
    i128 r = num % den;
    if (r < 0) r += den;
    return root_of_unity(static_cast<u64>(r), static_cast<u64>(den));
}

}  // namespace

std::complex<double> char_sum(const PrefixSumTable& table, double x) {
    require(x >= 0.0 && std::isfinite(x), "char_sum: x must be a finite nonnegative real");
    return table.prefix(static_cast<i64>(std::floor(x)));
}

std::complex<double> char_sum(const PrefixSumTable& table, const Rational& x) {
    return table.prefix(x.floor());
}

std::complex<double> midpoint_sum(const PrefixSumTable& table, double x) {
    const auto s = char_sum(table, x);
    if (x != std::floor(x)) return s;
    return s - 0.5 * table.value(static_cast<i64>(x));
}

std::complex<double> midpoint_sum(const PrefixSumTable& table, const Rational& x) {
    const auto s = char_sum(table, x);
    if (!x.is_integer()) return s;
    return s - 0.5 * table.value(x.num());
}

MaxPoint max_char_sum(const PrefixSumTable& table, Exec exec) {
    const i64 q = static_cast<i64>(table.modulus());
    const auto best = kernels::argmax(1, q + 1, [&](i64 n) { return std::abs(table.prefix(n)); }, exec);
    return {best.index, best.value};
}

MaxPoint short_interval_max(const PrefixSumTable& table, i64 x0, i64 max_len, Exec exec) {
    require(x0 >= 0 && static_cast<u64>(x0) < table.modulus(), "short_interval_max: need 0 <= x0 < q");
    require(max_len >= 1, "short_interval_max: length must be positive");
    const auto base = table.prefix(x0);
    // Slot i enumerates N = 0, 1, -1, 2, -2, ...
    auto offset = [](i64 i) { return (i % 2 == 1) ? (i + 1) / 2 : -(i / 2); };
    const auto best = kernels::argmax(
        0, 2 * max_len + 1, [&](i64 i) { return std::abs(table.prefix(x0 + offset(i)) - base); }, exec);
    return {offset(best.index), best.value};
}

u64 least_nonresidue(const PrefixSumTable& table) {
    require(table.exact(), "least_nonresidue: character must be real");
    for (u64 n = 1; n < table.modulus(); ++n)
        if (table.real_value(static_cast<i64>(n)) == -1) return n;
    return 0;
}

GaussSumValue gauss_sum(const PrefixSumTable& table, Exec exec) {
    const u64 q = table.modulus();
    const u64 order = table.character().order();
    const auto idx = table.indices();
    // chi(n) e(n/q) = e(k/order + n/q) = e((k q + n order) / (order q)).
    const u64 den = order * q;
    auto term = [&](std::size_t n) -> std::complex<double> {
        const std::int32_t k = idx[n % q];
        if (k < 0) return {};
        const u128 num = static_cast<u128>(static_cast<u64>(k)) * q + static_cast<u128>(n % q) * order;
        return root_of_unity(static_cast<u64>(num % den), den);
    };
    return {kernels::sum(1, q + 1, term, exec), q};
}

GaussSumValue gauss_sum(const DirichletCharacter& chi) {
    require(chi.modulus() <= 1'000'000, "gauss_sum: direct summation limited to q <= 10^6");
    return gauss_sum(PrefixSumTable(chi));
}

namespace {

void require_l_one(const DirichletCharacter& chi) {
    require(!chi.is_principal(), "l_one: character must be non-principal");
    require(chi.primitive(), "l_one: character must be primitive");
}

// Finite closed forms; log_sine(a) = log(2 sin(pi a / q)).
template <class LogSine>
std::complex<double> l_one_closed(const PrefixSumTable& table, std::complex<double> tau, Exec exec,
                                  LogSine&& log_sine) {
    const u64 q = table.modulus();
    const double qd = static_cast<double>(q);
    if (table.character().is_odd()) {
        const auto s = kernels::sum(
            1, q, [&](std::size_t a) { return table.conj_value(static_cast<i64>(a)) * static_cast<double>(a); },
            exec);
        return kPi * kI * tau * s / (qd * qd);
    }
    const auto s = kernels::sum(
        1, q, [&](std::size_t a) { return table.conj_value(static_cast<i64>(a)) * log_sine(a); }, exec);
    return -tau * s / qd;
}

template <class LOne>
CharacterConstants constants_from(const PrefixSumTable& table, std::complex<double> tau, LOne&& l_one_of) {
    const DirichletCharacter& chi = table.character();
    CharacterConstants c;
    c.tau = tau;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    c.l_one = {nan, nan};
    if (!chi.is_principal() && chi.primitive()) c.l_one = l_one_of(tau);
    if (chi.is_even()) {
        c.A = {0.0, 0.0};
    } else {
        require(chi.primitive(), "A_of_chi: character must be primitive");
        c.A = c.tau / (kPi * kI) * std::conj(c.l_one);
    }
    return c;
}

}  // namespace

std::complex<double> l_one(const PrefixSumTable& table, std::complex<double> tau, Exec exec) {
    require_l_one(table.character());
    const double qd = static_cast<double>(table.modulus());
    return l_one_closed(table, tau, exec, [&](std::size_t a) {
        const std::size_t folded = std::min<std::size_t>(a, table.modulus() - a);
        return std::log(2.0 * std::sin(kPi * static_cast<double>(folded) / qd));
    });
}

std::complex<double> l_one(const PrefixSumTable& table, Exec exec) {
    return l_one(table, gauss_sum(table, exec).value, exec);
}

LSeriesCheck l_one_series(const PrefixSumTable& table, u64 terms, Exec exec) {
    const auto partial = kernels::sum(
        1, terms + 1, [&](std::size_t n) { return table.value(static_cast<i64>(n)) / static_cast<double>(n); },
        exec);
    const double m = max_char_sum(table, exec).value;
    return {partial, 2.0 * m / static_cast<double>(terms + 1), terms};
}

std::complex<double> A_of_chi(const PrefixSumTable& table, Exec exec) {
    return character_constants(table, exec).A;
}

CharacterConstants character_constants(const PrefixSumTable& table, Exec exec) {
    return constants_from(table, gauss_sum(table, exec).value,
                          [&](std::complex<double> tau) { return l_one(table, tau, exec); });
}

ModulusTables::ModulusTables(u64 q) : q_(q), twiddle_(q), log_sine_(q, 0.0) {
    require(q >= 1 && q <= kernels::kMaxTableModulus, "ModulusTables: modulus out of range");
    const double qd = static_cast<double>(q);
    for (u64 n = 0; n < q; ++n) twiddle_[n] = root_of_unity(n, q);
    for (u64 a = 1; a < q; ++a) {
        const u64 folded = std::min(a, q - a);
        log_sine_[a] = std::log(2.0 * std::sin(kPi * static_cast<double>(folded) / qd));
    }
}

GaussSumValue gauss_sum(const PrefixSumTable& table, const ModulusTables& tables) {
    const u64 q = table.modulus();
    require(tables.modulus() == q, "gauss_sum: tables built for another modulus");
    const auto s = kernels::serial::sum(1, q + 1, [&](std::size_t n) {
        return table.value(static_cast<i64>(n)) * tables.twiddle(n % q);
    });
    return {s, q};
}

CharacterConstants character_constants(const PrefixSumTable& table, const ModulusTables& tables) {
    return constants_from(table, gauss_sum(table, tables).value, [&](std::complex<double> tau) {
        require_l_one(table.character());
        return l_one_closed(table, tau, Exec::serial, [&](std::size_t a) { return tables.log_sine(a); });
    });
}

namespace {

template <class Angle>
FourierTruncation fourier_sum(const PrefixSumTable& table, double t, u64 N, Angle&& angle) {
    const bool odd = table.character().is_odd();
    FourierTruncation out;
    out.t = t;
    out.N = N;
    out.parity_kernel = odd ? Kernel::cos : Kernel::sin;
    const auto s = kernels::sum(
        1, N + 1,
        [&](std::size_t n) -> std::complex<double> {
            const auto c = table.conj_value(static_cast<i64>(n));
            if (c == std::complex<double>{}) return {};
            const auto e = angle(n);
            const double inv = 1.0 / static_cast<double>(n);
            return odd ? -c * (e.real() * inv) : kI * c * (e.imag() * inv);
        },
        Exec::parallel);
    out.value = s;
    return out;
}

}  // namespace

FourierTruncation fourier_F_truncated(const PrefixSumTable& table, double t, u64 N) {
    require(N >= 1, "fourier_F_truncated: N must be at least 1");
    return fourier_sum(table, t, N, [t](std::size_t n) {
        const double x = static_cast<double>(n) * t;
        const double frac = x - std::floor(x);
        const double angle = 2.0 * kPi * frac;
        return std::complex<double>{std::cos(angle), std::sin(angle)};
    });
}

FourierTruncation fourier_F_truncated(const PrefixSumTable& table, const Rational& t, u64 N) {
    require(N >= 1, "fourier_F_truncated: N must be at least 1");
    const i128 a = t.num();
    const i128 b = t.den();
    return fourier_sum(table, t.to_double(), N,
                       [a, b](std::size_t n) { return unit_angle(a * static_cast<i128>(n), b); });
}

FourierTruncation fourier_F_truncated(const PrefixSumTable& table, double t,
                                      std::span<const std::complex<double>> phases) {
    require(!phases.empty(), "fourier_F_truncated: N must be at least 1");
    return fourier_sum(table, t, phases.size(), [phases](std::size_t n) { return phases[n - 1]; });
}

std::vector<std::complex<double>> fourier_phases(const Rational& t, u64 N) {
    std::vector<std::complex<double>> out(N);
    for (u64 n = 1; n <= N; ++n) out[n - 1] = unit_angle(static_cast<i128>(t.num()) * n, t.den());
    return out;
}

u64 terms_below(const Rational& B) {
    const i64 c = B.ceil();
    return c <= 1 ? 0 : static_cast<u64>(c - 1);
}

WindowAverage exact_window_average(const PrefixSumTable& table, const Rational& alpha, const Rational& B) {
    require(B >= Rational(2), "exact_window_average: B must be at least 2");
    const i128 q = static_cast<i128>(table.modulus());
    const i128 a = alpha.num(), b = alpha.den();
    const i128 u = B.num(), v = B.den();  // 1/B = v/u
    const i128 D = b * u;
    const i128 n_hi = q * (a * u + v * b);
    const i128 n_lo = q * (a * u - v * b);
    const i128 i_hi = floor_div(n_hi, D), i_lo = floor_div(n_lo, D);
    const i128 f_hi = n_hi - i_hi * D, f_lo = n_lo - i_lo * D;
    const i64 ih = static_cast<i64>(i_hi), il = static_cast<i64>(i_lo);

    WindowAverage out;
    if (table.exact()) {
        // D * integral_0^X S = D * G(floor X) + frac(X) D * S(floor X)
        const i128 t_hi = D * table.exact_integral(ih) + f_hi * table.exact_prefix(ih);
        const i128 t_lo = D * table.exact_integral(il) + f_lo * table.exact_prefix(il);
        try {
            out.exact = Rational::from_wide(u * (t_hi - t_lo), 2 * q * v * D);
            out.value = {out.exact->to_double(), 0.0};
            return out;
        } catch (const std::overflow_error&) {
            // fall through to the floating-point path
        }
    }
    const double Dd = static_cast<double>(D);
    const std::complex<double> area = (table.integral(ih) - table.integral(il)) +
                                      (static_cast<double>(f_hi) / Dd) * table.prefix(ih) -
                                      (static_cast<double>(f_lo) / Dd) * table.prefix(il);
    out.value = B.to_double() / (2.0 * static_cast<double>(q)) * area;
    return out;
}

std::complex<double> theorem1_rhs(const PrefixSumTable& table, const CharacterConstants& constants,
                                  const Rational& alpha, const Rational& B) {
    require(B >= Rational(2), "theorem1_rhs: B must be at least 2");
    const u64 N = terms_below(B);
    const auto F = fourier_F_truncated(table, alpha, N).value;
    return constants.A + constants.tau / (kI * kPi) * F;
}

namespace {

WindowAverageReport residual_report(const PrefixSumTable& table, const CharacterConstants& constants,
                                    const Rational& alpha, const Rational& B, std::complex<double> rhs) {
    WindowAverageReport r;
    r.alpha = alpha;
    r.B = B;
    const auto lhs = exact_window_average(table, alpha, B);
    r.lhs_exact = lhs.value;
    r.lhs_rational = lhs.exact;
    r.A_of_chi = constants.A;
    r.rhs_truncated = rhs;
    r.residual = r.lhs_exact - r.rhs_truncated;
    r.residual_over_sqrt_q = std::abs(r.residual) / std::sqrt(static_cast<double>(table.modulus()));
    return r;
}

}  // namespace

WindowAverageReport theorem1_residual(const PrefixSumTable& table, const CharacterConstants& constants,
                                      const Rational& alpha, const Rational& B) {
    return residual_report(table, constants, alpha, B, theorem1_rhs(table, constants, alpha, B));
}

WindowAverageReport theorem1_residual(const PrefixSumTable& table, const CharacterConstants& constants,
                                      const Rational& alpha, const Rational& B,
                                      std::span<const std::complex<double>> phases) {
    require(B >= Rational(2), "theorem1_rhs: B must be at least 2");
    const u64 N = terms_below(B);
    require(phases.size() >= N, "theorem1_residual: too few phases for this window");
    const auto F = fourier_F_truncated(table, alpha.to_double(), phases.first(N)).value;
    return residual_report(table, constants, alpha, B, constants.A + constants.tau / (kI * kPi) * F);
}

WindowAverageReport theorem1_residual(const PrefixSumTable& table, const Rational& alpha, const Rational& B) {
    return theorem1_residual(table, character_constants(table), alpha, B);
}

std::vector<LogGrowthPoint> lemma_log_growth(const PrefixSumTable& table, i64 a, std::span<const double> x_grid) {
    const DirichletCharacter& chi = table.character();
    const u64 q = table.modulus();
    require(gcd(reduce(a, q), q) == 1, "lemma_log_growth: a must be coprime to q");
    const bool odd = chi.is_odd();
    const auto tau = gauss_sum(table).value;
    const double qd = static_cast<double>(q);
    const std::complex<double> coefficient =
        odd ? table.conj_value(a) * tau / (kI * qd) : table.conj_value(a) * tau / qd;

    std::vector<std::size_t> order(x_grid.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return x_grid[i] < x_grid[j]; });

    std::vector<LogGrowthPoint> out(x_grid.size());
    CompensatedComplexSum acc;
    u64 n = 1;
    const u64 ar = reduce(a, q);
    for (std::size_t i : order) {
        const double x = x_grid[i];
        // all n < x
        const u64 stop = x <= 1.0 ? 1 : static_cast<u64>(std::ceil(x));
        for (; n < stop; ++n) {
            const auto c = table.value(static_cast<i64>(n));
            if (c == std::complex<double>{}) continue;
            const auto e = root_of_unity(mul_mod(ar, n % q, q), q);
            acc.add(c * ((odd ? e.imag() : e.real()) / static_cast<double>(n)));
        }
        out[i].x = x;
        out[i].lhs = acc.value();
        out[i].predicted = x > 0.0 ? coefficient * std::log(x) : std::complex<double>{};
    }
    return out;
}

u64 nonsmooth_count(double A, u64 B, Exec exec) {
    require(A >= 1.0 && std::isfinite(A), "nonsmooth_count: A must be at least 1");
    require(B >= 2, "nonsmooth_count: B must be at least 2");
    const double x = std::floor(A * static_cast<double>(B));
    require(x <= 1e8, "nonsmooth_count: A B exceeds 10^8");
    return kernels::nonsmooth_count(static_cast<u64>(x), B, exec);
}

namespace {

template <class Weight>
double half_model(u64 B, double A, Exec exec, Weight&& weight) {
    require(B >= 2, "half-window model: B must be at least 2");
    require(A > 0.0 && std::isfinite(A), "half-window model: A must be positive");
    const u64 terms = static_cast<u64>(std::floor(A * static_cast<double>(B)));
    const auto s = kernels::sum(
        1, terms + 1,
        [&](std::size_t n) -> std::complex<double> {
            const int w = weight(n);
            if (w == 0) return {};
            const double sign = (n % 2 == 1) ? 1.0 : -1.0;
            const double s = root_of_unity(n % B, B).imag();
            const double nd = static_cast<double>(n);
            return {sign * w * s / (2.0 * kPi * nd * nd), 0.0};
        },
        exec);
    return static_cast<double>(B) * s.real();
}

}  // namespace

double log2_model(u64 B, double A, Exec exec) {
    return half_model(B, A, exec, [](std::size_t) { return 1; });
}

double half_window_model(const PrefixSumTable& table, u64 B, double A, Exec exec) {
    require(table.exact(), "half_window_model: character must be real");
    return half_model(B, A, exec, [&](std::size_t n) { return table.real_value(static_cast<i64>(n)); });
}

HalfWindowReport window_average_half(const PrefixSumTable& table, double A, Exec exec) {
    const DirichletCharacter& chi = table.character();
    require(chi.is_real() && !chi.is_principal() && chi.is_odd(),
            "window_average_half: character must be odd and quadratic");
    HalfWindowReport r;
    r.B = least_nonresidue(table);
    require(r.B >= 3, "window_average_half: least nonresidue must be at least 3");
    const u64 q = table.modulus();
    const double rootq = std::sqrt(static_cast<double>(q));
    r.exact_average = exact_window_average(table, Rational(1, 2), Rational(static_cast<i64>(r.B)));
    r.model = half_window_model(table, r.B, A, exec);
    r.l_one = l_one(table, exec).real();
    r.central_sum = char_sum(table, Rational(static_cast<i64>(q), 2)).real();
    r.identity_residual = r.central_sum - rootq / kPi * r.l_one;
    r.predicted_average = rootq / kPi * (r.l_one + r.model);
    return r;
}

CentreScan thm4_scan(const PrefixSumTable& table, u64 B, Exec exec) {
    const DirichletCharacter& chi = table.character();
    require(chi.is_real() && !chi.is_principal() && chi.is_odd(), "thm4_scan: character must be odd and quadratic");
    require(B >= 3, "thm4_scan: B must be at least 3");
    const i64 q = static_cast<i64>(table.modulus());
    const Rational left = Rational(1, 2) - Rational(1, static_cast<i64>(B));
    const Rational left_x = left * Rational(q);
    const i64 first = left_x.ceil();
    const i64 last = Rational(q, 2).floor();
    // Slot 0 is the left endpoint itself; slot j >= 1 is the jump point first + j - 1.
    auto value_at = [&](i64 slot) {
        return slot == 0 ? table.prefix(left_x.floor()).real() : table.prefix(first + slot - 1).real();
    };
    const auto best = kernels::argmax(0, last - first + 2, value_at, exec);

    CentreScan out;
    out.t = best.index == 0 ? left : Rational(first + best.index - 1, q);
    out.value = best.value;
    out.central = table.prefix(last).real();
    out.gap = out.value - out.central;
    out.normalized_gap = out.gap * kPi / (std::sqrt(static_cast<double>(q)) * std::numbers::ln2);
    return out;
}

}  // namespace charsum
