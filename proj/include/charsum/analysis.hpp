#pragma once

#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "charsum/prefix_table.hpp"
#include "charsum/rational.hpp"

namespace charsum {

using kernels::Exec;

// ---- point values ---------------------------------------------------------

// S(x) = sum_{n <= x} chi(n) for real x >= 0.
std::complex<double> char_sum(const PrefixSumTable& table, double x);
std::complex<double> char_sum(const PrefixSumTable& table, const Rational& x);

// Half-jump value (S(x+) + S(x-))/2: differs from S(x) only at integers.
std::complex<double> midpoint_sum(const PrefixSumTable& table, double x);
std::complex<double> midpoint_sum(const PrefixSumTable& table, const Rational& x);

struct MaxPoint {
    i64 x = 0;
    double value = 0.0;
};

// M(chi) = max_{1 <= n <= q} |S(n)|, smallest argmax.
MaxPoint max_char_sum(const PrefixSumTable& table, Exec exec = Exec::parallel);

// max over |N| <= L of |S(x0 + N) - S(x0)|, smallest |N| first and N > 0
// before -N on ties. `x` of the result holds N.
MaxPoint short_interval_max(const PrefixSumTable& table, i64 x0, i64 max_len, Exec exec = Exec::parallel);

// Least n >= 1 with chi(n) = -1 (real characters), 0 if there is none.
u64 least_nonresidue(const PrefixSumTable& table);

// ---- Gauss sums and L(1, chi) ---------------------------------------------

struct GaussSumValue {
    std::complex<double> value;
    u64 modulus = 0;
};

// tau(chi) = sum_{n mod q} chi(n) e(n/q).
GaussSumValue gauss_sum(const PrefixSumTable& table, Exec exec = Exec::parallel);
GaussSumValue gauss_sum(const DirichletCharacter& chi);

// L(1, chi) for primitive non-principal chi from the finite closed forms
//   odd:  (pi i tau / q^2) sum_a conj(chi)(a) a
//   even: -(tau / q) sum_a conj(chi)(a) log(2 sin(pi a / q)).
std::complex<double> l_one(const PrefixSumTable& table, Exec exec = Exec::parallel);
std::complex<double> l_one(const PrefixSumTable& table, std::complex<double> tau, Exec exec = Exec::parallel);

struct LSeriesCheck {
    std::complex<double> partial;  // sum_{n <= terms} chi(n)/n
    double tail_bound;             // 2 M(chi) / (terms + 1), by partial summation
    u64 terms;
};

LSeriesCheck l_one_series(const PrefixSumTable& table, u64 terms, Exec exec = Exec::parallel);

// Constant term of the parity-split Fourier expansion:
//   A(chi) = (1 - chi(-1)) tau(chi) L(1, conj chi) / (2 pi i).
std::complex<double> A_of_chi(const PrefixSumTable& table, Exec exec = Exec::parallel);

// tau, L(1, chi) and A(chi) computed once per character.
struct CharacterConstants {
    std::complex<double> tau;
    std::complex<double> l_one;  // NaN unless chi is primitive and non-principal
    std::complex<double> A;
};

CharacterConstants character_constants(const PrefixSumTable& table, Exec exec = Exec::parallel);

// e(n/q) and log(2 sin(pi a/q)) for one modulus, shared by all of its
// characters in sweeps.
class ModulusTables {
public:
    explicit ModulusTables(u64 q);
    u64 modulus() const { return q_; }
    std::complex<double> twiddle(u64 n) const { return twiddle_[n]; }
    double log_sine(u64 a) const { return log_sine_[a]; }

private:
    u64 q_;
    std::vector<std::complex<double>> twiddle_;
    std::vector<double> log_sine_;
};

// Serial; the same quantities as above from shared tables.
GaussSumValue gauss_sum(const PrefixSumTable& table, const ModulusTables& tables);
CharacterConstants character_constants(const PrefixSumTable& table, const ModulusTables& tables);

// ---- truncated Fourier series ---------------------------------------------

enum class Kernel { cos, sin };

struct FourierTruncation {
    double t = 0.0;
    u64 N = 0;
    std::complex<double> value;
    Kernel parity_kernel = Kernel::cos;
};

// F_N(t) = -sum_{n <= N} conj(chi)(n) cos(2 pi n t)/n   for odd chi,
//           i sum_{n <= N} conj(chi)(n) sin(2 pi n t)/n  for even chi.
FourierTruncation fourier_F_truncated(const PrefixSumTable& table, double t, u64 N);
// Rational t reduces n t mod 1 exactly before taking the angle.
FourierTruncation fourier_F_truncated(const PrefixSumTable& table, const Rational& t, u64 N);
// Precomputed phases[n - 1] = e(n t) for n = 1..N.
FourierTruncation fourier_F_truncated(const PrefixSumTable& table, double t,
                                      std::span<const std::complex<double>> phases);
// e(n t) for n = 1..N with n t reduced exactly.
std::vector<std::complex<double>> fourier_phases(const Rational& t, u64 N);

// Number of terms with n < B: ceil(B) - 1.
u64 terms_below(const Rational& B);

// ---- window averages --------------------------------------------------------

struct WindowAverage {
    std::complex<double> value;
    std::optional<Rational> exact;  // real characters
};

// (B/2) integral_{alpha - 1/B}^{alpha + 1/B} S(tq) dt, integrated cell by cell
// between the breakpoints n/q. Windows crossing 0 or 1 wrap periodically.
WindowAverage exact_window_average(const PrefixSumTable& table, const Rational& alpha, const Rational& B);

// A(chi) + (tau / (i pi)) F_{ceil(B)-1}(alpha).
std::complex<double> theorem1_rhs(const PrefixSumTable& table, const CharacterConstants& constants,
                                  const Rational& alpha, const Rational& B);

struct WindowAverageReport {
    Rational alpha;
    Rational B;
    std::complex<double> lhs_exact;
    std::optional<Rational> lhs_rational;
    std::complex<double> A_of_chi;
    std::complex<double> rhs_truncated;
    std::complex<double> residual;  // lhs - rhs (rhs already contains A)
    double residual_over_sqrt_q = 0.0;
};

WindowAverageReport theorem1_residual(const PrefixSumTable& table, const CharacterConstants& constants,
                                      const Rational& alpha, const Rational& B);
WindowAverageReport theorem1_residual(const PrefixSumTable& table, const Rational& alpha, const Rational& B);
// Phases from fourier_phases(alpha, N) with N >= ceil(B) - 1.
WindowAverageReport theorem1_residual(const PrefixSumTable& table, const CharacterConstants& constants,
                                      const Rational& alpha, const Rational& B,
                                      std::span<const std::complex<double>> phases);

// ---- logarithmic growth of twisted harmonic sums ---------------------------

struct LogGrowthPoint {
    double x = 0.0;
    std::complex<double> lhs;        // sum_{n < x} chi(n) k(2 pi a n / q) / n, k = cos (even) or sin (odd)
    std::complex<double> predicted;  // conj(chi)(a) tau log(x) / q, divided by i for odd chi
};

std::vector<LogGrowthPoint> lemma_log_growth(const PrefixSumTable& table, i64 a, std::span<const double> x_grid);

// ---- near the centre, for odd quadratic characters -------------------------

// #{n <= floor(A B) : n has a prime factor >= B}.
u64 nonsmooth_count(double A, u64 B, Exec exec = Exec::parallel);

// B sum_{n <= A B} (-1)^{n+1} sin(2 pi n / B) / (2 pi n^2), with chi = 1.
double log2_model(u64 B, double A, Exec exec = Exec::parallel);

// Same sum weighted by chi(n).
double half_window_model(const PrefixSumTable& table, u64 B, double A, Exec exec = Exec::parallel);

struct HalfWindowReport {
    u64 B = 0;                   // least quadratic nonresidue
    WindowAverage exact_average; // at alpha = 1/2
    double model = 0.0;          // half_window_model at the requested A
    double l_one = 0.0;
    double central_sum = 0.0;        // S(q/2)
    double identity_residual = 0.0;  // S(q/2) - sqrt(q) L(1,chi) / pi
    double predicted_average = 0.0;  // sqrt(q) (L(1,chi) + model) / pi
};

HalfWindowReport window_average_half(const PrefixSumTable& table, double A, Exec exec = Exec::parallel);

struct CentreScan {
    Rational t;          // maximising point of S(tq) on [1/2 - 1/B, 1/2]
    double value = 0.0;  // S(t q)
    double central = 0.0;
    double gap = 0.0;             // S(t q) - S(q/2)
    double normalized_gap = 0.0;  // gap pi / (sqrt(q) log 2)
};

CentreScan thm4_scan(const PrefixSumTable& table, u64 B, Exec exec = Exec::parallel);

}  // namespace charsum
