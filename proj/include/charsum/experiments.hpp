#pragma once
// Drivers that sweep parameter grids and assemble ExperimentReports.
// Rows are computed independently and merged in key order, so a report does
// not depend on the thread count.

#include <optional>
#include <string>
#include <vector>

#include "charsum/analysis.hpp"
#include "charsum/report.hpp"

namespace charsum {

struct RunContext {
    u64 seed = 0;
    Exec exec = Exec::parallel;
};

ExperimentReport make_report(const std::string& id, const RunContext& ctx);

// {k/40 : 0 <= k < 40}
std::vector<Rational> default_alpha_grid();
// Powers of two up to floor(sqrt q); always contains 2.
std::vector<Rational> power_of_two_windows(u64 q);
// max(2, floor(log(q1) / 2), depth): the widest B for which the constructed
// character agrees with the mimicked one on every n < B.
u64 default_window(u64 q1, u64 depth = 0);

// ---- window-average residuals ---------------------------------------------

struct Thm1Options {
    std::vector<u64> moduli;
    std::vector<Rational> alphas;      // default grid when empty
    std::vector<Rational> windows;     // powers of two per modulus when empty
    std::size_t random_alphas = 0;     // extra alphas k/1000 drawn from the seed
};

ExperimentReport run_thm1(const Thm1Options& opt, const RunContext& ctx = {});

struct ModulusMax {
    u64 q = 0;
    std::size_t characters = 0;
    double ratio = 0.0;  // max |residual| / sqrt q over characters, alphas, windows
    std::string character;
    Rational alpha;
    Rational B;
};

// Per-modulus maxima of |residual| / sqrt q over all primitive characters,
// the default alpha grid and power-of-two windows, for lo <= q <= hi.
std::vector<ModulusMax> thm1_sweep(u64 lo, u64 hi, Exec exec = Exec::parallel);

// ---- twisted harmonic sums --------------------------------------------------

struct Lemma3Options {
    DirichletCharacter chi = DirichletCharacter::principal(1);
    i64 a = 1;
    std::vector<double> xs;  // log grid on [10^2, 10^6] when empty
};

std::vector<double> log_grid(double lo, double hi, std::size_t per_decade);
ExperimentReport run_lemma3(const Lemma3Options& opt, const RunContext& ctx = {});

// ---- pretentious constructions ------------------------------------------

struct Thm2Options {
    DirichletCharacter psi = DirichletCharacter::principal(1);
    u64 y = 7;
    std::optional<u64> window;  // B, default_window(q1, depth) when unset
};

ExperimentReport run_thm2(const Thm2Options& opt, const RunContext& ctx = {});

struct Thm3Options {
    u64 b = 3;
    std::vector<u64> ys{5, 7, 11, 13};
    std::optional<u64> window;
};

// The first primitive odd real character mod b in enumeration order.
DirichletCharacter odd_quadratic_character(u64 b);

struct SignedScan {
    i64 n = 0;           // alpha* = n / q
    double value = 0.0;  // S(n)
};

// Maximises sign * S(n) over n/q in [alpha - 1/B, alpha + 1/B].
SignedScan signed_window_scan(const PrefixSumTable& table, const Rational& alpha, u64 B, int sign,
                              Exec exec = Exec::parallel);

ExperimentReport run_thm3(const Thm3Options& opt, const RunContext& ctx = {});

struct CorollaryOptions {
    std::optional<DirichletCharacter> chi;  // the even quadratic mod 3 q1 built at depth 7 when unset
    std::vector<double> A_values{1.0};
};

ExperimentReport run_corollary(const CorollaryOptions& opt, const RunContext& ctx = {});

// ---- near the centre ----------------------------------------------------

struct Thm4Options {
    std::vector<u64> ys{5, 7, 11, 13};
    u64 max_modulus = 10'000'000;
    std::vector<double> model_A{4.0, 16.0, 64.0};
};

ExperimentReport run_thm4(const Thm4Options& opt, const RunContext& ctx = {});

struct SmoothnessOptions {
    std::vector<double> A_values;  // 2..20 when empty
    std::vector<u64> B_values;     // 10..100 when empty
};

ExperimentReport run_smoothness(const SmoothnessOptions& opt, const RunContext& ctx = {});

}  // namespace charsum
