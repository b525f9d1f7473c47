#include "charsum/experiments.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "charsum/constructions.hpp"
#include "charsum/errors.hpp"

namespace charsum {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::complex<double> kI{0.0, 1.0};
const double kEulerGammaExp = std::exp(std::numbers::egamma);

template <class T>
std::string join(const std::vector<T>& xs) {
    std::ostringstream out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out << ',';
        if constexpr (std::is_same_v<T, double>)
            out << format_real(xs[i]);
        else
            out << xs[i];
    }
    return out.str();
}

Cell text(std::string s) { return Cell{std::move(s)}; }
Cell integer(u64 v) { return Cell{static_cast<i64>(v)}; }
Cell integer(i64 v) { return Cell{v}; }
Cell real(double v) { return Cell{v}; }
Cell cplx(std::complex<double> v) { return Cell{v}; }

const char* parity_name(const DirichletCharacter& chi) { return chi.is_odd() ? "odd" : "even"; }

double log_log(u64 q) { return std::log(std::log(static_cast<double>(q))); }

std::vector<Column> columns(std::initializer_list<std::pair<const char*, CellType>> spec) {
    std::vector<Column> out;
    for (const auto& [name, type] : spec) out.push_back({name, type});
    return out;
}

std::vector<DirichletCharacter> nonprincipal_primitive(u64 q) {
    std::vector<DirichletCharacter> out;
    for (auto& chi : primitive_characters(q))
        if (!chi.is_principal()) out.push_back(std::move(chi));
    return out;
}

}  // namespace

ExperimentReport make_report(const std::string& id, const RunContext& ctx) {
    ExperimentReport r;
    r.experiment_id = id;
    r.artifact_version = CHARSUM_VERSION;
    r.timestamp = report_timestamp();
    r.seed = ctx.seed;
    return r;
}

std::vector<Rational> default_alpha_grid() {
    std::vector<Rational> out;
    for (i64 k = 0; k < 40; ++k) out.emplace_back(k, 40);
    return out;
}

std::vector<Rational> power_of_two_windows(u64 q) {
    std::vector<Rational> out{Rational(2)};
    for (u64 B = 4; B * B <= q; B *= 2) out.emplace_back(static_cast<i64>(B));
    return out;
}

u64 default_window(u64 q1, u64 depth) {
    const double half_log = 0.5 * std::log(static_cast<double>(q1));
    return std::max<u64>({2, static_cast<u64>(std::floor(half_log)), depth});
}

// ---- window-average residuals ---------------------------------------------

ExperimentReport run_thm1(const Thm1Options& opt, const RunContext& ctx) {
    require(!opt.moduli.empty(), "thm1: empty modulus list");
    std::vector<Rational> alphas = opt.alphas.empty() ? default_alpha_grid() : opt.alphas;
    require(!alphas.empty(), "thm1: empty alpha grid");
    if (opt.random_alphas > 0) {
        std::mt19937_64 rng(ctx.seed);
        for (std::size_t i = 0; i < opt.random_alphas; ++i)
            alphas.emplace_back(static_cast<i64>(rng() % 1000), 1000);
    }
    for (const auto& B : opt.windows) require(B >= Rational(2), "thm1: windows need B >= 2");

    ExperimentReport report = make_report("thm1", ctx);
    report.inputs = {{"moduli", text(join(opt.moduli))},
                     {"alphas", text(opt.alphas.empty() ? std::string("k/40") : join(opt.alphas))},
                     {"windows", text(opt.windows.empty() ? std::string("powers of 2") : join(opt.windows))},
                     {"random_alphas", integer(static_cast<u64>(opt.random_alphas))}};
    report.columns = columns({{"q", CellType::integer},
                              {"character", CellType::text},
                              {"parity", CellType::text},
                              {"alpha", CellType::rational},
                              {"B", CellType::rational},
                              {"lhs", CellType::complex},
                              {"lhs_exact", CellType::text},
                              {"A", CellType::complex},
                              {"rhs", CellType::complex},
                              {"residual", CellType::complex},
                              {"residual_over_sqrt_q", CellType::real}});

    std::vector<DirichletCharacter> jobs;
    for (u64 q : opt.moduli) {
        require(q >= 1, "thm1: modulus must be positive");
        for (auto& chi : nonprincipal_primitive(q)) jobs.push_back(std::move(chi));
    }
    std::vector<std::vector<std::vector<Cell>>> rows(jobs.size());
#pragma omp parallel for schedule(dynamic, 1) if (ctx.exec == Exec::parallel)
    for (std::size_t j = 0; j < jobs.size(); ++j) {
        const DirichletCharacter& chi = jobs[j];
        const PrefixSumTable table(chi, Exec::parallel);
        const auto constants = character_constants(table, ModulusTables(chi.modulus()));
        const auto windows = opt.windows.empty() ? power_of_two_windows(chi.modulus()) : opt.windows;
        for (const auto& alpha : alphas)
            for (const auto& B : windows) {
                const auto r = theorem1_residual(table, constants, alpha, B);
                rows[j].push_back({integer(chi.modulus()), text(chi.label()), text(parity_name(chi)), Cell{alpha},
                                   Cell{B}, cplx(r.lhs_exact), text(r.lhs_rational ? r.lhs_rational->str() : ""),
                                   cplx(r.A_of_chi), cplx(r.rhs_truncated), cplx(r.residual),
                                   real(r.residual_over_sqrt_q)});
            }
    }
    for (auto& block : rows)
        for (auto& row : block) report.add_row(std::move(row));
    require(!report.rows.empty(), "thm1: no primitive non-principal characters for the given moduli");
    report.add_summary("rows", "count", "");
    report.add_summary("C_obs", "max", "residual_over_sqrt_q");
    return report;
}

std::vector<ModulusMax> thm1_sweep(u64 lo, u64 hi, Exec exec) {
    require(lo >= 1 && lo <= hi, "thm1_sweep: need 1 <= lo <= hi");
    const auto alphas = default_alpha_grid();
    const u64 max_terms = terms_below(power_of_two_windows(hi).back());
    std::vector<std::vector<std::complex<double>>> phases;
    for (const auto& alpha : alphas) phases.push_back(fourier_phases(alpha, max_terms));
    std::vector<ModulusMax> out(hi - lo + 1);
#pragma omp parallel for schedule(dynamic, 1) if (exec == Exec::parallel)
    for (i64 k = static_cast<i64>(hi - lo); k >= 0; --k) {
        const u64 q = lo + static_cast<u64>(k);
        ModulusMax best;
        best.q = q;
        const auto windows = power_of_two_windows(q);
        const ModulusTables tables(q);
        for (const auto& chi : nonprincipal_primitive(q)) {
            ++best.characters;
            // Inside the outer loop the table's own parallel loop runs on one thread.
            const PrefixSumTable table(chi, Exec::parallel);
            const auto constants = character_constants(table, tables);
            for (std::size_t i = 0; i < alphas.size(); ++i)
                for (const auto& B : windows) {
                    const auto& alpha = alphas[i];
                    const double r = theorem1_residual(table, constants, alpha, B, phases[i]).residual_over_sqrt_q;
                    if (best.character.empty() || r > best.ratio) {
                        best.ratio = r;
                        best.character = chi.label();
                        best.alpha = alpha;
                        best.B = B;
                    }
                }
        }
        out[static_cast<std::size_t>(k)] = std::move(best);
    }
    return out;
}

// ---- twisted harmonic sums --------------------------------------------------

std::vector<double> log_grid(double lo, double hi, std::size_t per_decade) {
    require(lo > 0.0 && lo <= hi && per_decade >= 1, "log_grid: need 0 < lo <= hi");
    std::vector<double> out;
    const double step = 1.0 / static_cast<double>(per_decade);
    const double span = std::log10(hi / lo);
    const auto n = static_cast<std::size_t>(std::floor(span / step + 1e-9));
    for (std::size_t i = 0; i <= n; ++i) out.push_back(lo * std::pow(10.0, static_cast<double>(i) * step));
    if (out.back() < hi * (1 - 1e-12)) out.push_back(hi);
    return out;
}

ExperimentReport run_lemma3(const Lemma3Options& opt, const RunContext& ctx) {
    const DirichletCharacter& chi = opt.chi;
    require(chi.primitive() && !chi.is_principal(), "lemma3: character must be primitive and non-principal");
    const auto xs = opt.xs.empty() ? log_grid(1e2, 1e6, 50) : opt.xs;
    const PrefixSumTable table(chi, ctx.exec);
    const auto points = lemma_log_growth(table, opt.a, xs);

    ExperimentReport report = make_report("lemma3", ctx);
    report.inputs = {{"q", integer(chi.modulus())},
                     {"character", text(chi.label())},
                     {"parity", text(parity_name(chi))},
                     {"a", integer(opt.a)}};
    report.columns = columns({{"x", CellType::real},
                              {"lhs", CellType::complex},
                              {"predicted", CellType::complex},
                              {"deviation", CellType::real}});
    for (const auto& p : points)
        report.add_row({real(p.x), cplx(p.lhs), cplx(p.predicted), real(std::abs(p.lhs - p.predicted))});
    report.add_summary("rows", "count", "");
    report.add_summary("max_deviation", "max", "deviation");
    return report;
}

// ---- pretentious constructions ------------------------------------------

namespace {

struct Thm2Row {
    std::string kind;
    u64 q, q1;
    i64 a;
    Rational alpha;
    u64 B;
};

std::complex<double> euler_product(const DirichletCharacter& psi, double limit) {
    std::complex<double> prod{1.0, 0.0};
    for (u64 p : primes_below(static_cast<std::uint32_t>(std::ceil(limit))))
        prod /= (1.0 - psi(static_cast<i64>(p)).approx / static_cast<double>(p));
    return prod;
}

}  // namespace

ExperimentReport run_thm2(const Thm2Options& opt, const RunContext& ctx) {
    const DirichletCharacter& psi = opt.psi;
    require(psi.primitive(), "thm2: psi must be primitive");
    if (opt.window) require(*opt.window >= 2, "thm2: B must be at least 2");
    const u64 b = psi.modulus();

    ExperimentReport report = make_report("thm2", ctx);
    report.columns = columns({{"case", CellType::text},
                              {"q", CellType::integer},
                              {"q1", CellType::integer},
                              {"a", CellType::integer},
                              {"alpha", CellType::rational},
                              {"B", CellType::integer},
                              {"average", CellType::complex},
                              {"A", CellType::complex},
                              {"excess", CellType::complex},
                              {"normalized", CellType::real},
                              {"predicted", CellType::complex},
                              {"ratio_to_predicted", CellType::real},
                              {"conjecture", CellType::complex},
                              {"central_value", CellType::complex},
                              {"l_one_abs", CellType::real},
                              {"euler_product_bound", CellType::real}});

    // One block per (chi, mimicked character), with alpha = a/b.
    auto add_rows = [&](const std::string& kind, const DirichletCharacter& chi, const DirichletCharacter& mimic,
                        const PretentiousModulus& found, const std::vector<i64>& as) {
        const u64 q = chi.modulus();
        const u64 q1 = found.q1;
        const u64 bb = mimic.modulus();
        const u64 B = opt.window.value_or(default_window(q1, found.depth));
        const PrefixSumTable table(chi, ctx.exec);
        const auto constants = character_constants(table, ctx.exec);
        const auto tau_bar = gauss_sum(conjugate(mimic)).value;
        const double rootq = std::sqrt(static_cast<double>(q));
        const double sign = chi.is_even() ? 1.0 : -1.0;
        const double bound = 2.0 * std::abs(euler_product(mimic, std::log(static_cast<double>(q))));
        for (i64 a : as) {
            const Rational alpha(a, static_cast<i64>(bb));
            const auto avg = exact_window_average(table, alpha, Rational(static_cast<i64>(B)));
            const auto excess = avg.value - constants.A;
            const auto psi_a = mimic(a).approx;
            const auto predicted = sign * psi_a * constants.tau * tau_bar / (kI * static_cast<double>(bb) * kPi) *
                                   std::log(static_cast<double>(B));
            const auto conjecture = psi_a * tau_bar * kEulerGammaExp * constants.tau /
                                    (kI * kPi * static_cast<double>(bb)) * log_log(q);
            const auto central = char_sum(table, Rational::from_wide(static_cast<i128>(a) * q, bb));
            report.add_row({text(kind), integer(q), integer(q1), integer(a), Cell{alpha}, integer(B), cplx(avg.value),
                            cplx(constants.A), cplx(excess),
                            real(std::abs(excess) * kPi * std::sqrt(static_cast<double>(bb)) / (rootq * log_log(q))),
                            cplx(predicted), real(std::abs(excess) / std::abs(predicted)), cplx(conjecture),
                            cplx(central), real(std::abs(constants.l_one)), real(bound)});
        }
    };

    const PretentiousModulus found = residue_one_modulus(opt.y, b);
    const DirichletCharacter chi = product_character(quadratic_character(found.q1), psi);
    std::vector<i64> as;
    for (u64 a = 1; a <= b; ++a)
        if (gcd(a, b) == 1) as.push_back(static_cast<i64>(a));
    add_rows("thm2", chi, psi, found, as);
    if (b == 1) {
        const PretentiousModulus paley = paley_modulus(opt.y);
        const auto chi4 = character_from_index(unit_group(4), 1);
        add_rows("paley", quadratic_character(paley.q1), chi4, paley, {1});
    }

    report.inputs = {{"b", integer(b)},
                     {"psi", text(psi.label())},
                     {"psi_parity", text(parity_name(psi))},
                     {"psi_order", integer(psi.order())},
                     {"y", integer(opt.y)},
                     {"q", integer(chi.modulus())},
                     {"chi_parity", text(parity_name(chi))},
                     {"chi_order", integer(chi.order())}};
    report.add_summary("rows", "count", "");
    report.add_summary("min_normalized", "min", "normalized");
    report.add_summary("max_ratio_to_predicted", "max", "ratio_to_predicted");
    return report;
}

DirichletCharacter odd_quadratic_character(u64 b) {
    for (auto& chi : primitive_characters(b))
        if (chi.order() == 2 && chi.is_odd()) return chi;
    throw InvalidArgument("no primitive odd quadratic character modulo " + std::to_string(b));
}

SignedScan signed_window_scan(const PrefixSumTable& table, const Rational& alpha, u64 B, int sign, Exec exec) {
    require(B >= 2, "signed_window_scan: B must be at least 2");
    require(sign == 1 || sign == -1, "signed_window_scan: sign must be +1 or -1");
    require(table.exact(), "signed_window_scan: character must be real");
    const i64 q = static_cast<i64>(table.modulus());
    const Rational half_width(1, static_cast<i64>(B));
    const i64 first = ((alpha - half_width) * Rational(q)).ceil();
    const i64 last = ((alpha + half_width) * Rational(q)).floor();
    const auto best = kernels::argmax(
        first, last + 1, [&](i64 n) { return static_cast<double>(sign * table.exact_prefix(n)); }, exec);
    return {best.index, static_cast<double>(table.exact_prefix(best.index))};
}

ExperimentReport run_thm3(const Thm3Options& opt, const RunContext& ctx) {
    require(!opt.ys.empty(), "thm3: empty depth list");
    if (opt.window) require(*opt.window >= 2, "thm3: B must be at least 2");
    const DirichletCharacter psi = odd_quadratic_character(opt.b);
    const u64 b = opt.b;

    ExperimentReport report = make_report("thm3", ctx);
    report.inputs = {{"b", integer(b)}, {"psi", text(psi.label())}, {"ys", text(join(opt.ys))}};
    report.columns = columns({{"y", CellType::integer},
                              {"q", CellType::integer},
                              {"q1", CellType::integer},
                              {"B", CellType::integer},
                              {"a", CellType::integer},
                              {"psi_a", CellType::integer},
                              {"alpha_star", CellType::rational},
                              {"sum_at_alpha_star", CellType::real},
                              {"normalized", CellType::real},
                              {"ratio_to_loglog", CellType::real},
                              {"offset_times_log_q", CellType::real},
                              {"window_average", CellType::real},
                              {"sign_ok", CellType::boolean}});
    for (u64 y : opt.ys) {
        const PretentiousModulus found = residue_one_modulus(y, b);
        const DirichletCharacter chi = product_character(quadratic_character(found.q1), psi);
        const u64 q = chi.modulus();
        const u64 q1 = found.q1;
        const u64 B = opt.window.value_or(default_window(q1, found.depth));
        const PrefixSumTable table(chi, ctx.exec);
        const double rootq = std::sqrt(static_cast<double>(q));
        for (u64 a = 1; a < b; ++a) {
            if (gcd(a, b) != 1) continue;
            const int s = psi(static_cast<i64>(a)).approx.real() > 0 ? 1 : -1;
            const Rational alpha(static_cast<i64>(a), static_cast<i64>(b));
            const auto scan = signed_window_scan(table, alpha, B, s, ctx.exec);
            const Rational alpha_star(scan.n, static_cast<i64>(q));
            Rational distance = alpha_star - alpha;
            if (distance < Rational(0)) distance = -distance;
            const double offset = distance.to_double();
            const double normalized = scan.value * kPi * std::sqrt(static_cast<double>(b)) / rootq;
            const auto avg = exact_window_average(table, alpha, Rational(static_cast<i64>(B)));
            const bool within = distance <= Rational(1, static_cast<i64>(B));
            report.add_row({integer(y), integer(q), integer(q1), integer(B), integer(a), integer(static_cast<i64>(s)),
                            Cell{alpha_star}, real(scan.value), real(normalized), real(normalized / log_log(q)),
                            real(offset * std::log(static_cast<double>(q))), real(avg.value.real()),
                            Cell{scan.value * s > 0 && within}});
        }
    }
    report.add_summary("rows", "count", "");
    report.add_summary("all_signs_match", "all", "sign_ok");
    report.add_summary("max_normalized_abs", "max_abs", "normalized");
    return report;
}

ExperimentReport run_corollary(const CorollaryOptions& opt, const RunContext& ctx) {
    require(!opt.A_values.empty(), "corollary: empty A list");
    const DirichletCharacter chi =
        opt.chi ? *opt.chi : build_thm2_character(odd_quadratic_character(3), 7);
    require(chi.is_even(), "corollary: character must be even");
    require(chi.primitive() && !chi.is_principal(), "corollary: character must be primitive and non-principal");
    const u64 q = chi.modulus();
    const double logq = std::log(static_cast<double>(q));
    const double rootq = std::sqrt(static_cast<double>(q));
    const PrefixSumTable table(chi, ctx.exec);

    ExperimentReport report = make_report("corollary", ctx);
    report.inputs = {{"q", integer(q)},
                     {"character", text(chi.label())},
                     {"euler_gamma_exp", real(kEulerGammaExp)},
                     {"A", opt.A_values.size() == 1 ? real(opt.A_values.front()) : text(join(opt.A_values))}};
    report.columns = columns({{"A", CellType::real},
                              {"B", CellType::integer},
                              {"window_average", CellType::complex},
                              {"window_bound", CellType::real},
                              {"measured_c", CellType::real},
                              {"sum_at_third", CellType::real},
                              {"best_N", CellType::integer},
                              {"best_value", CellType::real},
                              {"lower_bound", CellType::real},
                              {"holds", CellType::boolean},
                              {"asymptotic_bound", CellType::real}});
    const i64 x0 = static_cast<i64>(q / 3);
    const double s_third = std::abs(table.prefix(x0));
    for (double A : opt.A_values) {
        require(A > 0.0 && std::isfinite(A), "corollary: A must be positive");
        const double Bf = std::floor(std::pow(logq, A));
        require(Bf >= 2.0, "corollary: B = (log q)^A must be at least 2");
        const u64 B = static_cast<u64>(Bf);
        const auto avg = exact_window_average(table, Rational(1, 3), Rational(static_cast<i64>(B))).value;
        const double bound = rootq * std::log(Bf) / kPi;
        const i64 L = static_cast<i64>(q / B) + 2;
        const auto best = short_interval_max(table, x0, L, ctx.exec);
        const double lower = s_third - std::abs(avg) - 1.0;
        const double asymptotic = (kEulerGammaExp / (kPi * std::sqrt(3.0)) - A / kPi) * rootq * log_log(q);
        report.add_row({real(A), integer(B), cplx(avg), real(bound), real((std::abs(avg) - bound) / rootq),
                        real(s_third), integer(best.x), real(best.value), real(lower), Cell{best.value >= lower},
                        real(asymptotic)});
    }
    report.add_summary("rows", "count", "");
    report.add_summary("all_hold", "all", "holds");
    report.add_summary("max_measured_c", "max", "measured_c");
    return report;
}

// ---- near the centre ----------------------------------------------------

ExperimentReport run_thm4(const Thm4Options& opt, const RunContext& ctx) {
    require(!opt.ys.empty(), "thm4: empty depth list");
    require(!opt.model_A.empty(), "thm4: empty model list");
    ExperimentReport report = make_report("thm4", ctx);
    report.inputs = {{"ys", text(join(opt.ys))},
                     {"max_modulus", integer(opt.max_modulus)},
                     {"model_A", text(join(opt.model_A))}};
    std::vector<Column> cols = columns({{"y", CellType::integer},
                                        {"status", CellType::text},
                                        {"q", CellType::integer},
                                        {"B", CellType::integer},
                                        {"t_star", CellType::rational},
                                        {"gap", CellType::real},
                                        {"normalized_gap", CellType::real},
                                        {"offset_from_peak_guess", CellType::real},
                                        {"central_sum", CellType::real},
                                        {"identity_residual", CellType::real},
                                        {"window_average", CellType::real}});
    for (double A : opt.model_A) cols.push_back({"model_A" + format_real(A), CellType::real});
    cols.push_back({"predicted_average", CellType::real});
    report.columns = cols;

    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (u64 y : opt.ys) {
        std::optional<PretentiousModulus> found;
        try {
            found = residue_one_modulus(y, 1, opt.max_modulus);
        } catch (const NotFound&) {
        }
        std::vector<Cell> row;
        if (!found) {
            row = {integer(y), text("not_found"), integer(i64{0}), integer(i64{0}), Cell{Rational(0)}, real(nan),
                   real(nan), real(nan), real(nan), real(nan), real(nan)};
            for (std::size_t i = 0; i <= opt.model_A.size(); ++i) row.push_back(real(nan));
            report.add_row(std::move(row));
            continue;
        }
        const u64 q = found->q1;
        const PrefixSumTable table(quadratic_character(q), ctx.exec);
        const u64 B = least_nonresidue(table);
        const auto scan = thm4_scan(table, B, ctx.exec);
        const auto half = window_average_half(table, opt.model_A.back(), ctx.exec);
        const Rational guess(static_cast<i64>(B - 1), static_cast<i64>(2 * B));
        row = {integer(y), text("ok"), integer(q), integer(B), Cell{scan.t}, real(scan.gap),
               real(scan.normalized_gap), real(std::abs((scan.t - guess).to_double())), real(half.central_sum),
               real(half.identity_residual), real(half.exact_average.value.real())};
        for (double A : opt.model_A) row.push_back(real(half_window_model(table, B, A, ctx.exec)));
        row.push_back(real(half.predicted_average));
        report.add_row(std::move(row));
    }
    report.add_summary("rows", "count", "");
    report.add_summary("min_gap", "min", "gap");
    report.add_summary("max_normalized_gap", "max", "normalized_gap");
    report.add_summary("max_identity_residual", "max_abs", "identity_residual");
    return report;
}

ExperimentReport run_smoothness(const SmoothnessOptions& opt, const RunContext& ctx) {
    std::vector<double> As = opt.A_values;
    std::vector<u64> Bs = opt.B_values;
    if (As.empty())
        for (int A = 2; A <= 20; ++A) As.push_back(A);
    if (Bs.empty())
        for (u64 B = 10; B <= 100; ++B) Bs.push_back(B);

    ExperimentReport report = make_report("smoothness", ctx);
    report.inputs = {{"A_values", text(join(As))}, {"B_values", text(join(Bs))}};
    report.columns = columns({{"A", CellType::real},
                              {"B", CellType::integer},
                              {"x", CellType::integer},
                              {"count", CellType::integer},
                              {"bound", CellType::real},
                              {"ratio", CellType::real}});
    for (double A : As)
        for (u64 B : Bs) {
            const u64 count = nonsmooth_count(A, B, ctx.exec);
            const double AB = A * static_cast<double>(B);
            const double bound = A * A * static_cast<double>(B) / std::log(AB);
            report.add_row({real(A), integer(B), integer(static_cast<u64>(std::floor(AB))), integer(count),
                            real(bound), real(static_cast<double>(count) / bound)});
        }
    report.add_summary("rows", "count", "");
    report.add_summary("max_ratio", "max", "ratio");
    return report;
}

}  // namespace charsum
