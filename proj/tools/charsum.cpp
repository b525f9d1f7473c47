// charsum: command-line front end for the character-sum library.

#include <omp.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "charsum/analysis.hpp"
#include "charsum/constructions.hpp"
#include "charsum/errors.hpp"
#include "charsum/experiments.hpp"

using namespace charsum;
using json = nlohmann::ordered_json;

namespace {

enum Exit { ok = 0, invalid = 2, infeasible = 3, internal = 4 };

struct Options {
    std::vector<u64> moduli;
    std::string index;
    std::optional<u64> number;
    bool quadratic = false;
    std::vector<std::string> alphas;
    std::vector<std::string> windows;
    std::string x = "0";
    std::vector<u64> ys;
    std::vector<double> As;
    std::vector<double> xs;
    i64 a = 1;
    u64 terms = 100000;
    std::string kind = "residue-one";
    std::string conditions;
    std::string parity = "1/1";
    u64 lo = 2;
    u64 hi = kMaxSearchModulus;
    u64 avoid = 1;
    u64 max_modulus = 10'000'000;
    std::size_t random_alphas = 0;
    std::string format = "json";
    std::string out;
    int threads = 0;
    u64 seed = 0;
    std::string experiment;
};

u64 single_modulus(const Options& o, u64 fallback = 0) {
    if (o.moduli.empty()) {
        if (fallback) return fallback;
        throw InvalidArgument("--modulus is required");
    }
    if (o.moduli.size() > 1) throw InvalidArgument("expected a single --modulus");
    return o.moduli.front();
}

bool has_selector(const Options& o) { return o.quadratic || !o.index.empty() || o.number.has_value(); }

DirichletCharacter select_character(const Options& o, u64 q) {
    require(q >= 1, "--modulus must be positive");
    const int chosen = int(o.quadratic) + int(!o.index.empty()) + int(o.number.has_value());
    require(chosen <= 1, "use only one of --index, --number, --quadratic");
    if (o.quadratic) return quadratic_character(q);
    const auto group = unit_group(q);
    if (o.number) {
        require(*o.number < group->phi(), "--number must be below phi(q)");
        return character_from_index(group, *o.number);
    }
    if (!o.index.empty()) return character_from_exponents(group, o.index);
    if (q > 2 && is_prime(q)) return quadratic_character(q);
    throw InvalidArgument("select a character with --index, --number or --quadratic");
}

Rational parse_rational(const std::string& s, const char* what) {
    try {
        return Rational::parse(s);
    } catch (const std::exception&) {
        throw InvalidArgument(std::string("cannot parse ") + what + " '" + s + "'");
    }
}

json cplx(std::complex<double> z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

json character_json(const DirichletCharacter& chi) {
    return json{{"modulus", chi.modulus()},
                {"label", chi.label()},
                {"index", character_index(chi)},
                {"order", chi.order()},
                {"parity", chi.is_odd() ? "odd" : "even"},
                {"conductor", chi.conductor()},
                {"primitive", chi.primitive()}};
}

void emit(const Options& o, const std::string& text) {
    if (o.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(o.out, std::ios::binary);
    if (!f) throw InvalidArgument("cannot open " + o.out + " for writing");
    f << text;
}

// Flat key/value output for the point queries.
void emit_object(const Options& o, const json& j) {
    if (o.format == "json") {
        emit(o, j.dump(2) + "\n");
        return;
    }
    std::ostringstream header, values;
    bool first = true;
    for (const auto& [k, v] : j.items()) {
        auto field = [&](const std::string& name, const json& value) {
            header << (first ? "" : ",") << name;
            if (value.is_number_float())
                values << (first ? "" : ",") << format_real(value.get<double>());
            else if (value.is_string())
                values << (first ? "" : ",") << value.get<std::string>();
            else
                values << (first ? "" : ",") << value.dump();
            first = false;
        };
        if (v.is_object() && v.contains("re")) {
            field(k + "_re", v["re"]);
            field(k + "_im", v["im"]);
        } else {
            field(k, v);
        }
    }
    emit(o, header.str() + "\n" + values.str() + "\n");
}

void emit_report(const Options& o, const ExperimentReport& r) {
    emit(o, o.format == "csv" ? to_csv(r) : to_json(r));
}

int cmd_char(const Options& o) {
    const auto chi = select_character(o, single_modulus(o));
    json j = character_json(chi);
    json values = json::array();
    const u64 shown = std::min<u64>(chi.modulus(), 24);
    for (u64 n = 1; n <= shown; ++n) values.push_back(chi(static_cast<i64>(n)).str());
    if (o.format == "json") j["values"] = values;
    emit_object(o, j);
    return ok;
}

int cmd_sum(const Options& o) {
    const auto chi = select_character(o, single_modulus(o));
    const PrefixSumTable table(chi);
    const auto x = parse_rational(o.x, "--x");
    require(x >= Rational(0), "--x must be nonnegative");
    const auto m = max_char_sum(table);
    emit_object(o, json{{"character", chi.label()},
                        {"x", x.str()},
                        {"sum", cplx(char_sum(table, x))},
                        {"midpoint_sum", cplx(midpoint_sum(table, x))},
                        {"max_at", m.x},
                        {"max_value", m.value}});
    return ok;
}

int cmd_gauss(const Options& o) {
    const auto chi = select_character(o, single_modulus(o));
    const PrefixSumTable table(chi);
    const auto tau = gauss_sum(table).value;
    emit_object(o, json{{"character", chi.label()},
                        {"tau", cplx(tau)},
                        {"abs_squared_over_q", std::norm(tau) / static_cast<double>(chi.modulus())}});
    return ok;
}

int cmd_lvalue(const Options& o) {
    const auto chi = select_character(o, single_modulus(o));
    const PrefixSumTable table(chi);
    const auto c = character_constants(table);
    require(!chi.is_principal() && chi.primitive(), "L(1, chi) needs a primitive non-principal character");
    const auto series = l_one_series(table, o.terms);
    emit_object(o, json{{"character", chi.label()},
                        {"l_one", cplx(c.l_one)},
                        {"A", cplx(c.A)},
                        {"series", cplx(series.partial)},
                        {"series_terms", series.terms},
                        {"tail_bound", series.tail_bound},
                        {"series_gap", std::abs(series.partial - c.l_one)}});
    return ok;
}

int cmd_window(const Options& o) {
    const auto chi = select_character(o, single_modulus(o));
    require(chi.primitive(), "window: character must be primitive");
    require(o.alphas.size() == 1 && o.windows.size() == 1, "window: give one --alpha and one --B");
    const PrefixSumTable table(chi);
    const auto alpha = parse_rational(o.alphas.front(), "--alpha");
    const auto B = parse_rational(o.windows.front(), "--B");
    const auto r = theorem1_residual(table, alpha, B);
    emit_object(o, json{{"character", chi.label()},
                        {"alpha", alpha.str()},
                        {"B", B.str()},
                        {"lhs", cplx(r.lhs_exact)},
                        {"lhs_exact", r.lhs_rational ? r.lhs_rational->str() : ""},
                        {"A", cplx(r.A_of_chi)},
                        {"rhs", cplx(r.rhs_truncated)},
                        {"residual", cplx(r.residual)},
                        {"residual_over_sqrt_q", r.residual_over_sqrt_q}});
    return ok;
}

std::vector<LocalCondition> parse_conditions(const std::string& text) {
    std::vector<LocalCondition> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        const auto colon = item.find(':');
        require(colon != std::string::npos, "--conditions expects p:s pairs such as 3:1,5:-1");
        try {
            out.push_back({std::stoull(item.substr(0, colon)), std::stoi(item.substr(colon + 1))});
        } catch (const std::logic_error&) {
            throw InvalidArgument("cannot parse condition '" + item + "'");
        }
    }
    return out;
}

int cmd_search(const Options& o) {
    require(!o.ys.empty() || o.kind == "spec", "search: --y is required");
    if (o.kind == "residue-one" || o.kind == "paley") {
        require(o.ys.size() == 1, "search: expected a single --y");
        const u64 y = o.ys.front();
        const auto m = o.kind == "paley" ? paley_modulus(y, o.hi) : residue_one_modulus(y, o.avoid, o.hi);
        emit_object(o, json{{"kind", o.kind},
                            {"y", y},
                            {"q", m.q1},
                            {"depth", m.depth},
                            {"residue", m.residue_class.residue},
                            {"class_modulus", m.residue_class.modulus}});
        return ok;
    }
    require(o.kind == "spec", "search: --kind must be residue-one, paley or spec");
    SearchSpec spec;
    spec.conditions = parse_conditions(o.conditions);
    const auto slash = o.parity.find('/');
    require(slash != std::string::npos, "--parity expects r/m");
    try {
        spec.parity = {std::stoull(o.parity.substr(0, slash)), std::stoull(o.parity.substr(slash + 1))};
    } catch (const std::logic_error&) {
        throw InvalidArgument("cannot parse --parity '" + o.parity + "'");
    }
    spec.lo = o.lo;
    spec.hi = o.hi;
    spec.avoid = o.avoid;
    const auto cls = reciprocity_conditions(spec);
    const auto p = find_prime_in_class(cls.residue, cls.modulus, std::max(o.lo, cls.residue), o.hi);
    if (!p) throw NotFound("no prime in the class within range");
    emit_object(o, json{{"kind", "spec"},
                        {"residue", cls.residue},
                        {"class_modulus", cls.modulus},
                        {"q", *p},
                        {"verified", satisfies(spec, *p)}});
    return ok;
}

int cmd_experiment(const Options& o) {
    const RunContext ctx{o.seed, Exec::parallel};
    const std::string& id = o.experiment;
    if (id == "thm1") {
        Thm1Options t;
        t.moduli = o.moduli;
        if (t.moduli.empty())
            for (u64 q = 3; q <= 20; ++q) t.moduli.push_back(q);
        for (const auto& a : o.alphas) t.alphas.push_back(parse_rational(a, "--alpha"));
        for (const auto& b : o.windows) t.windows.push_back(parse_rational(b, "--B"));
        t.random_alphas = o.random_alphas;
        emit_report(o, run_thm1(t, ctx));
    } else if (id == "lemma3") {
        const u64 q = single_modulus(o, 4);
        Lemma3Options t;
        t.chi = (has_selector(o) || (q > 2 && is_prime(q))) ? select_character(o, q)
                                                            : odd_quadratic_character(q);
        t.a = o.a;
        t.xs = o.xs;
        emit_report(o, run_lemma3(t, ctx));
    } else if (id == "thm2") {
        const u64 b = single_modulus(o, 3);
        Thm2Options t;
        if (b == 1)
            t.psi = DirichletCharacter::principal(1);
        else
            t.psi = has_selector(o) ? select_character(o, b) : odd_quadratic_character(b);
        if (!o.ys.empty()) t.y = o.ys.front();
        if (!o.windows.empty()) t.window = static_cast<u64>(parse_rational(o.windows.front(), "--B").floor());
        emit_report(o, run_thm2(t, ctx));
    } else if (id == "thm3") {
        Thm3Options t;
        t.b = single_modulus(o, 3);
        if (!o.ys.empty()) t.ys = o.ys;
        if (!o.windows.empty()) t.window = static_cast<u64>(parse_rational(o.windows.front(), "--B").floor());
        emit_report(o, run_thm3(t, ctx));
    } else if (id == "corollary") {
        CorollaryOptions t;
        if (!o.moduli.empty()) t.chi = select_character(o, single_modulus(o));
        if (!o.As.empty()) t.A_values = o.As;
        emit_report(o, run_corollary(t, ctx));
    } else if (id == "thm4") {
        Thm4Options t;
        if (!o.ys.empty()) t.ys = o.ys;
        t.max_modulus = o.max_modulus;
        emit_report(o, run_thm4(t, ctx));
    } else if (id == "smoothness") {
        SmoothnessOptions t;
        t.A_values = o.As;
        for (const auto& b : o.windows) t.B_values.push_back(static_cast<u64>(parse_rational(b, "--B").floor()));
        emit_report(o, run_smoothness(t, ctx));
    } else {
        throw InvalidArgument("unknown experiment '" + id + "'");
    }
    return ok;
}

void character_flags(CLI::App* cmd, Options& o) {
    cmd->add_option("--modulus,-q", o.moduli, "modulus q (repeatable where a list makes sense)");
    cmd->add_option("--index", o.index, "exponent vector e1,e2,... over the fixed generators");
    cmd->add_option("--number", o.number, "character number in mixed-radix order");
    cmd->add_flag("--quadratic", o.quadratic, "Legendre symbol modulo an odd prime");
}

void common_flags(CLI::App* cmd, Options& o) {
    cmd->add_option("--format", o.format, "output format")->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--out", o.out, "write output to a file");
    cmd->add_option("--threads", o.threads, "OpenMP threads (0 keeps the default)")->check(CLI::NonNegativeNumber);
    cmd->add_option("--seed", o.seed, "seed recorded in reports and used for random grids");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dirichlet character sums: tables, Gauss sums, window averages and experiments"};
    app.set_version_flag("--version", std::string(CHARSUM_VERSION));
    app.require_subcommand(1);
    Options o;

    auto* ch = app.add_subcommand("char", "describe a character");
    auto* sum = app.add_subcommand("sum", "character sum S(x), its midpoint value and the maximum");
    auto* gauss = app.add_subcommand("gauss", "Gauss sum");
    auto* lval = app.add_subcommand("lvalue", "L(1, chi) and A(chi)");
    auto* window = app.add_subcommand("window", "window average against the truncated Fourier side");
    auto* search = app.add_subcommand("search", "search for moduli with prescribed quadratic residues");
    auto* exp = app.add_subcommand("experiment", "run an experiment driver and emit a report");
    for (auto* c : {ch, sum, gauss, lval, window, search, exp}) common_flags(c, o);
    for (auto* c : {ch, sum, gauss, lval, window, exp}) character_flags(c, o);
    ch->callback([] {});
    sum->add_option("--x", o.x, "point x >= 0 as n or n/d");
    lval->add_option("--terms", o.terms, "terms of the series cross-check");
    for (auto* c : {window, exp}) {
        c->add_option("--alpha", o.alphas, "alpha as n/d");
        c->add_option("--B", o.windows, "window parameter B");
    }
    search->add_option("--kind", o.kind, "residue-one, paley or spec")
        ->check(CLI::IsMember({"residue-one", "paley", "spec"}));
    search->add_option("--conditions", o.conditions, "p:s pairs, e.g. 2:1,3:1,5:-1");
    search->add_option("--parity", o.parity, "residue class r/m with m in {1,2,4,8}");
    search->add_option("--lo", o.lo, "lower end of the range");
    search->add_option("--hi", o.hi, "upper end of the range");
    search->add_option("--avoid", o.avoid, "skip moduli sharing a factor with this");
    for (auto* c : {search, exp}) c->add_option("--y", o.ys, "depth y");
    exp->add_option("experiment", o.experiment, "thm1, lemma3, thm2, thm3, corollary, thm4 or smoothness")
        ->required();
    exp->add_option("--A", o.As, "A parameters");
    exp->add_option("--a", o.a, "residue a for lemma3");
    exp->add_option("--x", o.xs, "x grid for lemma3");
    exp->add_option("--random-alphas", o.random_alphas, "extra random alphas for thm1");
    exp->add_option("--max-modulus", o.max_modulus, "search cap for thm4");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : invalid;
    }

    try {
        if (o.threads > 0) omp_set_num_threads(o.threads);
        if (*ch) return cmd_char(o);
        if (*sum) return cmd_sum(o);
        if (*gauss) return cmd_gauss(o);
        if (*lval) return cmd_lvalue(o);
        if (*window) return cmd_window(o);
        if (*search) return cmd_search(o);
        if (*exp) return cmd_experiment(o);
    } catch (const InvalidArgument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return invalid;
    } catch (const Infeasible& e) {
        std::fprintf(stderr, "infeasible: %s\n", e.what());
        return infeasible;
    } catch (const NotFound& e) {
        std::fprintf(stderr, "not found: %s\n", e.what());
        return infeasible;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return internal;
    }
    return internal;
}
