#include "charsum/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <limits>
#include <regex>
#include <sstream>

#include <json.hpp>

#include "charsum/errors.hpp"

namespace charsum {

using json = nlohmann::ordered_json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string rational_text(const Rational& r) { return std::to_string(r.num()) + "/" + std::to_string(r.den()); }

json real_json(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    return x;
}

double real_from_json(const json& j) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "nan") return kNaN;
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
    }
    throw InvalidArgument("report: expected a real number, got " + j.dump());
}

double parse_real(const std::string& s) {
    if (s == "nan") return kNaN;
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size()) throw InvalidArgument("report: cannot parse real '" + s + "'");
    return v;
}

json cell_json(const Cell& c) {
    return std::visit(
        [](const auto& v) -> json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>)
                return real_json(v);
            else if constexpr (std::is_same_v<T, std::complex<double>>)
                return json{{"re", real_json(v.real())}, {"im", real_json(v.imag())}};
            else if constexpr (std::is_same_v<T, Rational>)
                return rational_text(v);
            else
                return v;
        },
        c);
}

Cell typed_cell(const json& j, CellType t) {
    switch (t) {
        case CellType::integer: return j.get<i64>();
        case CellType::real: return real_from_json(j);
        case CellType::complex: return std::complex<double>{real_from_json(j.at("re")), real_from_json(j.at("im"))};
        case CellType::rational: return Rational::parse(j.get<std::string>());
        case CellType::text: return j.get<std::string>();
        case CellType::boolean: return j.get<bool>();
    }
    throw InvalidArgument("report: unknown cell type");
}

// Inputs carry no schema: read the JSON kind, with "n/d" strings as rationals.
Cell untyped_cell(const json& j) {
    static const std::regex rational_re("-?[0-9]+/[0-9]+");
    if (j.is_boolean()) return j.get<bool>();
    if (j.is_number_integer()) return j.get<i64>();
    if (j.is_number_float()) return j.get<double>();
    if (j.is_object()) return typed_cell(j, CellType::complex);
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (std::regex_match(s, rational_re)) return Rational::parse(s);
        if (s == "nan" || s == "inf" || s == "-inf") return parse_real(s);
        return s;
    }
    throw InvalidArgument("report: unsupported input value " + j.dump());
}

double as_real(const Cell& c) {
    return std::visit(
        [](const auto& v) -> double {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, i64>)
                return static_cast<double>(v);
            else if constexpr (std::is_same_v<T, double>)
                return v;
            else if constexpr (std::is_same_v<T, std::complex<double>>)
                return std::abs(v);
            else if constexpr (std::is_same_v<T, Rational>)
                return v.to_double();
            else if constexpr (std::is_same_v<T, bool>)
                return v ? 1.0 : 0.0;
            else
                throw InvalidArgument("report: text cell has no numeric value");
        },
        c);
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

std::vector<std::string> csv_split(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (quoted) {
            if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (ch == '"') {
                quoted = false;
            } else {
                cur += ch;
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

CellType cell_type(const Cell& c) { return static_cast<CellType>(c.index()); }

const char* type_name(CellType t) {
    switch (t) {
        case CellType::integer: return "integer";
        case CellType::real: return "real";
        case CellType::complex: return "complex";
        case CellType::rational: return "rational";
        case CellType::text: return "text";
        case CellType::boolean: return "boolean";
    }
    return "?";
}

CellType parse_type_name(const std::string& name) {
    for (int i = 0; i <= static_cast<int>(CellType::boolean); ++i)
        if (name == type_name(static_cast<CellType>(i))) return static_cast<CellType>(i);
    throw InvalidArgument("report: unknown column type '" + name + "'");
}

std::string format_real(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

std::size_t ExperimentReport::column_index(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (columns[i].name == name) return i;
    throw InvalidArgument("report: no column '" + name + "'");
}

const Cell& ExperimentReport::at(std::size_t row, const std::string& column) const {
    return rows.at(row).at(column_index(column));
}

double ExperimentReport::real_at(std::size_t row, const std::string& column) const {
    return as_real(at(row, column));
}

const Cell& ExperimentReport::summary_value(const std::string& name) const {
    for (const auto& s : summary)
        if (s.name == name) return s.value;
    throw InvalidArgument("report: no summary value '" + name + "'");
}

void ExperimentReport::add_row(std::vector<Cell> row) {
    if (row.size() != columns.size()) throw std::logic_error("report: row width does not match the columns");
    for (std::size_t i = 0; i < row.size(); ++i)
        if (cell_type(row[i]) != columns[i].type)
            throw std::logic_error("report: cell type mismatch in column " + columns[i].name);
    rows.push_back(std::move(row));
}

void ExperimentReport::add_summary(const std::string& name, const std::string& op, const std::string& column) {
    SummaryStat s{name, op, column, Cell{i64{0}}};
    s.value = evaluate_summary(*this, s);
    summary.push_back(std::move(s));
}

Cell evaluate_summary(const ExperimentReport& report, const SummaryStat& stat) {
    if (stat.op == "count") return static_cast<i64>(report.rows.size());
    const std::size_t col = report.column_index(stat.column);
    if (stat.op == "all" || stat.op == "any") {
        bool all = true, any = false;
        for (const auto& row : report.rows) {
            const bool v = std::get<bool>(row[col]);
            all = all && v;
            any = any || v;
        }
        return stat.op == "all" ? all : any;
    }
    double acc = kNaN;
    bool seen = false;
    for (const auto& row : report.rows) {
        double v = as_real(row[col]);
        if (std::isnan(v)) continue;
        if (stat.op == "max_abs") v = std::abs(v);
        if (!seen) {
            acc = v;
            seen = true;
        } else if (stat.op == "max" || stat.op == "max_abs") {
            acc = std::max(acc, v);
        } else if (stat.op == "min") {
            acc = std::min(acc, v);
        } else if (stat.op == "sum") {
            acc += v;
        } else {
            throw InvalidArgument("report: unknown summary rule '" + stat.op + "'");
        }
    }
    if (stat.op != "max" && stat.op != "max_abs" && stat.op != "min" && stat.op != "sum")
        throw InvalidArgument("report: unknown summary rule '" + stat.op + "'");
    if (stat.op == "sum" && !seen) acc = 0.0;
    return acc;
}

bool summary_consistent(const ExperimentReport& report) {
    for (const auto& s : report.summary) {
        const Cell v = evaluate_summary(report, s);
        if (v == s.value) continue;
        // NaN compares unequal to itself
        if (cell_type(v) == CellType::real && cell_type(s.value) == CellType::real &&
            std::isnan(std::get<double>(v)) && std::isnan(std::get<double>(s.value)))
            continue;
        return false;
    }
    return true;
}

std::string report_timestamp() {
    const char* env = std::getenv("SOURCE_DATE_EPOCH");
    std::time_t t = 0;
    if (env != nullptr && *env != '\0') t = static_cast<std::time_t>(std::strtoll(env, nullptr, 10));
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string to_json(const ExperimentReport& report) {
    json j;
    j["experiment_id"] = report.experiment_id;
    j["artifact_version"] = report.artifact_version;
    j["timestamp"] = report.timestamp;
    j["seed"] = report.seed;
    json inputs = json::object();
    for (const auto& [k, v] : report.inputs) inputs[k] = cell_json(v);
    j["inputs"] = inputs;
    json columns = json::array();
    for (const auto& c : report.columns) columns.push_back({{"name", c.name}, {"type", type_name(c.type)}});
    j["columns"] = columns;
    json rows = json::array();
    for (const auto& row : report.rows) {
        json r = json::array();
        for (const auto& c : row) r.push_back(cell_json(c));
        rows.push_back(std::move(r));
    }
    j["rows"] = rows;
    json summary = json::array();
    for (const auto& s : report.summary)
        summary.push_back({{"name", s.name}, {"op", s.op}, {"column", s.column},
                           {"type", type_name(cell_type(s.value))}, {"value", cell_json(s.value)}});
    j["summary"] = summary;
    return j.dump(2) + "\n";
}

ExperimentReport from_json(const std::string& text) {
    ExperimentReport r;
    try {
        const json j = json::parse(text);
        r.experiment_id = j.at("experiment_id").get<std::string>();
        r.artifact_version = j.at("artifact_version").get<std::string>();
        r.timestamp = j.at("timestamp").get<std::string>();
        r.seed = j.at("seed").get<u64>();
        for (const auto& [k, v] : j.at("inputs").items()) r.inputs.emplace_back(k, untyped_cell(v));
        for (const auto& c : j.at("columns"))
            r.columns.push_back({c.at("name").get<std::string>(), parse_type_name(c.at("type").get<std::string>())});
        for (const auto& row : j.at("rows")) {
            if (row.size() != r.columns.size()) throw InvalidArgument("report: row width does not match the columns");
            std::vector<Cell> cells;
            for (std::size_t i = 0; i < row.size(); ++i) cells.push_back(typed_cell(row[i], r.columns[i].type));
            r.rows.push_back(std::move(cells));
        }
        for (const auto& s : j.at("summary"))
            r.summary.push_back({s.at("name").get<std::string>(), s.at("op").get<std::string>(),
                                 s.at("column").get<std::string>(),
                                 typed_cell(s.at("value"), parse_type_name(s.at("type").get<std::string>()))});
    } catch (const json::exception& e) {
        throw InvalidArgument(std::string("report: malformed JSON: ") + e.what());
    }
    if (!summary_consistent(r)) throw InvalidArgument("report: summary does not match the rows");
    return r;
}

std::string to_csv(const ExperimentReport& report) {
    std::ostringstream out;
    for (std::size_t i = 0; i < report.columns.size(); ++i) {
        if (i) out << ',';
        const auto& c = report.columns[i];
        if (c.type == CellType::complex)
            out << csv_escape(c.name + "_re") << ',' << csv_escape(c.name + "_im");
        else
            out << csv_escape(c.name);
    }
    out << '\n';
    for (const auto& row : report.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ',';
            std::visit(
                [&out](const auto& v) {
                    using T = std::decay_t<decltype(v)>;
                    if constexpr (std::is_same_v<T, i64>)
                        out << v;
                    else if constexpr (std::is_same_v<T, double>)
                        out << format_real(v);
                    else if constexpr (std::is_same_v<T, std::complex<double>>)
                        out << format_real(v.real()) << ',' << format_real(v.imag());
                    else if constexpr (std::is_same_v<T, Rational>)
                        out << v.str();
                    else if constexpr (std::is_same_v<T, bool>)
                        out << (v ? "true" : "false");
                    else
                        out << csv_escape(v);
                },
                row[i]);
        }
        out << '\n';
    }
    return out.str();
}

std::vector<std::vector<Cell>> rows_from_csv(const std::string& text, const std::vector<Column>& columns) {
    std::istringstream in(text);
    std::string line;
    std::size_t width = 0;
    for (const auto& c : columns) width += c.type == CellType::complex ? 2 : 1;
    if (!std::getline(in, line)) throw InvalidArgument("report: empty CSV");
    if (csv_split(line).size() != width) throw InvalidArgument("report: CSV header does not match the columns");
    std::vector<std::vector<Cell>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = csv_split(line);
        if (f.size() != width) throw InvalidArgument("report: CSV row has the wrong number of fields");
        std::vector<Cell> row;
        std::size_t k = 0;
        for (const auto& c : columns) {
            switch (c.type) {
                case CellType::integer: row.emplace_back(static_cast<i64>(std::stoll(f[k++]))); break;
                case CellType::real: row.emplace_back(parse_real(f[k++])); break;
                case CellType::complex: {
                    const double re = parse_real(f[k++]);
                    row.emplace_back(std::complex<double>{re, parse_real(f[k++])});
                    break;
                }
                case CellType::rational: row.emplace_back(Rational::parse(f[k++])); break;
                case CellType::text: row.emplace_back(f[k++]); break;
                case CellType::boolean: {
                    const auto& s = f[k++];
                    if (s != "true" && s != "false") throw InvalidArgument("report: bad boolean '" + s + "'");
                    row.emplace_back(s == "true");
                    break;
                }
            }
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace charsum
