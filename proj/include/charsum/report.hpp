#pragma once
// Experiment reports: typed rows plus summary statistics that can be
// recomputed from the rows, emitted as JSON or CSV.

#include <complex>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "charsum/rational.hpp"

namespace charsum {

using Cell = std::variant<i64, double, std::complex<double>, Rational, std::string, bool>;

enum class CellType { integer, real, complex, rational, text, boolean };

CellType cell_type(const Cell& c);
const char* type_name(CellType t);
CellType parse_type_name(const std::string& name);

struct Column {
    std::string name;
    CellType type = CellType::real;
    friend bool operator==(const Column&, const Column&) = default;
};

// A summary scalar together with the rule that reproduces it from the rows.
// op is one of: count, max, min, max_abs, sum, all, any. count gives an
// integer, all and any a boolean, the rest a real.
struct SummaryStat {
    std::string name;
    std::string op;
    std::string column;
    Cell value;
    friend bool operator==(const SummaryStat&, const SummaryStat&) = default;
};

struct ExperimentReport {
    std::string experiment_id;
    std::vector<std::pair<std::string, Cell>> inputs;
    std::vector<Column> columns;
    std::vector<std::vector<Cell>> rows;
    std::vector<SummaryStat> summary;
    std::string artifact_version;
    std::string timestamp;
    u64 seed = 0;

    std::size_t column_index(const std::string& name) const;
    const Cell& at(std::size_t row, const std::string& column) const;
    double real_at(std::size_t row, const std::string& column) const;
    const Cell& summary_value(const std::string& name) const;
    void add_row(std::vector<Cell> row);
    // Appends a statistic and evaluates it on the current rows.
    void add_summary(const std::string& name, const std::string& op, const std::string& column);

    friend bool operator==(const ExperimentReport&, const ExperimentReport&) = default;
};

Cell evaluate_summary(const ExperimentReport& report, const SummaryStat& stat);
// True when every summary value equals its recomputation from the rows.
bool summary_consistent(const ExperimentReport& report);

// SOURCE_DATE_EPOCH when set, otherwise the epoch.
std::string report_timestamp();

std::string to_json(const ExperimentReport& report);
// Throws InvalidArgument on malformed input or an inconsistent summary.
ExperimentReport from_json(const std::string& text);

// Header plus one line per row; complex columns split into name_re, name_im.
// Reals carry 12 significant digits.
std::string to_csv(const ExperimentReport& report);
std::vector<std::vector<Cell>> rows_from_csv(const std::string& text, const std::vector<Column>& columns);

std::string format_real(double x);

}  // namespace charsum
