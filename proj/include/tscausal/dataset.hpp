#pragma once

// Time-indexed dataset handling: strict CSV ingest of daily level series,
// inner-join alignment across calendars, differencing and z-scoring with a
// replayable transform log, and lag-scatter linearity diagnostics.

#include <Eigen/Dense>
#include <algorithm>
#include <cctype>
#include <chrono>
#include <compare>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace tscausal {

struct Date {
    int year = 0;
    int month = 0;
    int day = 0;

    auto operator<=>(const Date&) const = default;

    bool valid() const {
        std::chrono::year_month_day ymd{std::chrono::year{year},
                                        std::chrono::month{unsigned(month)},
                                        std::chrono::day{unsigned(day)}};
        return ymd.ok();
    }

    std::string to_string() const {
        char buf[16];
        std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", year, month, day);
        return buf;
    }

    Date plus_days(int n) const {
        std::chrono::sys_days sd{std::chrono::year_month_day{
            std::chrono::year{year}, std::chrono::month{unsigned(month)},
            std::chrono::day{unsigned(day)}}};
        std::chrono::year_month_day out{sd + std::chrono::days{n}};
        return Date{int(out.year()), int(unsigned(out.month())), int(unsigned(out.day()))};
    }
};

// Strict YYYY-MM-DD. Anything else (wrong width, non-digits, impossible
// calendar dates) is rejected.
inline std::optional<Date> parse_date(const std::string& s) {
    if (s.size() != 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
    for (int i : {0, 1, 2, 3, 5, 6, 8, 9})
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return std::nullopt;
    Date d{std::stoi(s.substr(0, 4)), std::stoi(s.substr(5, 2)), std::stoi(s.substr(8, 2))};
    if (!d.valid()) return std::nullopt;
    return d;
}

// Immutable T x n panel: strictly increasing dates, unique variable names,
// every cell finite.
class TimeSeriesDataset {
  public:
    TimeSeriesDataset(std::vector<std::string> names, std::vector<Date> dates,
                      Eigen::MatrixXd values)
        : names_(std::move(names)), dates_(std::move(dates)), values_(std::move(values)) {
        if (values_.rows() != static_cast<Eigen::Index>(dates_.size()))
            throw std::invalid_argument("dataset: row count does not match date count");
        if (values_.cols() != static_cast<Eigen::Index>(names_.size()))
            throw std::invalid_argument("dataset: column count does not match name count");
        if (names_.empty()) throw std::invalid_argument("dataset: no variables");
        if (dates_.empty()) throw std::invalid_argument("dataset: no rows");
        std::set<std::string> uniq(names_.begin(), names_.end());
        if (uniq.size() != names_.size())
            throw std::invalid_argument("dataset: duplicate variable names");
        for (size_t i = 1; i < dates_.size(); ++i)
            if (!(dates_[i - 1] < dates_[i]))
                throw std::invalid_argument("dataset: dates must be strictly increasing (row " +
                                            std::to_string(i) + ")");
        if (!values_.allFinite())
            throw std::invalid_argument("dataset: values must be finite (no missing cells)");
    }

    const std::vector<std::string>& variable_names() const { return names_; }
    const std::vector<Date>& dates() const { return dates_; }
    const Eigen::MatrixXd& values() const { return values_; }
    Eigen::Index rows() const { return values_.rows(); }
    Eigen::Index cols() const { return values_.cols(); }

    int variable_index(const std::string& name) const {
        for (size_t i = 0; i < names_.size(); ++i)
            if (names_[i] == name) return static_cast<int>(i);
        throw std::invalid_argument("dataset: unknown variable '" + name + "'");
    }

    TimeSeriesDataset slice_dates(const std::optional<Date>& start,
                                  const std::optional<Date>& end) const {
        std::vector<Date> d;
        std::vector<Eigen::Index> keep;
        for (Eigen::Index t = 0; t < rows(); ++t) {
            if (start && dates_[t] < *start) continue;
            if (end && *end < dates_[t]) continue;
            d.push_back(dates_[t]);
            keep.push_back(t);
        }
        if (keep.empty()) throw std::invalid_argument("dataset: date range selects no rows");
        Eigen::MatrixXd v(keep.size(), cols());
        for (size_t r = 0; r < keep.size(); ++r) v.row(r) = values_.row(keep[r]);
        return TimeSeriesDataset(names_, std::move(d), std::move(v));
    }

  private:
    std::vector<std::string> names_;
    std::vector<Date> dates_;
    Eigen::MatrixXd values_;
};

// One raw level series as ingested from a CSV, prior to alignment.
struct RawSeries {
    std::string name;
    std::vector<Date> dates;
    std::vector<double> values;
    std::vector<int> skipped_rows;  // 1-based data-row indices with unparseable numeric cells
};

struct TransformStep {
    enum class Kind { difference, standardize };
    Kind kind;
    int order = 0;               // difference only
    Eigen::VectorXd mean, scale; // standardize only
};

// Ordered record of transforms applied after alignment; replay() reproduces
// the processed matrix from the aligned levels.
struct TransformLog {
    std::vector<TransformStep> steps;

    Eigen::MatrixXd replay(const Eigen::MatrixXd& levels) const {
        Eigen::MatrixXd x = levels;
        for (const auto& s : steps) {
            if (s.kind == TransformStep::Kind::difference) {
                for (int k = 0; k < s.order; ++k) {
                    Eigen::MatrixXd d = x.bottomRows(x.rows() - 1) - x.topRows(x.rows() - 1);
                    x = d;
                }
            } else {
                x = (x.rowwise() - s.mean.transpose()).array().rowwise() /
                    s.scale.transpose().array();
            }
        }
        return x;
    }
};

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (char c : line) {
        if (c == '"') {
            quoted = !quoted;
        } else if (c == ',' && !quoted) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    for (auto& s : out) {
        while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.pop_back();
        size_t b = s.find_first_not_of(' ');
        if (b == std::string::npos)
            s.clear();
        else
            s = s.substr(b);
    }
    return out;
}

inline std::optional<double> parse_number(const std::string& s) {
    if (s.empty()) return std::nullopt;
    std::string t;
    t.reserve(s.size());
    for (char c : s)
        if (c != ',') t += c;  // thousands separators
    char* end = nullptr;
    double v = std::strtod(t.c_str(), &end);
    if (end == t.c_str() || *end != '\0') return std::nullopt;
    if (!std::isfinite(v)) return std::nullopt;
    return v;
}

}  // namespace detail

// Reads one variable per (file, column) pair from daily CSVs with a header
// row containing a "Date" column.  variable_map: output variable name ->
// {file index into paths, source column header}.  Malformed dates and
// duplicate dates within a file are hard errors; unparseable numeric cells
// are skipped and reported in RawSeries::skipped_rows.
struct CsvColumnRef {
    int file_index = 0;
    std::string column;
};

inline std::vector<RawSeries> ingest_csv(
    const std::vector<std::string>& paths,
    const std::vector<std::pair<std::string, CsvColumnRef>>& variable_map) {
    if (paths.empty()) throw std::invalid_argument("ingest_csv: no input files");
    if (variable_map.empty()) throw std::invalid_argument("ingest_csv: empty variable map");

    struct ParsedFile {
        std::vector<std::string> header;
        std::vector<Date> dates;
        std::vector<std::vector<std::string>> cells;
    };
    std::vector<ParsedFile> files(paths.size());

    for (size_t f = 0; f < paths.size(); ++f) {
        std::ifstream in(paths[f]);
        if (!in) throw std::runtime_error("ingest_csv: cannot open '" + paths[f] + "'");
        std::string line;
        if (!std::getline(in, line))
            throw std::runtime_error("ingest_csv: '" + paths[f] + "' is empty");
        files[f].header = detail::split_csv_line(line);
        int date_col = -1;
        for (size_t c = 0; c < files[f].header.size(); ++c)
            if (files[f].header[c] == "Date") date_col = static_cast<int>(c);
        if (date_col < 0)
            throw std::runtime_error("ingest_csv: '" + paths[f] + "' has no Date column");
        std::set<Date> seen;
        int row = 0;
        while (std::getline(in, line)) {
            ++row;
            if (line.empty() || line == "\r") continue;
            auto cells = detail::split_csv_line(line);
            if (cells.size() != files[f].header.size())
                throw std::runtime_error("ingest_csv: '" + paths[f] + "' row " +
                                         std::to_string(row) + " has wrong field count");
            auto d = parse_date(cells[date_col]);
            if (!d)
                throw std::runtime_error("ingest_csv: '" + paths[f] + "' row " +
                                         std::to_string(row) + " has malformed date '" +
                                         cells[date_col] + "'");
            if (!seen.insert(*d).second)
                throw std::runtime_error("ingest_csv: '" + paths[f] + "' row " +
                                         std::to_string(row) + " duplicates date " +
                                         d->to_string());
            files[f].dates.push_back(*d);
            files[f].cells.push_back(std::move(cells));
        }
    }

    std::vector<RawSeries> out;
    for (const auto& [var, ref] : variable_map) {
        if (ref.file_index < 0 || ref.file_index >= static_cast<int>(paths.size()))
            throw std::invalid_argument("ingest_csv: variable '" + var +
                                        "' references file index out of range");
        const auto& pf = files[ref.file_index];
        int col = -1;
        for (size_t c = 0; c < pf.header.size(); ++c)
            if (pf.header[c] == ref.column) col = static_cast<int>(c);
        if (col < 0)
            throw std::runtime_error("ingest_csv: column '" + ref.column + "' not found in '" +
                                     paths[ref.file_index] + "'");
        RawSeries s;
        s.name = var;
        // A file's rows may come in any order; sort by date for the series.
        std::vector<size_t> idx(pf.dates.size());
        for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        std::sort(idx.begin(), idx.end(),
                  [&](size_t a, size_t b) { return pf.dates[a] < pf.dates[b]; });
        for (size_t i : idx) {
            auto v = detail::parse_number(pf.cells[i][col]);
            if (!v) {
                s.skipped_rows.push_back(static_cast<int>(i) + 1);
                continue;
            }
            s.dates.push_back(pf.dates[i]);
            s.values.push_back(*v);
        }
        if (s.values.empty())
            throw std::runtime_error("ingest_csv: variable '" + var +
                                     "' has zero parseable rows");
        out.push_back(std::move(s));
    }
    return out;
}

// Inner join on dates: keeps exactly the dates present in every series.
inline TimeSeriesDataset align(const std::vector<RawSeries>& series) {
    if (series.empty()) throw std::invalid_argument("align: no series");
    std::map<Date, int> counts;
    for (const auto& s : series)
        for (const auto& d : s.dates) counts[d]++;
    std::vector<Date> common;
    for (const auto& [d, c] : counts)
        if (c == static_cast<int>(series.size())) common.push_back(d);
    if (common.empty()) throw std::runtime_error("align: no common dates across series");

    Eigen::MatrixXd v(common.size(), series.size());
    std::vector<std::string> names;
    for (size_t j = 0; j < series.size(); ++j) {
        names.push_back(series[j].name);
        std::map<Date, double> lookup;
        for (size_t t = 0; t < series[j].dates.size(); ++t)
            lookup[series[j].dates[t]] = series[j].values[t];
        for (size_t t = 0; t < common.size(); ++t) v(t, j) = lookup.at(common[t]);
    }
    return TimeSeriesDataset(std::move(names), std::move(common), std::move(v));
}

// order-times first difference; drops the first `order` rows and keeps the
// trailing dates so row t of the output is dated like the minuend.
inline TimeSeriesDataset difference(const TimeSeriesDataset& ds, int order, TransformLog* log) {
    if (order < 1) throw std::invalid_argument("difference: order must be >= 1");
    if (ds.rows() <= order)
        throw std::invalid_argument("difference: series too short for order " +
                                    std::to_string(order));
    Eigen::MatrixXd x = ds.values();
    for (int k = 0; k < order; ++k)
        x = (x.bottomRows(x.rows() - 1) - x.topRows(x.rows() - 1)).eval();
    std::vector<Date> d(ds.dates().begin() + order, ds.dates().end());
    if (log) log->steps.push_back({TransformStep::Kind::difference, order, {}, {}});
    return TimeSeriesDataset(ds.variable_names(), std::move(d), std::move(x));
}

// Column z-score with the n-1 denominator.
inline TimeSeriesDataset standardize(const TimeSeriesDataset& ds, TransformLog* log) {
    if (ds.rows() < 2) throw std::invalid_argument("standardize: need at least 2 rows");
    Eigen::VectorXd mean = ds.values().colwise().mean();
    Eigen::MatrixXd centered = ds.values().rowwise() - mean.transpose();
    Eigen::VectorXd sd =
        (centered.array().square().colwise().sum() / double(ds.rows() - 1)).sqrt();
    for (Eigen::Index j = 0; j < sd.size(); ++j)
        if (sd(j) <= 0.0 || !std::isfinite(sd(j)))
            throw std::invalid_argument("standardize: variable '" + ds.variable_names()[j] +
                                        "' has zero variance");
    Eigen::MatrixXd z = centered.array().rowwise() / sd.transpose().array();
    if (log) log->steps.push_back({TransformStep::Kind::standardize, 0, mean, sd});
    return TimeSeriesDataset(ds.variable_names(), ds.dates(), std::move(z));
}

// Lag-scatter summary for every ordered variable pair and lag 0..max_lag:
// Pearson correlation of (x(t-lag), y(t)).
struct ScatterSummary {
    int x_var = 0;
    int y_var = 0;
    int lag = 0;
    double correlation = 0.0;
};

inline std::vector<ScatterSummary> linearity_diagnostics(const TimeSeriesDataset& ds,
                                                         int max_lag) {
    if (max_lag < 0) throw std::invalid_argument("linearity_diagnostics: max_lag must be >= 0");
    if (ds.rows() <= max_lag + 2)
        throw std::invalid_argument("linearity_diagnostics: series too short for max_lag");
    const auto& v = ds.values();
    std::vector<ScatterSummary> out;
    out.reserve(size_t(ds.cols()) * ds.cols() * (max_lag + 1));
    for (int x = 0; x < ds.cols(); ++x)
        for (int y = 0; y < ds.cols(); ++y)
            for (int lag = 0; lag <= max_lag; ++lag) {
                Eigen::Index n = ds.rows() - lag;
                Eigen::VectorXd a = v.col(x).head(n);
                Eigen::VectorXd b = v.col(y).tail(n);
                double ma = a.mean(), mb = b.mean();
                double ca = (a.array() - ma).matrix().squaredNorm();
                double cb = (b.array() - mb).matrix().squaredNorm();
                double cab = ((a.array() - ma) * (b.array() - mb)).sum();
                double r = (ca > 0 && cb > 0) ? cab / std::sqrt(ca * cb) : 0.0;
                out.push_back({x, y, lag, r});
            }
    return out;
}

}  // namespace tscausal
