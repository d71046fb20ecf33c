#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace phasereg {

// Tabular sample with missing values. Cells are stored as doubles with NaN
// marking a missing entry; every column has the same length. An hour index
// (integers 1..24) can be bound from one of the columns to drive the
// time-of-day de-trending.
struct Dataset {
  std::vector<std::string> names;
  std::vector<std::vector<double>> columns;
  std::optional<std::vector<int>> hour_index;

  std::size_t n_rows() const { return columns.empty() ? 0 : columns.front().size(); }
  bool has_column(const std::string& name) const;

  // Throws ConfigError naming the column when absent.
  const std::vector<double>& column(const std::string& name) const;
  std::vector<double>& column(const std::string& name);

  std::size_t missing_count(const std::string& name) const;
};

inline bool is_missing(double x) { return !std::isfinite(x); }

struct CsvOptions {
  char delimiter = ',';
  double sentinel = -200.0;    // cells equal to this value load as missing
  bool decimal_comma = false;  // accept 2,5 for 2.5 (some exported files)
};

// Parses a headered CSV. Empty cells, cells equal to the sentinel, and
// non-finite cells load as missing. Throws ParseError carrying the 1-based
// row and column of the first offending cell; an empty file or a file with
// only a header is a ParseError too.
Dataset load_csv(const std::string& path, const CsvOptions& options = {});

// Writes all columns (17 significant digits, so reloading reproduces every
// finite cell exactly); missing cells are written as the sentinel.
void write_csv(const Dataset& ds, const std::string& path, double sentinel = -200.0);

// Interprets a column as the hour-of-day class and stores it as the hour
// index. Entries must be integers in [1, 24] with none missing (call after
// complete_cases when the source column has gaps).
void bind_hour_index(Dataset& ds, const std::string& column);

// Keeps the rows where every role column is present, preserving order and
// filtering the hour index alongside. Throws DataError when nothing remains.
Dataset complete_cases(const Dataset& ds, const std::vector<std::string>& roles);

// Subtracts the hour-class mean (over non-missing entries of that class) from
// each entry of the column; missing entries stay missing. Requires a bound
// hour index; throws DataError naming the class if some class has no
// non-missing entry.
std::vector<double> detrend_hourly(const Dataset& ds, const std::string& column);

}  // namespace phasereg
