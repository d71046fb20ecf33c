#include "phasereg/dataset.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include "phasereg/errors.hpp"

namespace phasereg {

namespace {

constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

std::vector<std::string> split_line(const std::string& line, char delimiter) {
  std::vector<std::string> fields;
  std::string field;
  for (char ch : line) {
    if (ch == delimiter) {
      fields.push_back(std::move(field));
      field.clear();
    } else if (ch != '\r') {
      field.push_back(ch);
    }
  }
  fields.push_back(std::move(field));
  return fields;
}

std::string trimmed(const std::string& s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

}  // namespace

bool Dataset::has_column(const std::string& name) const {
  return std::find(names.begin(), names.end(), name) != names.end();
}

const std::vector<double>& Dataset::column(const std::string& name) const {
  for (std::size_t j = 0; j < names.size(); ++j) {
    if (names[j] == name) return columns[j];
  }
  throw ConfigError("no column named '" + name + "'");
}

std::vector<double>& Dataset::column(const std::string& name) {
  for (std::size_t j = 0; j < names.size(); ++j) {
    if (names[j] == name) return columns[j];
  }
  throw ConfigError("no column named '" + name + "'");
}

std::size_t Dataset::missing_count(const std::string& name) const {
  const auto& col = column(name);
  return static_cast<std::size_t>(
      std::count_if(col.begin(), col.end(), [](double x) { return is_missing(x); }));
}

Dataset load_csv(const std::string& path, const CsvOptions& options) {
  std::ifstream in(path);
  if (!in) throw DataError("load_csv: cannot open " + path);

  std::string line;
  if (!std::getline(in, line)) throw ParseError("load_csv: " + path + " is empty");

  Dataset ds;
  for (auto& name : split_line(line, options.delimiter)) {
    ds.names.push_back(trimmed(name));
  }
  // Some exports terminate every record with the delimiter; drop the
  // resulting unnamed trailing column.
  const bool trailing = !ds.names.empty() && ds.names.back().empty();
  if (trailing) ds.names.pop_back();
  if (ds.names.empty()) throw ParseError("load_csv: " + path + " has an empty header");
  ds.columns.resize(ds.names.size());

  std::size_t row = 1;  // header is row 1
  while (std::getline(in, line)) {
    ++row;
    if (trimmed(line).empty()) continue;
    auto fields = split_line(line, options.delimiter);
    if (trailing && fields.size() == ds.names.size() + 1 && trimmed(fields.back()).empty()) {
      fields.pop_back();
    }
    if (fields.size() != ds.names.size()) {
      throw ParseError("load_csv: " + path + " row " + std::to_string(row) + " has " +
                       std::to_string(fields.size()) + " fields, header has " +
                       std::to_string(ds.names.size()));
    }
    for (std::size_t j = 0; j < fields.size(); ++j) {
      std::string cell = trimmed(fields[j]);
      if (cell.empty()) {
        ds.columns[j].push_back(kMissing);
        continue;
      }
      if (options.decimal_comma) std::replace(cell.begin(), cell.end(), ',', '.');
      char* end = nullptr;
      const double value = std::strtod(cell.c_str(), &end);
      if (end != cell.c_str() + cell.size()) {
        throw ParseError("load_csv: " + path + " row " + std::to_string(row) +
                         ", column '" + ds.names[j] + "': cannot parse '" + cell + "'");
      }
      ds.columns[j].push_back(value == options.sentinel || !std::isfinite(value)
                                  ? kMissing
                                  : value);
    }
  }
  if (ds.n_rows() == 0) throw ParseError("load_csv: " + path + " has no data rows");
  return ds;
}

void write_csv(const Dataset& ds, const std::string& path, double sentinel) {
  std::ofstream out(path);
  if (!out) throw DataError("write_csv: cannot open " + path);
  for (std::size_t j = 0; j < ds.names.size(); ++j) {
    out << (j ? "," : "") << ds.names[j];
  }
  out << '\n';
  char buf[64];
  for (std::size_t i = 0; i < ds.n_rows(); ++i) {
    for (std::size_t j = 0; j < ds.columns.size(); ++j) {
      const double v = ds.columns[j][i];
      std::snprintf(buf, sizeof buf, "%.17g", is_missing(v) ? sentinel : v);
      out << (j ? "," : "") << buf;
    }
    out << '\n';
  }
}

void bind_hour_index(Dataset& ds, const std::string& column) {
  const auto& col = ds.column(column);
  std::vector<int> hours(col.size());
  for (std::size_t i = 0; i < col.size(); ++i) {
    const double v = col[i];
    if (is_missing(v) || v != std::floor(v) || v < 1.0 || v > 24.0) {
      throw DataError("bind_hour_index: row " + std::to_string(i + 2) + " of '" + column +
                      "' is not an integer in [1, 24]");
    }
    hours[i] = static_cast<int>(v);
  }
  ds.hour_index = std::move(hours);
}

Dataset complete_cases(const Dataset& ds, const std::vector<std::string>& roles) {
  std::vector<const std::vector<double>*> role_cols;
  for (const auto& name : roles) role_cols.push_back(&ds.column(name));

  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < ds.n_rows(); ++i) {
    const bool complete = std::all_of(role_cols.begin(), role_cols.end(),
                                      [&](const auto* c) { return !is_missing((*c)[i]); });
    if (complete) keep.push_back(i);
  }
  if (keep.empty()) throw DataError("complete_cases: no row has all role columns present");

  Dataset out;
  out.names = ds.names;
  out.columns.resize(ds.columns.size());
  for (std::size_t j = 0; j < ds.columns.size(); ++j) {
    out.columns[j].reserve(keep.size());
    for (std::size_t i : keep) out.columns[j].push_back(ds.columns[j][i]);
  }
  if (ds.hour_index) {
    std::vector<int> hours;
    hours.reserve(keep.size());
    for (std::size_t i : keep) hours.push_back((*ds.hour_index)[i]);
    out.hour_index = std::move(hours);
  }
  return out;
}

std::vector<double> detrend_hourly(const Dataset& ds, const std::string& column) {
  if (!ds.hour_index) throw ConfigError("detrend_hourly: no hour index bound");
  const auto& col = ds.column(column);
  const auto& hours = *ds.hour_index;

  std::array<double, 25> sum{};
  std::array<long, 25> count{};
  for (std::size_t i = 0; i < col.size(); ++i) {
    if (is_missing(col[i])) continue;
    sum[hours[i]] += col[i];
    ++count[hours[i]];
  }
  // A class that never occurs imposes nothing; one that occurs but is all
  // missing has no mean to subtract.
  std::array<bool, 25> occurs{};
  for (int h : hours) occurs[h] = true;
  for (int k = 1; k <= 24; ++k) {
    if (occurs[k] && count[k] == 0) {
      throw DataError("detrend_hourly: hour class " + std::to_string(k) +
                      " of '" + column + "' has no non-missing value");
    }
  }

  std::vector<double> out(col.size());
  for (std::size_t i = 0; i < col.size(); ++i) {
    out[i] = is_missing(col[i]) ? col[i] : col[i] - sum[hours[i]] / count[hours[i]];
  }
  return out;
}

}  // namespace phasereg
