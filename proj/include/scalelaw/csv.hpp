// CSV reading and writing of observation sets, plus bundled fixtures.
//
// Schema: UTF-8, comma separated, first line is the header. Columns:
//   n          required, positive integer
//   m          optional, positive integer
//   metric     required, "accuracy" or "error"
//   value      required, fraction in [0, 1] or percentage with trailing %
//   std        optional, nonnegative (same convention as value's unit)
//   replicates optional, positive integer, default 1
// Lines starting with '#' are comments. LF and CRLF are both accepted on
// input; output uses LF. Accuracy rows are converted to error on read;
// output always uses metric=error with bare fractions.
#pragma once

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "scalelaw/core.hpp"

namespace scalelaw {

namespace detail {

inline std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  return out;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string> split_row(std::string_view line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == ',') {
      cells.emplace_back(trim(line.substr(start, i - start)));
      start = i + 1;
    }
  }
  return cells;
}

inline double parse_number(std::string_view cell, int line_no, std::string_view column) {
  bool percent = false;
  if (!cell.empty() && cell.back() == '%') {
    percent = true;
    cell.remove_suffix(1);
    cell = trim(cell);
  }
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc{} || ptr != cell.data() + cell.size()) {
    std::ostringstream msg;
    msg << "parse error at line " << line_no << ": bad number '" << std::string(cell)
        << "' in column " << column;
    throw Error(msg.str());
  }
  return percent ? v / 100.0 : v;
}

inline std::int64_t parse_int(std::string_view cell, int line_no, std::string_view column) {
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc{} || ptr != cell.data() + cell.size()) {
    std::ostringstream msg;
    msg << "parse error at line " << line_no << ": bad integer '" << std::string(cell)
        << "' in column " << column;
    throw Error(msg.str());
  }
  return v;
}

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace detail

/// Parses an observation set from a stream and validates it. Column
/// order is free; unknown column names are rejected.
inline std::vector<ObservationPoint> read_points(std::istream& in) {
  int col_n = -1, col_m = -1, col_metric = -1, col_value = -1, col_std = -1, col_repl = -1;
  int n_cols = 0;
  bool header_seen = false;
  std::vector<ObservationPoint> points;

  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view sv = detail::trim(line);
    if (sv.empty() || sv.front() == '#') continue;

    std::vector<std::string> cells = detail::split_row(sv);
    if (!header_seen) {
      header_seen = true;
      n_cols = static_cast<int>(cells.size());
      for (int i = 0; i < n_cols; ++i) {
        const std::string name = detail::lower(cells[i]);
        if (name == "n") col_n = i;
        else if (name == "m") col_m = i;
        else if (name == "metric") col_metric = i;
        else if (name == "value") col_value = i;
        else if (name == "std") col_std = i;
        else if (name == "replicates") col_repl = i;
        else throw Error("schema error: unknown column '" + cells[i] + "'");
      }
      if (col_n < 0) throw Error("schema error: missing column 'n'");
      if (col_metric < 0) throw Error("schema error: missing column 'metric'");
      if (col_value < 0) throw Error("schema error: missing column 'value'");
      continue;
    }

    if (static_cast<int>(cells.size()) != n_cols) {
      std::ostringstream msg;
      msg << "parse error at line " << line_no << ": expected " << n_cols << " cells, got "
          << cells.size();
      throw Error(msg.str());
    }

    ObservationPoint p;
    p.n = detail::parse_int(cells[col_n], line_no, "n");
    if (col_m >= 0 && !cells[col_m].empty())
      p.m = detail::parse_int(cells[col_m], line_no, "m");

    const std::string metric = detail::lower(cells[col_metric]);
    const double value = detail::parse_number(cells[col_value], line_no, "value");
    if (metric == "accuracy") {
      p.error = error_from_accuracy(value);
    } else if (metric == "error") {
      p.error = value;
    } else {
      std::ostringstream msg;
      msg << "parse error at line " << line_no << ": metric must be 'accuracy' or 'error', got '"
          << cells[col_metric] << "'";
      throw Error(msg.str());
    }
    if (col_std >= 0 && !cells[col_std].empty())
      p.std_dev = detail::parse_number(cells[col_std], line_no, "std");
    if (col_repl >= 0 && !cells[col_repl].empty())
      p.replicates = static_cast<int>(detail::parse_int(cells[col_repl], line_no, "replicates"));
    points.push_back(p);
  }
  return validate_points(points);
}

inline std::vector<ObservationPoint> read_points(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "' for reading");
  try {
    return read_points(in);
  } catch (const Error& e) {
    throw Error(path + ": " + e.what());
  }
}

/// Writes a validated observation set; read_points on the output
/// reproduces the input exactly. Optional columns appear only when some
/// point uses them.
inline void write_points(const std::vector<ObservationPoint>& points, std::ostream& out) {
  const std::vector<ObservationPoint> pts = validate_points(points);
  bool any_m = false, any_std = false, any_repl = false;
  for (const ObservationPoint& p : pts) {
    any_m = any_m || p.m.has_value();
    any_std = any_std || p.std_dev.has_value();
    any_repl = any_repl || p.replicates != 1;
  }

  out << "n";
  if (any_m) out << ",m";
  out << ",metric,value";
  if (any_std) out << ",std";
  if (any_repl) out << ",replicates";
  out << "\n";
  for (const ObservationPoint& p : pts) {
    out << p.n;
    if (any_m) {
      out << ",";
      if (p.m) out << *p.m;
    }
    out << ",error," << detail::format_double(p.error);
    if (any_std) {
      out << ",";
      if (p.std_dev) out << detail::format_double(*p.std_dev);
    }
    if (any_repl) out << "," << p.replicates;
    out << "\n";
  }
  if (!out) throw Error("write failed");
}

inline void write_points(const std::vector<ObservationPoint>& points, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  write_points(points, out);
  if (!out) throw Error("write failed for '" + path + "'");
}

/// Bundled example data. "table1" is a four-point learning curve of a
/// binary classifier: accuracies 62.33%, 64.78%, 65.99%, 68.31% at
/// 20k, 100k, 200k and 1M training images, stored as errors.
inline std::vector<ObservationPoint> builtin_fixture(std::string_view name) {
  if (detail::lower(name) == "table1") {
    return {
        {20000, std::nullopt, error_from_accuracy(0.6233), 0.0084, 5},
        {100000, std::nullopt, error_from_accuracy(0.6478), 0.0054, 5},
        {200000, std::nullopt, error_from_accuracy(0.6599), 0.0009, 5},
        {1000000, std::nullopt, error_from_accuracy(0.6831), std::nullopt, 1},
    };
  }
  throw Error("unknown fixture '" + std::string(name) + "' (available: table1)");
}

}  // namespace scalelaw
