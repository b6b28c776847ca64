// File formats: JSON state files, WitnessReport JSON, and numeric CSV tables.
//
// State file:   {"dims": [d_A, d_B], "matrix": [[[re, im], ...], ...]}  (row-major)
// CSV tables:   header line, then one row per record; floats use 12
//               significant digits ("%.12g"), so parse -> print is stable.

#pragma once

#include "entrosteer/witness.hpp"

#include "json.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace entrosteer::io {

using json = nlohmann::json;

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline json state_to_json(const DensityMatrix& rho) {
  json rows = json::array();
  const auto& m = rho.matrix();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return {{"dims", {rho.dims().a, rho.dims().b}}, {"matrix", std::move(rows)}};
}

inline DensityMatrix state_from_json(const json& j) {
  try {
    const auto& dims = j.at("dims");
    if (!dims.is_array() || dims.size() != 2) throw FormatError("state file: dims must be [d_A, d_B]");
    const Dims d{dims[0].get<int>(), dims[1].get<int>()};
    const auto& rows = j.at("matrix");
    const int n = d.total();
    if (d.a < 1 || d.b < 1 || !rows.is_array() || static_cast<int>(rows.size()) != n)
      throw FormatError("state file: matrix row count does not match dims");
    ComplexMatrix m(n, n);
    for (int i = 0; i < n; ++i) {
      if (!rows[i].is_array() || static_cast<int>(rows[i].size()) != n)
        throw FormatError("state file: matrix row length does not match dims");
      for (int k = 0; k < n; ++k) {
        const auto& z = rows[i][k];
        if (!z.is_array() || z.size() != 2) throw FormatError("state file: entries must be [re, im] pairs");
        m(i, k) = Complex(z[0].get<double>(), z[1].get<double>());
      }
    }
    return DensityMatrix(d, m);
  } catch (const json::exception& e) {
    throw FormatError(std::string("state file: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("state file: ") + e.what());
  }
}

inline DensityMatrix read_state_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open state file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw FormatError("state file " + path + ": " + e.what());
  }
  return state_from_json(j);
}

inline void write_state_file(const std::string& path, const DensityMatrix& rho) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path);
  out << state_to_json(rho).dump(2) << '\n';
}

inline json report_to_json(const WitnessReport& r) {
  return {{"name", r.name},
          {"direction", std::string(to_string(r.direction))},
          {"lhs", r.lhs},
          {"bound", r.bound},
          {"violation", r.violation},
          {"units", std::string(to_string(r.units))}};
}

// ---------------------------------------------------------------------------
// CSV

inline std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

inline void write_csv(std::ostream& out, const CsvTable& t) {
  for (std::size_t i = 0; i < t.header.size(); ++i) out << (i ? "," : "") << t.header[i];
  out << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_number(row[i]);
    out << '\n';
  }
}

inline std::string to_csv(const CsvTable& t) {
  std::ostringstream s;
  write_csv(s, t);
  return s.str();
}

namespace detail {
inline std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    cells.push_back(line.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return cells;
}
}  // namespace detail

inline CsvTable parse_csv(std::istream& in) {
  CsvTable t;
  std::string line;
  if (!std::getline(in, line)) throw FormatError("csv: missing header");
  t.header = detail::split_line(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = detail::split_line(line);
    if (cells.size() != t.header.size()) throw FormatError("csv: row width does not match header");
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& c : cells) {
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(c.data(), c.data() + c.size(), v);
      if (ec != std::errc() || ptr != c.data() + c.size()) throw FormatError("csv: bad number '" + c + "'");
      row.push_back(v);
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

inline CsvTable parse_csv(const std::string& text) {
  std::istringstream s(text);
  return parse_csv(s);
}

/// Array of objects keyed by the header.
inline json table_to_json(const CsvTable& t) {
  json out = json::array();
  for (const auto& row : t.rows) {
    json obj = json::object();
    for (std::size_t i = 0; i < t.header.size(); ++i) obj[t.header[i]] = row[i];
    out.push_back(std::move(obj));
  }
  return out;
}

}  // namespace entrosteer::io
