// Copyright 2026 The DIP Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DIP_CSV_HPP_
#define DIP_CSV_HPP_

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "dip/error.hpp"
#include "dip/multivariate.hpp"
#include "dip/table.hpp"
#include "dip/univariate.hpp"

namespace dip {

/// Header plus string cells, as read.
struct RawCsv {
  std::vector<std::string> headers;
  std::vector<std::vector<std::string>> rows;
};

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

/// Splits one line on commas; double-quoted fields may contain commas and
/// "" escapes.
inline std::vector<std::string> split_csv_line(std::string_view line, std::size_t row) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (quoted) throw DataError("row " + std::to_string(row) + ": unterminated quote");
  out.push_back(trim(cur));
  return out;
}

inline bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  const char* begin = s.data();
  if (*begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

inline std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

inline std::string quote_if_needed(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

}  // namespace detail

/// Comma-separated, first row headers, decimal point.
inline RawCsv parse_csv(std::istream& in) {
  RawCsv csv;
  std::string line;
  std::size_t row = 0;
  bool header = true;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (header && row == 1 && line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) {
      line.erase(0, 3);
    }
    if (detail::trim(line).empty()) continue;
    auto fields = detail::split_csv_line(line, row);
    if (header) {
      csv.headers = std::move(fields);
      std::set<std::string> seen;
      for (std::size_t c = 0; c < csv.headers.size(); ++c) {
        if (csv.headers[c].empty() || !seen.insert(csv.headers[c]).second) {
          throw DataError("row 1, column " + std::to_string(c + 1) +
                          ": empty or duplicate header");
        }
      }
      header = false;
      continue;
    }
    if (fields.size() != csv.headers.size()) {
      throw DataError("row " + std::to_string(row) + ": expected " +
                      std::to_string(csv.headers.size()) + " fields, found " +
                      std::to_string(fields.size()));
    }
    csv.rows.push_back(std::move(fields));
  }
  if (header) throw DataError("empty CSV input");
  return csv;
}

inline RawCsv read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  return parse_csv(in);
}

/// One named column kind.
struct ColumnSchema {
  std::string name;
  ColumnKind kind;
};

namespace detail {

inline std::vector<std::string> split_top_level(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  for (char c : s) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if ((c == sep || (sep == ',' && c == '\n')) && depth == 0) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  out.erase(std::remove(out.begin(), out.end(), std::string()), out.end());
  return out;
}

inline std::vector<double> parse_number_list(const std::vector<std::string>& items,
                                             const std::string& column) {
  std::vector<double> out;
  for (const auto& s : items) {
    double v;
    if (!parse_double(s, v)) {
      throw DataError("schema for '" + column + "': '" + s + "' is not a number");
    }
    out.push_back(v);
  }
  std::sort(out.begin(), out.end());
  if (std::adjacent_find(out.begin(), out.end()) != out.end()) {
    throw DataError("schema for '" + column + "': repeated value");
  }
  return out;
}

}  // namespace detail

/// Parses "name:kind,..." with kinds continuous, discrete(auto),
/// discrete(v1|v2|...), categorical(l1|l2|...) and mixed(j1|j2|...).
/// A leading '@' reads the schema from that file.
inline std::vector<ColumnSchema> parse_schema(const std::string& text) {
  std::string body = text;
  if (!body.empty() && body.front() == '@') {
    std::ifstream in(body.substr(1));
    if (!in) throw DataError("cannot open schema file '" + body.substr(1) + "'");
    body.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  }
  std::vector<ColumnSchema> out;
  for (const auto& entry : detail::split_top_level(body, ',')) {
    const auto colon = entry.rfind(':', entry.find('('));
    if (colon == std::string::npos) {
      throw DataError("schema entry '" + entry + "' lacks ':kind'");
    }
    ColumnSchema s;
    s.name = detail::trim(entry.substr(0, colon));
    const std::string spec = detail::trim(entry.substr(colon + 1));
    const auto open = spec.find('(');
    const std::string kind = detail::trim(spec.substr(0, open));
    std::vector<std::string> args;
    if (open != std::string::npos) {
      if (spec.back() != ')') throw DataError("schema entry '" + entry + "': missing ')'");
      args = detail::split_top_level(spec.substr(open + 1, spec.size() - open - 2), '|');
    }
    if (kind == "continuous") {
      s.kind = ColumnKind::continuous();
    } else if (kind == "discrete") {
      if (args.empty() || (args.size() == 1 && args[0] == "auto")) {
        s.kind = ColumnKind::discrete();
      } else {
        s.kind = ColumnKind::discrete(detail::parse_number_list(args, s.name));
      }
    } else if (kind == "categorical") {
      if (args.size() < 2) {
        throw DataError("schema for '" + s.name + "': categorical needs >= 2 levels");
      }
      s.kind = ColumnKind::categorical(args);
    } else if (kind == "mixed") {
      if (args.empty()) throw DataError("schema for '" + s.name + "': mixed needs jumps");
      s.kind = ColumnKind::mixed(detail::parse_number_list(args, s.name));
    } else {
      throw DataError("schema for '" + s.name + "': unknown kind '" + kind + "'");
    }
    out.push_back(std::move(s));
  }
  if (out.empty()) throw DataError("empty schema");
  return out;
}

inline std::string format_schema(const std::vector<ColumnSchema>& schema) {
  std::string out;
  for (const auto& s : schema) {
    if (!out.empty()) out += ",";
    out += s.name + ":";
    const auto join = [](const auto& items, auto&& fmt) {
      std::string j;
      for (const auto& x : items) j += (j.empty() ? "" : "|") + fmt(x);
      return j;
    };
    const auto num = [](double v) { return detail::format_double(v); };
    const auto str = [](const std::string& v) { return v; };
    switch (s.kind.type) {
      case ColumnKind::Type::kContinuous:
        out += "continuous";
        break;
      case ColumnKind::Type::kDiscrete:
        out += "discrete(" +
               (s.kind.support.empty() ? std::string("auto") : join(s.kind.support, num)) +
               ")";
        break;
      case ColumnKind::Type::kCategorical:
        out += "categorical(" + join(s.kind.levels, str) + ")";
        break;
      case ColumnKind::Type::kMixed:
        out += "mixed(" + join(s.kind.jumps, num) + ")";
        break;
    }
  }
  return out;
}

/// Builds a typed table; every CSV column must appear in the schema.
inline DataTable to_table(const RawCsv& csv, const std::vector<ColumnSchema>& schema) {
  std::vector<Column> cols;
  for (std::size_t c = 0; c < csv.headers.size(); ++c) {
    const auto it = std::find_if(schema.begin(), schema.end(), [&](const ColumnSchema& s) {
      return s.name == csv.headers[c];
    });
    if (it == schema.end()) {
      throw DataError("column '" + csv.headers[c] + "' is not in the schema");
    }
    Column col{it->name, it->kind, {}};
    col.values.reserve(csv.rows.size());
    for (std::size_t r = 0; r < csv.rows.size(); ++r) {
      const std::string& cell = csv.rows[r][c];
      const std::string where =
          "row " + std::to_string(r + 2) + ", column " + std::to_string(c + 1) + " ('" +
          col.name + "')";
      if (col.kind.type == ColumnKind::Type::kCategorical) {
        const auto& lv = col.kind.levels;
        const auto l = std::find(lv.begin(), lv.end(), cell);
        if (l == lv.end()) throw DataError(where + ": unknown level '" + cell + "'");
        col.values.push_back(static_cast<double>(l - lv.begin()));
      } else {
        double v;
        if (!detail::parse_double(cell, v)) {
          throw DataError(where + ": '" + cell + "' is not a finite number");
        }
        if (col.kind.type == ColumnKind::Type::kDiscrete && !col.kind.support.empty() &&
            !std::binary_search(col.kind.support.begin(), col.kind.support.end(), v)) {
          throw DataError(where + ": " + cell + " is outside the declared support");
        }
        col.values.push_back(v);
      }
    }
    cols.push_back(std::move(col));
  }
  for (const auto& s : schema) {
    if (std::find(csv.headers.begin(), csv.headers.end(), s.name) == csv.headers.end()) {
      throw DataError("schema column '" + s.name + "' is not in the CSV");
    }
  }
  return DataTable(std::move(cols));
}

inline void write_csv(std::ostream& out, const DataTable& table) {
  for (std::size_t c = 0; c < table.cols(); ++c) {
    out << (c ? "," : "") << detail::quote_if_needed(table.column(c).name);
  }
  out << "\n";
  for (std::size_t r = 0; r < table.rows(); ++r) {
    for (std::size_t c = 0; c < table.cols(); ++c) {
      const Column& col = table.column(c);
      if (c) out << ",";
      if (col.kind.type == ColumnKind::Type::kCategorical) {
        out << detail::quote_if_needed(col.kind.levels.at(static_cast<std::size_t>(col.values[r])));
      } else {
        out << detail::format_double(col.values[r]);
      }
    }
    out << "\n";
  }
}

/// Kind guesses: non-numeric -> categorical (levels in order of first
/// appearance), integer-valued with at most 20 distinct values -> discrete,
/// otherwise continuous.
inline std::vector<ColumnSchema> suggest_schema(const RawCsv& csv) {
  std::vector<ColumnSchema> out;
  for (std::size_t c = 0; c < csv.headers.size(); ++c) {
    bool numeric = true;
    bool integral = true;
    std::set<double> distinct;
    std::vector<std::string> levels;
    for (const auto& row : csv.rows) {
      double v;
      if (numeric && detail::parse_double(row[c], v)) {
        integral = integral && v == std::floor(v);
        if (distinct.size() <= 20) distinct.insert(v);
      } else {
        numeric = false;
      }
      if (std::find(levels.begin(), levels.end(), row[c]) == levels.end() &&
          levels.size() <= 1000) {
        levels.push_back(row[c]);
      }
    }
    ColumnSchema s{csv.headers[c], {}};
    if (!numeric) {
      s.kind = ColumnKind::categorical(levels);
    } else if (integral && distinct.size() <= 20) {
      s.kind = ColumnKind::discrete();
    } else {
      s.kind = ColumnKind::continuous();
    }
    out.push_back(std::move(s));
  }
  return out;
}

/// key=value lines. Hold-out row indices are never written.
inline std::string format_metadata(const RunMetadata& m) {
  std::ostringstream os;
  os << "mechanism=dip\n";
  os << "epsilon=" << detail::format_double(m.epsilon) << "\n";
  os << "coordinates=" << m.coordinates << "\n";
  os << "epsilon_per_coordinate=" << detail::format_double(m.epsilon_per_coordinate) << "\n";
  os << "laplace_scale=" << detail::format_double(m.laplace_scale) << "\n";
  os << "released_rows=" << m.released_rows << "\n";
  os << "holdout_rows=" << m.holdout_rows << "\n";
  os << "holdout_ratio=" << detail::format_double(m.holdout_ratio) << "\n";
  os << "seed=" << m.seed << "\n";
  os << "order=";
  for (std::size_t i = 0; i < m.order.size(); ++i) os << (i ? "," : "") << m.order[i];
  os << "\n";
  os << "forward_fallbacks=" << m.forward_fallbacks << "\n";
  os << "inverse_fallbacks=" << m.inverse_fallbacks << "\n";
  os << "laplace_draws=" << m.laplace_draws << "\n";
  return os.str();
}

}  // namespace dip

#endif  // DIP_CSV_HPP_
