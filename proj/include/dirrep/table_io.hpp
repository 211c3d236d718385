#pragma once

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "dirrep/extended_real.hpp"
#include "dirrep/normal.hpp"

namespace dirrep {

// Unreadable or malformed input data; distinct from usage errors so the CLI
// can map the two onto different exit codes.
class io_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Feature {
  std::string id;
  std::vector<double> z;
};

// One z-score row per feature; every row shares the same study count n.
struct FeatureTable {
  int n = 0;
  std::vector<Feature> features;
};

// Reals are printed with 8 significant digits everywhere (CSV and JSON
// alike), matching the precision of the reference curves.
inline std::string format_real(double v) {
  if (v == 0.0) return "0";  // normalize -0
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.8g", v);
  return buf;
}

inline std::string csv_quote(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

inline std::string json_quote(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(ch) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", ch);
          out += buf;
        } else {
          out += ch;
        }
    }
  }
  out += '"';
  return out;
}

namespace detail {

// RFC-4180-style field split of one record. Embedded newlines in quoted
// fields are not supported (rows are line-oriented); an unbalanced quote is
// reported as malformed.
inline std::vector<std::string> split_csv_record(const std::string& line, std::size_t line_no) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += ch;
      }
    } else if (ch == '"' && cur.empty()) {
      quoted = true;
    } else if (ch == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (quoted)
    throw io_error("line " + std::to_string(line_no) + ": unterminated quoted field");
  fields.push_back(cur);
  return fields;
}

inline double parse_double_field(const std::string& field, std::size_t line_no) {
  const char* begin = field.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  while (end && *end != '\0' && std::isspace(static_cast<unsigned char>(*end))) ++end;
  if (end == begin || (end && *end != '\0'))
    throw io_error("line " + std::to_string(line_no) + ": '" + field + "' is not a number");
  return v;
}

inline std::string strip_cr(std::string line) {
  while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
  return line;
}

}  // namespace detail

// Reads the `feature_id,z1,...,zn` table. With values_are_pvalues the data
// columns hold right-sided p-values in (0,1) and are mapped back to z-scores
// through the normal quantile.
inline FeatureTable read_feature_table(std::istream& in, bool values_are_pvalues = false) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw io_error("line 1: missing header");
  ++line_no;
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
  const auto header = detail::split_csv_record(detail::strip_cr(line), line_no);
  if (header.empty() || header[0] != "feature_id")
    throw io_error("line 1: header must start with 'feature_id'");
  if (header.size() < 2) throw io_error("line 1: header needs at least one value column");

  FeatureTable table;
  table.n = static_cast<int>(header.size()) - 1;
  std::set<std::string> seen;
  while (std::getline(in, line)) {
    ++line_no;
    line = detail::strip_cr(line);
    if (line.empty()) continue;
    const auto fields = detail::split_csv_record(line, line_no);
    if (fields.size() != header.size())
      throw io_error("line " + std::to_string(line_no) + ": expected " +
                     std::to_string(header.size()) + " fields, got " +
                     std::to_string(fields.size()));
    Feature f;
    f.id = fields[0];
    if (!seen.insert(f.id).second)
      throw io_error("line " + std::to_string(line_no) + ": duplicate feature_id '" + f.id + "'");
    f.z.reserve(table.n);
    for (std::size_t i = 1; i < fields.size(); ++i) {
      double v = detail::parse_double_field(fields[i], line_no);
      if (values_are_pvalues) {
        if (!(v > 0.0 && v < 1.0))
          throw io_error("line " + std::to_string(line_no) +
                         ": p-values must lie strictly in (0,1)");
        v = -norm_quantile(v);  // z with 1 - Phi(z) = p
      } else if (!std::isfinite(v)) {
        throw io_error("line " + std::to_string(line_no) + ": z-scores must be finite");
      }
      f.z.push_back(v);
    }
    table.features.push_back(std::move(f));
  }
  return table;
}

// Parses a theta specification: comma-separated values, each `v` or `v*k`
// (v repeated k times); `inf`, `+inf` and `-inf` denote the limits.
// Example: "inf*9,-inf*9,0*2".
inline std::vector<ExtendedReal> parse_theta_spec(const std::string& spec) {
  std::vector<ExtendedReal> theta;
  std::size_t pos = 0;
  auto fail = [&](const std::string& token) {
    throw std::invalid_argument("theta spec: bad token '" + token + "'");
  };
  while (pos <= spec.size()) {
    const std::size_t comma = spec.find(',', pos);
    std::string token = spec.substr(pos, comma == std::string::npos ? comma : comma - pos);
    pos = comma == std::string::npos ? spec.size() + 1 : comma + 1;
    const std::size_t first = token.find_first_not_of(" \t");
    if (first == std::string::npos) fail(token);
    const std::size_t last = token.find_last_not_of(" \t");
    token = token.substr(first, last - first + 1);

    std::string value_str = token;
    long long count = 1;
    if (const std::size_t star = token.find('*'); star != std::string::npos) {
      value_str = token.substr(0, star);
      const std::string count_str = token.substr(star + 1);
      char* end = nullptr;
      count = std::strtoll(count_str.c_str(), &end, 10);
      if (count_str.empty() || (end && *end != '\0') || count < 1) fail(token);
    }

    ExtendedReal value;
    if (value_str == "inf" || value_str == "+inf") {
      value = ExtendedReal::pos_inf();
    } else if (value_str == "-inf") {
      value = ExtendedReal::neg_inf();
    } else {
      char* end = nullptr;
      const double v = std::strtod(value_str.c_str(), &end);
      if (value_str.empty() || (end && *end != '\0') || !std::isfinite(v)) fail(token);
      value = ExtendedReal(v);
    }
    for (long long i = 0; i < count; ++i) theta.push_back(value);
  }
  if (theta.empty()) throw std::invalid_argument("theta spec: empty");
  return theta;
}

}  // namespace dirrep
