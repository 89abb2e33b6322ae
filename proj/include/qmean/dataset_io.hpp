// Reading raw input values from CSV or JSON files.
//
// CSV: one value per line, or comma-separated values on a line. Blank lines
// and lines starting with '#' are ignored.
// JSON: a flat array of numbers.

#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <json.hpp>

namespace qmean {

/// Malformed or unreadable input.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class InputFormat { Csv, Json };

inline InputFormat format_from_name(std::string_view name) {
  if (name == "csv") return InputFormat::Csv;
  if (name == "json") return InputFormat::Json;
  throw InputError("unknown input format '" + std::string(name) + "' (expected csv or json)");
}

inline InputFormat format_from_path(std::string_view path) {
  const auto dot = path.rfind('.');
  if (dot != std::string_view::npos && path.substr(dot) == ".json") return InputFormat::Json;
  return InputFormat::Csv;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace detail

inline std::vector<double> parse_csv(std::string_view text) {
  std::vector<double> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = std::min(text.find('\n', pos), text.size());
    const std::string_view line = text.substr(pos, eol - pos);
    ++line_no;
    const std::string_view body = detail::trim(line);
    if (!body.empty() && body.front() != '#') {
      std::size_t field_start = 0;
      while (field_start <= line.size()) {
        const std::size_t comma = std::min(line.find(',', field_start), line.size());
        std::string_view field = detail::trim(line.substr(field_start, comma - field_start));
        if (!field.empty() && field.front() == '+') field.remove_prefix(1);
        double v = 0.0;
        const auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
        if (field.empty() || ec != std::errc{} || end != field.data() + field.size()) {
          throw InputError("line " + std::to_string(line_no) + ", column " + std::to_string(field_start + 1) +
                           ": not a number: '" + std::string(field) + "'");
        }
        if (!std::isfinite(v)) {
          throw InputError("line " + std::to_string(line_no) + ", column " + std::to_string(field_start + 1) +
                           ": non-finite value");
        }
        out.push_back(v);
        field_start = comma + 1;
      }
    }
    if (eol == text.size()) break;
    pos = eol + 1;
  }
  if (out.empty()) throw InputError("no values found");
  return out;
}

inline std::vector<double> parse_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError("JSON parse error at byte " + std::to_string(e.byte) + ": " + e.what());
  }
  if (!doc.is_array()) throw InputError("JSON input must be a flat array of numbers");
  if (doc.empty()) throw InputError("no values found");
  std::vector<double> out;
  out.reserve(doc.size());
  for (std::size_t i = 0; i < doc.size(); ++i) {
    if (!doc[i].is_number()) throw InputError("JSON element " + std::to_string(i) + " is not a number");
    out.push_back(doc[i].get<double>());
  }
  return out;
}

inline std::vector<double> load_dataset(const std::string& path, InputFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  return format == InputFormat::Json ? parse_json(text) : parse_csv(text);
}

}  // namespace qmean
