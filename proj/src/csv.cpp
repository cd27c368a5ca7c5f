// SPDX-License-Identifier: Apache-2.0
#include "qrsense/csv.hpp"

#include <charconv>
#include <cmath>
#include <system_error>

#include "qrsense/errors.hpp"

namespace qrsense::csv {

std::string format(double value, int significant) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (std::isnan(value)) return "nan";
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof buffer, value, std::chars_format::general, significant);
  return std::string(buffer, result.ptr);
}

double parse_double(std::string_view field) {
  if (field == "inf" || field == "+inf") return HUGE_VAL;
  if (field == "-inf") return -HUGE_VAL;
  double value = 0.0;
  const auto result = std::from_chars(field.data(), field.data() + field.size(), value);
  if (result.ec != std::errc{} || result.ptr != field.data() + field.size()) {
    throw IoError("malformed number: '" + std::string(field) + "'");
  }
  return value;
}

long long parse_integer(std::string_view field) {
  long long value = 0;
  const auto result = std::from_chars(field.data(), field.data() + field.size(), value);
  if (result.ec != std::errc{} || result.ptr != field.data() + field.size()) {
    throw IoError("malformed integer: '" + std::string(field) + "'");
  }
  return value;
}

std::vector<std::string_view> split(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

}  // namespace qrsense::csv
