// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace qrsense::csv {

/// Render with `significant` significant digits (shortest form within that),
/// '.' decimal separator regardless of locale. Infinities print as inf/-inf.
std::string format(double value, int significant = 17);

/// Locale-independent parse of a full field. Accepts inf/-inf. Throws IoError.
double parse_double(std::string_view field);
long long parse_integer(std::string_view field);

/// Split one CSV line on commas (no quoting; all fields here are numeric or identifiers).
std::vector<std::string_view> split(std::string_view line);

}  // namespace qrsense::csv
