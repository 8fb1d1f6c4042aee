#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dlr::text {

/// Shortest decimal form that parses back to exactly `x`.
std::string format_double(double x);

/// Parses the whole of `s` as a decimal double; nullopt on any leftover characters.
std::optional<double> parse_double(std::string_view s);

std::string_view trim(std::string_view s);

std::vector<std::string_view> split(std::string_view s, char sep);

}  // namespace dlr::text
