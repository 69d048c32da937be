#pragma once

// Small string helpers shared by the readers.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace pathmatch {

/// Splits on every occurrence of `sep`; empty fields are kept.
std::vector<std::string> split(std::string_view s, char sep);
std::string join(const std::vector<std::string>& parts, std::string_view sep);
std::string_view trim(std::string_view s);
bool starts_with_ci(std::string_view s, std::string_view prefix);
bool equals_ci(std::string_view a, std::string_view b);

double parse_double(std::string_view s, std::string_view what);
std::int64_t parse_int(std::string_view s, std::string_view what);
std::uint64_t parse_uint(std::string_view s, std::string_view what);
std::vector<double> parse_double_list(std::string_view s, std::string_view what);

/// Shortest round-trippable decimal form.
std::string format_double(double x);

/// FNV-1a, 64 bit. Used for provenance hashes only.
std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);

}  // namespace pathmatch
