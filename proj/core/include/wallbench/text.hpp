#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace wallbench {

/// Shortest decimal form with `sig` significant digits (locale-independent).
std::string format_double(double v, int sig);

/// Full-precision form: 17 significant digits, round-trips any IEEE double.
std::string format_full(double v);

/// Locale-independent strict parse of a decimal floating-point literal.
/// Throws ValidationError when `s` is not exactly one number.
double parse_double(std::string_view s);

/// Strict parse of a signed integer. Throws ValidationError on junk.
long long parse_int(std::string_view s);

/// Strict parse of an unsigned 64-bit integer.
std::uint64_t parse_u64(std::string_view s);

/// Splits on a delimiter; keeps empty fields.
std::vector<std::string> split(std::string_view s, char delim);

/// Trims ASCII whitespace from both ends.
std::string_view trim(std::string_view s);

/// FNV-1a 64-bit hash.
std::uint64_t fnv1a64(std::string_view s);

} // namespace wallbench
