#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace kgperf::io {

/// Splits on a single delimiter; no quoting. Empty fields are preserved.
std::vector<std::string_view> split(std::string_view line, char delim);

/// Shortest round-trip formatting via std::to_chars; locale-independent,
/// parse-exact.
std::string format_double(double v);

/// Strict parsers; `where` names the file/line for the error message.
double parse_double(std::string_view s, const std::string& where);
long parse_long(std::string_view s, const std::string& where);
std::uint64_t parse_ulong(std::string_view s, const std::string& where);

/// Throws DataError if the field contains the delimiter, a CR/LF, or is
/// empty when `allow_empty` is false. Flat CSV/TSV formats have no quoting.
void check_field(std::string_view field, char delim, const std::string& where,
                 bool allow_empty = false);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

/// Splits into lines on '\n'; a trailing newline does not produce an empty
/// final line. CR characters are rejected by parsers downstream.
std::vector<std::string_view> split_lines(std::string_view contents);

}  // namespace kgperf::io
