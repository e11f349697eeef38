#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace ragseed {

std::string base64_encode(std::string_view bytes);

/// Strict decode: rejects bad characters, bad padding, and trailing garbage.
/// Returns false on invalid input.
bool base64_decode(std::string_view text, std::string& out);

/// FNV-1a 64-bit. Stable across platforms, unlike std::hash.
std::uint64_t fnv1a64(std::string_view data);

bool is_valid_utf8(std::string_view bytes);

/// Formats a fraction as a percentage with two decimals, rounded half-up
/// ("0.8175" -> "81.75%"). Rounding goes through a 6-decimal intermediate so
/// values that are a hair under a decimal tie (e.g. 0.148050000000000001)
/// still round the way their decimal rendering reads.
std::string format_percent(double fraction);

/// Whitespace tokens: maximal runs of non-whitespace bytes.
std::vector<std::string> whitespace_tokens(std::string_view text);

/// Like whitespace_tokens but returns (start, end) byte offsets per token.
std::vector<std::pair<std::size_t, std::size_t>> token_spans(std::string_view text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

std::string trim(std::string_view s);
bool iequals(std::string_view a, std::string_view b);
std::vector<std::string> split_lines(std::string_view text);

} // namespace ragseed
