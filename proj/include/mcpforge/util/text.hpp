#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mcpforge::util {

std::string to_lower(std::string_view s);

// Splits into lowercase alphanumeric tokens; everything else is a separator.
std::vector<std::string> tokenize(std::string_view s);

// tokenize() minus a small English stopword list (articles, prepositions, ...).
std::vector<std::string> content_tokens(std::string_view s);

bool contains_ci(std::string_view haystack, std::string_view needle);

// Classic Levenshtein distance (insert/delete/substitute, unit costs).
std::size_t edit_distance(std::string_view a, std::string_view b);

// Number of tokens shared between two token vectors (set semantics).
std::size_t token_overlap(const std::vector<std::string>& a,
                          const std::vector<std::string>& b);

// FNV-1a 64-bit, rendered as 16 hex chars. Used for payload digests in logs.
std::string fnv1a_hex(std::string_view data);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

bool starts_with(std::string_view s, std::string_view prefix);

// RFC 4648 base64, no line wrapping.
std::string base64_encode(std::string_view bytes);
// Returns empty optional on malformed input.
std::optional<std::string> base64_decode(std::string_view text);

}  // namespace mcpforge::util
