#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace ontorag::text {

// ASCII lowercase; bytes outside ASCII are left untouched.
std::string to_lower(std::string_view s);

std::string_view trim(std::string_view s);

// Trim and collapse every whitespace run into a single space.
std::string collapse_whitespace(std::string_view s);

// Lowercased word tokens split on non-alphanumeric boundaries. Bytes >= 0x80
// count as word characters so UTF-8 words stay intact.
std::vector<std::string> word_tokens(std::string_view s);

// Byte-level Levenshtein distance.
std::size_t edit_distance(std::string_view a, std::string_view b);

// 64-bit FNV-1a over the bytes of s, starting from `seed` mixed into the
// standard offset basis.
std::uint64_t fnv1a64(std::string_view s, std::uint64_t seed = 0);

std::vector<std::string> split(std::string_view s, char sep);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

}  // namespace ontorag::text
