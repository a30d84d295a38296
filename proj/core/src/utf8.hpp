#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace lexlda::utf8 {

inline constexpr char32_t kInvalid = 0xFFFFFFFF;

// Decodes one code point at text[pos], advancing pos. Malformed sequences
// yield kInvalid and advance by one byte.
char32_t decode(std::string_view text, std::size_t& pos);
void append(std::string& out, char32_t cp);

// Letters of the Latin, Greek and Cyrillic scripts plus combining marks.
bool is_letter(char32_t cp);
bool is_digit(char32_t cp);
// Simple case mapping for the scripts accepted by is_letter.
char32_t to_lower(char32_t cp);

std::size_t length(std::string_view text);

}  // namespace lexlda::utf8
