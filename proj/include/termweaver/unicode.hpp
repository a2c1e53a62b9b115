#pragma once

#include <string>
#include <string_view>

namespace termweaver::unicode {

// UTF-8 <-> Unicode scalar values. Invalid sequences decode to U+FFFD.
std::u32string decode_utf8(std::string_view s);
std::string encode_utf8(std::u32string_view s);

// Number of Unicode scalars in a UTF-8 string.
std::size_t scalar_length(std::string_view s);

bool is_whitespace(char32_t c);

// Trim Unicode whitespace from both ends.
std::string trim(std::string_view s);
std::u32string trim(std::u32string_view s);

// NFKC normalization (ICU). Identity for already-normalized input.
std::string nfkc(std::string_view s);

}  // namespace termweaver::unicode
