#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

namespace tokaudit::unicode {

// Category tests backed by range tables generated from the Unicode character
// database (see src/unicode_tables.inc). is_whitespace additionally treats
// the ASCII control separators \t \n \v \f \r as whitespace, matching the
// \s semantics of the reference pre-tokenizer pattern.
bool is_letter(uint32_t cp);
bool is_number(uint32_t cp);
bool is_whitespace(uint32_t cp);

struct DecodedChar {
    uint32_t cp = 0;       // code point, or the raw byte value when !valid
    std::size_t length = 1; // bytes consumed
    bool valid = false;
};

// Decodes one UTF-8 sequence starting at `pos`. Rejects overlong forms,
// surrogates and values above U+10FFFF; on invalid input returns the first
// byte with length 1 and valid=false.
DecodedChar decode_utf8(std::string_view text, std::size_t pos);

void append_utf8(std::string& out, uint32_t cp);
std::string encode_utf8(uint32_t cp);

// Byte offset of the first invalid UTF-8 sequence, or npos if well formed.
std::size_t find_invalid_utf8(std::string_view text);

} // namespace tokaudit::unicode
