#include "tokaudit/unicode.hpp"

#include <algorithm>

namespace tokaudit::unicode {

namespace {

#include "unicode_tables.inc"

bool in_ranges(const uint32_t (*ranges)[2], std::size_t count, uint32_t cp) {
    auto end = ranges + count;
    // First range whose upper bound is >= cp.
    auto it = std::lower_bound(ranges, end, cp,
                               [](const uint32_t (&r)[2], uint32_t v) { return r[1] < v; });
    return it != end && (*it)[0] <= cp;
}

} // namespace

bool is_letter(uint32_t cp) {
    return in_ranges(kLetterRanges, kLetterRanges_count, cp);
}

bool is_number(uint32_t cp) {
    return in_ranges(kNumberRanges, kNumberRanges_count, cp);
}

bool is_whitespace(uint32_t cp) {
    if (cp == ' ' || (cp >= '\t' && cp <= '\r')) return true;
    return in_ranges(kWhitespaceRanges, kWhitespaceRanges_count, cp);
}

DecodedChar decode_utf8(std::string_view text, std::size_t pos) {
    const auto* s = reinterpret_cast<const unsigned char*>(text.data());
    const std::size_t n = text.size();
    DecodedChar bad{s[pos], 1, false};
    uint8_t b0 = s[pos];
    if (b0 < 0x80) return {b0, 1, true};
    if (b0 < 0xC2) return bad; // continuation byte or overlong C0/C1 lead

    std::size_t len;
    uint32_t cp, min;
    if (b0 < 0xE0) { len = 2; cp = b0 & 0x1F; min = 0x80; }
    else if (b0 < 0xF0) { len = 3; cp = b0 & 0x0F; min = 0x800; }
    else if (b0 < 0xF5) { len = 4; cp = b0 & 0x07; min = 0x10000; }
    else return bad;

    if (pos + len > n) return bad;
    for (std::size_t i = 1; i < len; ++i) {
        uint8_t b = s[pos + i];
        if ((b & 0xC0) != 0x80) return bad;
        cp = (cp << 6) | (b & 0x3F);
    }
    if (cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return bad;
    return {cp, len, true};
}

void append_utf8(std::string& out, uint32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

std::string encode_utf8(uint32_t cp) {
    std::string out;
    append_utf8(out, cp);
    return out;
}

std::size_t find_invalid_utf8(std::string_view text) {
    std::size_t pos = 0;
    while (pos < text.size()) {
        DecodedChar d = decode_utf8(text, pos);
        if (!d.valid) return pos;
        pos += d.length;
    }
    return std::string_view::npos;
}

} // namespace tokaudit::unicode
