#include "tokaudit/byte_alphabet.hpp"

#include "tokaudit/errors.hpp"
#include "tokaudit/unicode.hpp"

#include <array>

namespace tokaudit::byte_alphabet {

namespace {

constexpr bool printable(int b) {
    return (b >= 33 && b <= 126) || (b >= 161 && b <= 172) || (b >= 174 && b <= 255);
}

struct Tables {
    std::array<uint32_t, 256> to_cp{};
    // Inverse: cp is either a byte value or 256 + k for the k-th non-printable
    // byte, so the image fits in [0, 324).
    std::array<int, 324> to_byte{};

    constexpr Tables() {
        to_byte.fill(-1);
        uint32_t next = 256;
        for (int b = 0; b < 256; ++b) {
            uint32_t cp = printable(b) ? static_cast<uint32_t>(b) : next++;
            to_cp[static_cast<std::size_t>(b)] = cp;
            to_byte[cp] = b;
        }
    }
};

constexpr Tables tables{};

} // namespace

uint32_t byte_to_codepoint(uint8_t byte) {
    return tables.to_cp[byte];
}

std::optional<uint8_t> codepoint_to_byte(uint32_t cp) {
    if (cp >= tables.to_byte.size()) return std::nullopt;
    int b = tables.to_byte[cp];
    if (b < 0) return std::nullopt;
    return static_cast<uint8_t>(b);
}

std::string remap_bytes(std::string_view raw) {
    std::string out;
    out.reserve(raw.size() * 2);
    for (unsigned char c : raw) unicode::append_utf8(out, byte_to_codepoint(c));
    return out;
}

std::string unmap_bytes(std::string_view remapped) {
    std::string out;
    out.reserve(remapped.size());
    std::size_t pos = 0;
    while (pos < remapped.size()) {
        auto d = unicode::decode_utf8(remapped, pos);
        if (!d.valid)
            throw TokenError("byte alphabet: invalid UTF-8 at offset " + std::to_string(pos));
        auto b = codepoint_to_byte(d.cp);
        if (!b)
            throw TokenError("byte alphabet: code point U+" + std::to_string(d.cp) +
                             " at offset " + std::to_string(pos) + " is not a remapped byte");
        out.push_back(static_cast<char>(*b));
        pos += d.length;
    }
    return out;
}

bool is_remapped_form(std::string_view text) {
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto d = unicode::decode_utf8(text, pos);
        if (!d.valid || !codepoint_to_byte(d.cp)) return false;
        pos += d.length;
    }
    return true;
}

} // namespace tokaudit::byte_alphabet
