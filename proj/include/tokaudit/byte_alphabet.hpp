#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace tokaudit {

// Byte-level BPE stores vocabulary entries as printable Unicode strings: each
// raw byte maps to a code point under a fixed bijection. Printable bytes
// (33..126, 161..172, 174..255) map to themselves; the remaining 68 bytes map
// to 256, 257, ... in increasing byte order.
namespace byte_alphabet {

// cp for a raw byte (always defined; bijective).
uint32_t byte_to_codepoint(uint8_t byte);

// Inverse; nullopt when cp is not in the image of the map.
std::optional<uint8_t> codepoint_to_byte(uint32_t cp);

// Raw bytes -> UTF-8 string of remapped code points.
std::string remap_bytes(std::string_view raw);

// Inverse of remap_bytes. Throws TokenError when the text contains a code
// point outside the byte alphabet.
std::string unmap_bytes(std::string_view remapped);

// True when every code point of the (valid UTF-8) string is in the alphabet.
bool is_remapped_form(std::string_view text);

} // namespace byte_alphabet

} // namespace tokaudit
