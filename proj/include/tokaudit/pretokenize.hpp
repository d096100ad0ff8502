#pragma once

#include "tokaudit/encoding.hpp"

#include <string_view>
#include <vector>

namespace tokaudit {

enum class PreTokenKind { Word, Number, Punct, Whitespace, Contraction };

struct PreToken {
    ByteSpan span;
    PreTokenKind kind = PreTokenKind::Word;

    bool operator==(const PreToken&) const = default;
};

enum class PretokenPattern {
    // The GPT-2 splitting rule, an ordered alternation:
    //   's|'t|'re|'ve|'m|'ll|'d| ?L+| ?N+| ?[^ws L N]+|ws+(?!non-ws)|ws+
    // where L/N/ws are the Unicode letter/number/whitespace classes. Letters
    // never share a pre-token with digits, an optional single leading space
    // attaches to the run after it, and a whitespace run followed by
    // non-whitespace keeps its last character for the next match.
    Gpt2,
    // Alternating runs of non-whitespace / whitespace.
    Whitespace,
    // One pre-token per code point.
    Char,
};

// Splits text into pre-tokens whose spans tile [0, text.size()). Throws
// ParseError at the first invalid UTF-8 byte.
std::vector<PreToken> pretokenize(std::string_view text,
                                  PretokenPattern pattern = PretokenPattern::Gpt2);

// Same grammar, but an invalid byte is classed as a one-byte Punct character
// instead of an error (used by the byte-level tokenizer, which must accept
// arbitrary byte strings).
std::vector<PreToken> pretokenize_lenient(std::string_view text,
                                          PretokenPattern pattern = PretokenPattern::Gpt2);

} // namespace tokaudit
