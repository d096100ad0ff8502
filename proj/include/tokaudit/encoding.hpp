#pragma once

#include <cstddef>
#include <vector>

namespace tokaudit {

using TokenId = int;

// Half-open byte range [begin, end) into the original input text.
struct ByteSpan {
    std::size_t begin = 0;
    std::size_t end = 0;

    std::size_t size() const { return end - begin; }
    bool operator==(const ByteSpan&) const = default;
};

struct TokenPiece {
    TokenId id = 0;
    ByteSpan span;

    bool operator==(const TokenPiece&) const = default;
};

// Result of encoding a text: token pieces whose spans tile [0, text_size)
// left to right with no gaps or overlaps.
struct Encoding {
    std::vector<TokenPiece> pieces;
    std::size_t text_size = 0;

    std::vector<TokenId> ids() const {
        std::vector<TokenId> out;
        out.reserve(pieces.size());
        for (const auto& p : pieces) out.push_back(p.id);
        return out;
    }

    bool operator==(const Encoding&) const = default;
};

} // namespace tokaudit
