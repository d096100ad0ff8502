#pragma once

#include "tokaudit/encoding.hpp"

#include <span>
#include <string>
#include <string_view>

namespace tokaudit {

// A tokenizer maps text to token ids and back. Implementations must be safe
// for concurrent encode/decode calls on a const instance.
class Tokenizer {
public:
    virtual ~Tokenizer() = default;

    // Piece spans tile [0, text.size()) left to right, no gaps or overlaps.
    virtual Encoding encode(std::string_view text) const = 0;

    // Inverse of encode. Throws TokenError naming an unknown id.
    virtual std::string decode(std::span<const TokenId> ids) const = 0;

    // Raw text of a single token (bytes as they would appear in input).
    virtual std::string token_text(TokenId id) const = 0;

    virtual std::size_t vocab_size() const = 0;
    virtual TokenId max_token_id() const = 0;
    virtual std::string name() const = 0;
};

} // namespace tokaudit
