#pragma once

#include "tokaudit/merges.hpp"
#include "tokaudit/pretokenize.hpp"
#include "tokaudit/tokenizer.hpp"
#include "tokaudit/vocab.hpp"

namespace tokaudit {

enum class TokenizerMode {
    // Input bytes are remapped to the printable byte alphabet before merging;
    // encoding accepts arbitrary byte strings and cannot fail.
    ByteLevel,
    // Symbols are code points of the input; unknown symbols are encode errors
    // and the input must be valid UTF-8.
    CharLevel,
};

// How decode treats output that is not valid UTF-8 (reachable only in
// byte-level mode, e.g. when decoding a slice of a multi-byte character).
enum class Utf8Policy {
    Error,       // throw TokenError
    Replace,     // substitute U+FFFD for each invalid byte
    Passthrough, // return the raw bytes untouched
};

struct BpeConfig {
    TokenizerMode mode = TokenizerMode::ByteLevel;
    PretokenPattern pattern = PretokenPattern::Gpt2;
    Utf8Policy utf8 = Utf8Policy::Error;
    std::string name = "bpe";
};

class BpeTokenizer final : public Tokenizer {
public:
    // Validates that every merge result is a vocabulary token and, in
    // byte-level mode, that the vocabulary covers the full byte alphabet.
    BpeTokenizer(Vocab vocab, MergeTable merges, BpeConfig config = {});

    Encoding encode(std::string_view text) const override;
    std::string decode(std::span<const TokenId> ids) const override;
    std::string token_text(TokenId id) const override;
    std::size_t vocab_size() const override { return vocab_.size(); }
    TokenId max_token_id() const override { return vocab_.max_id(); }
    std::string name() const override { return config_.name; }

    const Vocab& vocab() const { return vocab_; }
    const MergeTable& merges() const { return merges_; }
    const BpeConfig& config() const { return config_; }

private:
    Vocab vocab_;
    MergeTable merges_;
    BpeConfig config_;
};

} // namespace tokaudit
