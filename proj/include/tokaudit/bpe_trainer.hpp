#pragma once

#include "tokaudit/bpe_tokenizer.hpp"
#include "tokaudit/merges.hpp"
#include "tokaudit/vocab.hpp"

#include <string>
#include <vector>

namespace tokaudit {

struct TrainConfig {
    TokenizerMode mode = TokenizerMode::ByteLevel;
    PretokenPattern pattern = PretokenPattern::Gpt2;
};

struct TrainResult {
    Vocab vocab;
    MergeTable merges;
};

// Learns merges greedily: each round merges the most frequent adjacent symbol
// pair (counted within pre-tokens, never across them), breaking ties toward
// the lexicographically smallest (left, right). Stops when the vocabulary
// reaches target_vocab_size or no pair occurs at least twice.
//
// Byte-level seeds all 256 byte symbols so the result can encode anything;
// char-level seeds exactly the observed code points. Ids are dense [0, size),
// alphabet first (ordered by code point), then merges in creation order.
//
// Throws std::invalid_argument on an empty corpus or a target smaller than
// the alphabet.
TrainResult train_bpe(const std::vector<std::string>& corpus, std::size_t target_vocab_size,
                      const TrainConfig& config = {});

} // namespace tokaudit
