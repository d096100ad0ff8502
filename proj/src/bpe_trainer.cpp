#include "tokaudit/bpe_trainer.hpp"

#include "tokaudit/byte_alphabet.hpp"
#include "tokaudit/pretokenize.hpp"
#include "tokaudit/unicode.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <unordered_map>

namespace tokaudit {

namespace {

using SymbolSeq = std::vector<std::string>;

struct Word {
    SymbolSeq symbols;
    long long count = 0;
};

SymbolSeq split_code_points(std::string_view text) {
    SymbolSeq out;
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto d = unicode::decode_utf8(text, pos);
        out.push_back(std::string(text.substr(pos, d.length)));
        pos += d.length;
    }
    return out;
}

struct PairHash {
    std::size_t operator()(const std::pair<std::string, std::string>& p) const noexcept {
        std::size_t a = std::hash<std::string>{}(p.first);
        std::size_t b = std::hash<std::string>{}(p.second);
        return a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2));
    }
};

void apply_merge(SymbolSeq& syms, const std::string& left, const std::string& right) {
    SymbolSeq next;
    next.reserve(syms.size());
    std::size_t i = 0;
    while (i < syms.size()) {
        if (i + 1 < syms.size() && syms[i] == left && syms[i + 1] == right) {
            next.push_back(left + right);
            i += 2;
        } else {
            next.push_back(std::move(syms[i]));
            ++i;
        }
    }
    syms = std::move(next);
}

} // namespace

TrainResult train_bpe(const std::vector<std::string>& corpus, std::size_t target_vocab_size,
                      const TrainConfig& config) {
    const bool byte_level = config.mode == TokenizerMode::ByteLevel;

    // Unique pre-tokens with frequencies; pairs never straddle pre-tokens.
    std::unordered_map<std::string, long long> word_counts;
    for (const auto& text : corpus) {
        auto pretokens = byte_level ? pretokenize_lenient(text, config.pattern)
                                    : pretokenize(text, config.pattern);
        for (const auto& pt : pretokens) {
            std::string raw(text.substr(pt.span.begin, pt.span.size()));
            word_counts[byte_level ? byte_alphabet::remap_bytes(raw) : raw] += 1;
        }
    }
    if (word_counts.empty()) throw std::invalid_argument("train_bpe: empty corpus");

    // Alphabet, ordered by code point.
    std::set<uint32_t> alphabet_cps;
    if (byte_level) {
        for (int b = 0; b < 256; ++b)
            alphabet_cps.insert(byte_alphabet::byte_to_codepoint(static_cast<uint8_t>(b)));
    } else {
        for (const auto& [word, _] : word_counts) {
            std::size_t pos = 0;
            while (pos < word.size()) {
                auto d = unicode::decode_utf8(word, pos);
                alphabet_cps.insert(d.cp);
                pos += d.length;
            }
        }
    }
    if (target_vocab_size < alphabet_cps.size())
        throw std::invalid_argument("train_bpe: target_vocab_size " +
                                    std::to_string(target_vocab_size) +
                                    " is smaller than the alphabet (" +
                                    std::to_string(alphabet_cps.size()) + " symbols)");

    TrainResult result;
    for (uint32_t cp : alphabet_cps) result.vocab.add_next(unicode::encode_utf8(cp));

    std::vector<Word> words;
    words.reserve(word_counts.size());
    for (const auto& [word, count] : word_counts)
        words.push_back({split_code_points(word), count});

    while (result.vocab.size() < target_vocab_size) {
        std::unordered_map<std::pair<std::string, std::string>, long long, PairHash> pair_counts;
        for (const auto& w : words)
            for (std::size_t i = 0; i + 1 < w.symbols.size(); ++i)
                pair_counts[{w.symbols[i], w.symbols[i + 1]}] += w.count;

        const std::pair<std::string, std::string>* best = nullptr;
        long long best_count = 0;
        for (const auto& [pair, count] : pair_counts) {
            if (count > best_count || (count == best_count && best && pair < *best)) {
                best = &pair;
                best_count = count;
            }
        }
        if (!best || best_count < 2) break;

        result.merges.add(best->first, best->second);
        result.vocab.add_next(best->first + best->second);
        auto [left, right] = *best;
        for (auto& w : words) apply_merge(w.symbols, left, right);
    }
    return result;
}

} // namespace tokaudit
