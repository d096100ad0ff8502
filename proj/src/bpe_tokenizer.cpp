#include "tokaudit/bpe_tokenizer.hpp"

#include "tokaudit/byte_alphabet.hpp"
#include "tokaudit/errors.hpp"
#include "tokaudit/unicode.hpp"

#include <limits>
#include <utility>

namespace tokaudit {

namespace {

struct Symbol {
    std::string text; // vocabulary form (remapped in byte-level mode)
    std::size_t begin = 0;
    std::size_t end = 0; // raw byte span in the input
};

void merge_all(std::vector<Symbol>& symbols, const MergePair& pair) {
    std::vector<Symbol> next;
    next.reserve(symbols.size());
    std::size_t i = 0;
    while (i < symbols.size()) {
        if (i + 1 < symbols.size() && symbols[i].text == pair.left &&
            symbols[i + 1].text == pair.right) {
            next.push_back({symbols[i].text + symbols[i + 1].text, symbols[i].begin,
                            symbols[i + 1].end});
            i += 2;
        } else {
            next.push_back(std::move(symbols[i]));
            ++i;
        }
    }
    symbols = std::move(next);
}

std::string replace_invalid_utf8(std::string_view raw) {
    std::string out;
    out.reserve(raw.size());
    std::size_t pos = 0;
    while (pos < raw.size()) {
        auto d = unicode::decode_utf8(raw, pos);
        if (d.valid) {
            out.append(raw.substr(pos, d.length));
            pos += d.length;
        } else {
            out += "\xEF\xBF\xBD"; // U+FFFD
            pos += 1;
        }
    }
    return out;
}

} // namespace

BpeTokenizer::BpeTokenizer(Vocab vocab, MergeTable merges, BpeConfig config)
    : vocab_(std::move(vocab)), merges_(std::move(merges)), config_(std::move(config)) {
    merges_.validate_against(vocab_);
    if (config_.mode == TokenizerMode::ByteLevel && !vocab_.has_byte_alphabet())
        throw IntegrityError(
            "byte-level tokenizer requires all 256 single-byte symbols in the vocabulary");
}

Encoding BpeTokenizer::encode(std::string_view text) const {
    const bool byte_level = config_.mode == TokenizerMode::ByteLevel;
    Encoding out;
    out.text_size = text.size();

    auto pretokens = byte_level ? pretokenize_lenient(text, config_.pattern)
                                : pretokenize(text, config_.pattern);

    std::vector<Symbol> symbols;
    for (const auto& pt : pretokens) {
        symbols.clear();
        if (byte_level) {
            for (std::size_t p = pt.span.begin; p < pt.span.end; ++p) {
                auto cp = byte_alphabet::byte_to_codepoint(static_cast<uint8_t>(text[p]));
                symbols.push_back({unicode::encode_utf8(cp), p, p + 1});
            }
        } else {
            std::size_t p = pt.span.begin;
            while (p < pt.span.end) {
                auto d = unicode::decode_utf8(text, p); // valid: strict pretokenize passed
                symbols.push_back({std::string(text.substr(p, d.length)), p, p + d.length});
                p += d.length;
            }
        }

        while (symbols.size() >= 2) {
            int best_rank = std::numeric_limits<int>::max();
            for (std::size_t i = 0; i + 1 < symbols.size(); ++i) {
                auto r = merges_.rank_of(symbols[i].text, symbols[i + 1].text);
                if (r && *r < best_rank) best_rank = *r;
            }
            if (best_rank == std::numeric_limits<int>::max()) break;
            merge_all(symbols, merges_.at(best_rank));
        }

        for (auto& sym : symbols) {
            auto id = vocab_.id_of(sym.text);
            if (!id) {
                if (!byte_level)
                    throw TokenError("cannot encode symbol \"" + sym.text + "\" at offset " +
                                     std::to_string(sym.begin) + ": not in vocabulary");
                // Unreachable: the byte alphabet is validated and merge results
                // are vocabulary tokens.
                throw IntegrityError("byte-level symbol \"" + sym.text + "\" missing from vocabulary");
            }
            out.pieces.push_back({*id, {sym.begin, sym.end}});
        }
    }
    return out;
}

std::string BpeTokenizer::decode(std::span<const TokenId> ids) const {
    std::string acc;
    for (TokenId id : ids) acc += vocab_.token_of(id);
    if (config_.mode == TokenizerMode::CharLevel) return acc;

    std::string raw = byte_alphabet::unmap_bytes(acc);
    switch (config_.utf8) {
        case Utf8Policy::Passthrough:
            return raw;
        case Utf8Policy::Replace:
            return replace_invalid_utf8(raw);
        case Utf8Policy::Error: {
            std::size_t bad = unicode::find_invalid_utf8(raw);
            if (bad != std::string_view::npos)
                throw TokenError("decoded bytes are not valid UTF-8 at offset " +
                                 std::to_string(bad));
            return raw;
        }
    }
    return raw;
}

std::string BpeTokenizer::token_text(TokenId id) const {
    const std::string& stored = vocab_.token_of(id);
    if (config_.mode == TokenizerMode::CharLevel) return stored;
    return byte_alphabet::unmap_bytes(stored);
}

} // namespace tokaudit
