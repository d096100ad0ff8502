#include "tokaudit/pretokenize.hpp"

#include "tokaudit/errors.hpp"
#include "tokaudit/unicode.hpp"

#include <array>
#include <cassert>
#include <string>

namespace tokaudit {

namespace {

enum class CharClass { Letter, Number, Whitespace, Other };

struct Char {
    uint32_t cp = 0;
    std::size_t offset = 0;
    std::size_t length = 1;
    CharClass cls = CharClass::Other;
};

CharClass classify(uint32_t cp) {
    if (unicode::is_whitespace(cp)) return CharClass::Whitespace;
    if (unicode::is_letter(cp)) return CharClass::Letter;
    if (unicode::is_number(cp)) return CharClass::Number;
    return CharClass::Other;
}

std::vector<Char> decode_all(std::string_view text, bool lenient) {
    std::vector<Char> chars;
    chars.reserve(text.size());
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto d = unicode::decode_utf8(text, pos);
        if (!d.valid) {
            if (!lenient)
                throw ParseError("invalid UTF-8 byte at offset " + std::to_string(pos));
            chars.push_back({d.cp, pos, 1, CharClass::Other});
            pos += 1;
            continue;
        }
        chars.push_back({d.cp, pos, d.length, classify(d.cp)});
        pos += d.length;
    }
    return chars;
}

PreTokenKind kind_for(CharClass cls) {
    switch (cls) {
        case CharClass::Letter: return PreTokenKind::Word;
        case CharClass::Number: return PreTokenKind::Number;
        case CharClass::Whitespace: return PreTokenKind::Whitespace;
        case CharClass::Other: return PreTokenKind::Punct;
    }
    return PreTokenKind::Punct;
}

// 's 't 're 've 'm 'll 'd, lowercase only.
constexpr std::array<std::string_view, 7> kContractions = {"s", "t", "re", "ve", "m", "ll", "d"};

std::vector<PreToken> scan_gpt2(const std::vector<Char>& chars) {
    std::vector<PreToken> out;
    const std::size_t n = chars.size();
    std::size_t i = 0;
    auto end_of = [&](std::size_t k) { return chars[k].offset + chars[k].length; };

    while (i < n) {
        // Alternative 1: contractions.
        if (chars[i].cp == '\'') {
            bool matched = false;
            for (auto cand : kContractions) {
                if (i + cand.size() >= n) continue;
                bool ok = true;
                for (std::size_t k = 0; k < cand.size(); ++k)
                    if (chars[i + 1 + k].cp != static_cast<uint32_t>(cand[k])) { ok = false; break; }
                if (!ok) continue;
                out.push_back({{chars[i].offset, end_of(i + cand.size())}, PreTokenKind::Contraction});
                i += 1 + cand.size();
                matched = true;
                break;
            }
            if (matched) continue;
        }

        // Alternatives 2-4: optional single leading space, then a run of one class.
        {
            bool sp = chars[i].cp == ' ';
            std::size_t j = sp ? i + 1 : i;
            if (j < n && chars[j].cls != CharClass::Whitespace) {
                CharClass cls = chars[j].cls;
                std::size_t k = j;
                while (k < n && chars[k].cls == cls) ++k;
                out.push_back({{chars[i].offset, end_of(k - 1)}, kind_for(cls)});
                i = k;
                continue;
            }
        }

        // Alternatives 5-6: whitespace runs. A run followed by non-whitespace
        // gives up its final character; a single such character matches alone.
        assert(chars[i].cls == CharClass::Whitespace);
        std::size_t k = i;
        while (k < n && chars[k].cls == CharClass::Whitespace) ++k;
        std::size_t stop = (k == n) ? k : (k - i >= 2 ? k - 1 : i + 1);
        out.push_back({{chars[i].offset, end_of(stop - 1)}, PreTokenKind::Whitespace});
        i = stop;
    }
    return out;
}

std::vector<PreToken> scan_whitespace(const std::vector<Char>& chars) {
    std::vector<PreToken> out;
    std::size_t i = 0;
    while (i < chars.size()) {
        bool ws = chars[i].cls == CharClass::Whitespace;
        std::size_t k = i;
        while (k < chars.size() && (chars[k].cls == CharClass::Whitespace) == ws) ++k;
        out.push_back({{chars[i].offset, chars[k - 1].offset + chars[k - 1].length},
                       ws ? PreTokenKind::Whitespace : PreTokenKind::Word});
        i = k;
    }
    return out;
}

std::vector<PreToken> scan_char(const std::vector<Char>& chars) {
    std::vector<PreToken> out;
    out.reserve(chars.size());
    for (const auto& c : chars)
        out.push_back({{c.offset, c.offset + c.length}, kind_for(c.cls)});
    return out;
}

std::vector<PreToken> run(std::string_view text, PretokenPattern pattern, bool lenient) {
    auto chars = decode_all(text, lenient);
    switch (pattern) {
        case PretokenPattern::Gpt2: return scan_gpt2(chars);
        case PretokenPattern::Whitespace: return scan_whitespace(chars);
        case PretokenPattern::Char: return scan_char(chars);
    }
    return {};
}

} // namespace

std::vector<PreToken> pretokenize(std::string_view text, PretokenPattern pattern) {
    return run(text, pattern, false);
}

std::vector<PreToken> pretokenize_lenient(std::string_view text, PretokenPattern pattern) {
    return run(text, pattern, true);
}

} // namespace tokaudit
