#include "tokaudit/numeric_tokenizer.hpp"

#include "tokaudit/errors.hpp"

#include <nlohmann/json.hpp>

#include <set>
#include <stdexcept>

namespace tokaudit {

namespace {

constexpr std::string_view kReservedChars = "0123456789-+.eE";

bool is_digit(char c) { return c >= '0' && c <= '9'; }

} // namespace

NumericPolicy NumericPolicy::reserved_above(TokenId base_max_id) {
    NumericPolicy p;
    for (int d = 0; d < 10; ++d) p.digit_tokens[static_cast<std::size_t>(d)] = base_max_id + 1 + d;
    p.sign_token = base_max_id + 11;
    p.plus_token = base_max_id + 12;
    p.point_token = base_max_id + 13;
    p.exponent_token = base_max_id + 14;
    p.exponent_upper_token = base_max_id + 15;
    return p;
}

NumericPolicy NumericPolicy::from_json(std::string_view json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("numeric policy JSON: ") + e.what());
    }
    if (!j.is_object()) throw ParseError("numeric policy JSON: top-level value must be an object");

    auto require_int = [&](const char* key) -> TokenId {
        if (!j.contains(key) || !j[key].is_number_integer())
            throw ParseError(std::string("numeric policy JSON: missing integer field \"") + key +
                             "\"");
        return j[key].get<TokenId>();
    };

    NumericPolicy p;
    if (!j.contains("digit_tokens") || !j["digit_tokens"].is_array() ||
        j["digit_tokens"].size() != 10)
        throw ParseError("numeric policy JSON: \"digit_tokens\" must be an array of 10 ids");
    for (std::size_t d = 0; d < 10; ++d) {
        if (!j["digit_tokens"][d].is_number_integer())
            throw ParseError("numeric policy JSON: \"digit_tokens\" must contain integers");
        p.digit_tokens[d] = j["digit_tokens"][d].get<TokenId>();
    }
    p.sign_token = require_int("sign_token");
    p.plus_token = require_int("plus_token");
    p.point_token = require_int("point_token");
    p.exponent_token = require_int("exponent_token");
    p.exponent_upper_token = require_int("exponent_upper_token");

    std::string fallback = j.value("fallback", std::string("delegate"));
    if (fallback == "delegate") p.fallback = Fallback::DelegateToBase;
    else if (fallback == "per-byte") p.fallback = Fallback::PerByte;
    else throw ParseError("numeric policy JSON: \"fallback\" must be \"delegate\" or \"per-byte\"");
    return p;
}

std::string NumericPolicy::to_json() const {
    nlohmann::ordered_json j;
    j["digit_tokens"] = digit_tokens;
    j["sign_token"] = sign_token;
    j["plus_token"] = plus_token;
    j["point_token"] = point_token;
    j["exponent_token"] = exponent_token;
    j["exponent_upper_token"] = exponent_upper_token;
    j["fallback"] = fallback == Fallback::DelegateToBase ? "delegate" : "per-byte";
    return j.dump(2) + "\n";
}

std::array<TokenId, 15> NumericPolicy::all_reserved() const {
    std::array<TokenId, 15> out{};
    for (std::size_t d = 0; d < 10; ++d) out[d] = digit_tokens[d];
    out[10] = sign_token;
    out[11] = plus_token;
    out[12] = point_token;
    out[13] = exponent_token;
    out[14] = exponent_upper_token;
    return out;
}

NumericTokenizer::NumericTokenizer(std::shared_ptr<const Tokenizer> base)
    : NumericTokenizer(base, base ? NumericPolicy::reserved_above(base->max_token_id())
                                  : NumericPolicy{}) {}

NumericTokenizer::NumericTokenizer(std::shared_ptr<const Tokenizer> base, NumericPolicy policy)
    : base_(std::move(base)), policy_(policy) {
    if (!base_) throw std::invalid_argument("NumericTokenizer: null base tokenizer");

    auto reserved = policy_.all_reserved();
    std::set<TokenId> seen;
    for (std::size_t i = 0; i < reserved.size(); ++i) {
        TokenId id = reserved[i];
        if (id <= base_->max_token_id())
            throw IntegrityError("numeric policy: reserved id " + std::to_string(id) +
                                 " collides with the base vocabulary (max id " +
                                 std::to_string(base_->max_token_id()) + ")");
        if (!seen.insert(id).second)
            throw IntegrityError("numeric policy: reserved id " + std::to_string(id) +
                                 " is assigned twice");
        reserved_chars_[id] = kReservedChars[i];
        max_id_ = std::max(max_id_, id);
    }
}

std::size_t NumericTokenizer::match_number(std::string_view text, std::size_t pos) {
    const std::size_t n = text.size();
    std::size_t j = pos;
    if (j < n && text[j] == '-') ++j;
    std::size_t digits_start = j;
    while (j < n && is_digit(text[j])) ++j;
    if (j == digits_start) return pos; // no digits: not a numeric span

    if (j + 1 < n && text[j] == '.' && is_digit(text[j + 1])) {
        ++j;
        while (j < n && is_digit(text[j])) ++j;
    }
    if (j < n && (text[j] == 'e' || text[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < n && (text[k] == '+' || text[k] == '-')) ++k;
        if (k < n && is_digit(text[k])) {
            j = k;
            while (j < n && is_digit(text[j])) ++j;
        }
    }
    return j;
}

TokenId NumericTokenizer::token_for(char c) const {
    if (is_digit(c)) return policy_.digit_tokens[static_cast<std::size_t>(c - '0')];
    switch (c) {
        case '-': return policy_.sign_token;
        case '+': return policy_.plus_token;
        case '.': return policy_.point_token;
        case 'e': return policy_.exponent_token;
        case 'E': return policy_.exponent_upper_token;
    }
    throw TokenError(std::string("not a reserved numeric character: '") + c + "'");
}

Encoding NumericTokenizer::encode(std::string_view text) const {
    Encoding out;
    out.text_size = text.size();

    auto emit_base = [&](std::size_t begin, std::size_t end) {
        if (begin == end) return;
        if (policy_.fallback == NumericPolicy::Fallback::DelegateToBase) {
            Encoding sub = base_->encode(text.substr(begin, end - begin));
            for (auto& p : sub.pieces)
                out.pieces.push_back({p.id, {p.span.begin + begin, p.span.end + begin}});
        } else {
            for (std::size_t i = begin; i < end; ++i) {
                Encoding sub = base_->encode(text.substr(i, 1));
                for (auto& p : sub.pieces)
                    out.pieces.push_back({p.id, {p.span.begin + i, p.span.end + i}});
            }
        }
    };

    std::size_t pos = 0;
    std::size_t run_start = 0;
    while (pos < text.size()) {
        std::size_t end = match_number(text, pos);
        if (end == pos) {
            ++pos;
            continue;
        }
        emit_base(run_start, pos);
        for (std::size_t i = pos; i < end; ++i)
            out.pieces.push_back({token_for(text[i]), {i, i + 1}});
        pos = end;
        run_start = end;
    }
    emit_base(run_start, text.size());
    return out;
}

std::string NumericTokenizer::decode(std::span<const TokenId> ids) const {
    std::string out;
    std::vector<TokenId> pending;
    auto flush = [&] {
        if (pending.empty()) return;
        out += base_->decode(pending);
        pending.clear();
    };
    for (TokenId id : ids) {
        auto it = reserved_chars_.find(id);
        if (it != reserved_chars_.end()) {
            flush();
            out.push_back(it->second);
        } else if (id >= 0 && id <= base_->max_token_id()) {
            pending.push_back(id);
        } else {
            throw TokenError("unknown token id " + std::to_string(id));
        }
    }
    flush();
    return out;
}

std::string NumericTokenizer::token_text(TokenId id) const {
    auto it = reserved_chars_.find(id);
    if (it != reserved_chars_.end()) return std::string(1, it->second);
    return base_->token_text(id);
}

ConsistencyReport verify_consistency(const NumericTokenizer& tok, long long lo, long long hi) {
    if (lo > hi) throw std::invalid_argument("verify_consistency: lo > hi");
    ConsistencyReport report;
    for (long long n = lo; n <= hi; ++n) {
        std::string s = std::to_string(n);
        Encoding enc = tok.encode(s);
        std::size_t expected = s.size(); // one token per character, sign included
        bool ok = enc.pieces.size() == expected;
        for (std::size_t i = 0; ok && i < enc.pieces.size(); ++i)
            ok = enc.pieces[i].span.size() == 1;
        if (!ok) {
            report.passed = false;
            report.counterexample = n;
            report.expected = std::to_string(expected) + " single-character tokens";
            report.actual = std::to_string(enc.pieces.size()) + " tokens";
            return report;
        }
        ++report.checked;
    }
    return report;
}

} // namespace tokaudit
