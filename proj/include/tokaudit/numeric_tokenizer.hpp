#pragma once

#include "tokaudit/tokenizer.hpp"

#include <array>
#include <memory>
#include <string>
#include <unordered_map>

namespace tokaudit {

// Reserved-token assignment for the digit-level numeric tokenizer. The 15
// reserved characters are the ten digits, '-', '+', '.', 'e' and 'E'.
struct NumericPolicy {
    enum class Fallback {
        DelegateToBase, // non-numeric runs go through the base tokenizer
        PerByte,        // non-numeric runs are encoded byte by byte
    };

    std::array<TokenId, 10> digit_tokens{};
    TokenId sign_token = -1;
    TokenId plus_token = -1;
    TokenId point_token = -1;
    TokenId exponent_token = -1;       // 'e'
    TokenId exponent_upper_token = -1; // 'E'
    Fallback fallback = Fallback::DelegateToBase;

    // Contiguous block directly above an existing vocabulary:
    // digits d -> base_max_id + 1 + d, then '-', '+', '.', 'e', 'E'.
    static NumericPolicy reserved_above(TokenId base_max_id);

    static NumericPolicy from_json(std::string_view json_text);
    std::string to_json() const;

    std::array<TokenId, 15> all_reserved() const;
};

struct ConsistencyReport {
    bool passed = true;
    long long checked = 0;
    long long counterexample = 0; // valid when !passed
    std::string expected;
    std::string actual;
};

// Wraps a base tokenizer so that every numeric span is encoded one character
// per token with ids reserved above the base vocabulary. A numeric span is
//   '-'? digits ('.' digits)? (('e'|'E') ('+'|'-')? digits)?
// Everything else is delegated to the base tokenizer per the fallback policy.
class NumericTokenizer final : public Tokenizer {
public:
    // Defaults to NumericPolicy::reserved_above(base->max_token_id()).
    explicit NumericTokenizer(std::shared_ptr<const Tokenizer> base);
    NumericTokenizer(std::shared_ptr<const Tokenizer> base, NumericPolicy policy);

    Encoding encode(std::string_view text) const override;
    std::string decode(std::span<const TokenId> ids) const override;
    std::string token_text(TokenId id) const override;
    std::size_t vocab_size() const override { return base_->vocab_size() + 15; }
    TokenId max_token_id() const override { return max_id_; }
    std::string name() const override { return "numtok(" + base_->name() + ")"; }

    const NumericPolicy& policy() const { return policy_; }
    const Tokenizer& base() const { return *base_; }

    // End of the numeric span starting exactly at pos, or pos when text[pos]
    // does not start one.
    static std::size_t match_number(std::string_view text, std::size_t pos);

private:
    TokenId token_for(char c) const;

    std::shared_ptr<const Tokenizer> base_;
    NumericPolicy policy_;
    std::unordered_map<TokenId, char> reserved_chars_;
    TokenId max_id_ = -1;
};

// Checks that every integer in [lo, hi] encodes to exactly one token per
// character (digit count plus one for a leading minus). Returns the first
// counterexample on failure.
ConsistencyReport verify_consistency(const NumericTokenizer& tok, long long lo, long long hi);

} // namespace tokaudit
