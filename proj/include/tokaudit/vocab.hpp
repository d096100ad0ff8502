#pragma once

#include "tokaudit/encoding.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace tokaudit {

// Bijective map between token strings and non-negative ids. Ids may be
// sparse; they are preserved exactly through JSON round trips.
class Vocab {
public:
    Vocab() = default;

    // Parses a JSON object {"token": id, ...}. Malformed JSON -> ParseError
    // carrying byte offset and line; duplicate tokens/ids or non-integer /
    // negative ids -> IntegrityError.
    static Vocab from_json(std::string_view json_text);
    static Vocab from_json_file(const std::string& path);

    // Deterministic serialization: entries ordered by id, one per line.
    std::string to_json() const;

    std::size_t size() const { return to_id_.size(); }
    bool empty() const { return to_id_.empty(); }

    bool contains(std::string_view token) const;
    bool contains_id(TokenId id) const { return id_to_.count(id) != 0; }

    std::optional<TokenId> id_of(std::string_view token) const;

    // Throws TokenError naming the id when absent.
    const std::string& token_of(TokenId id) const;

    // -1 when empty.
    TokenId max_id() const { return max_id_; }

    // Throws IntegrityError on duplicate token or id.
    void add(std::string token, TokenId id);
    TokenId add_next(std::string token) {
        TokenId id = max_id_ + 1;
        add(std::move(token), id);
        return id;
    }

    // True when every one of the 256 single-byte symbols (in remapped form)
    // is present - the precondition for byte-level encoding.
    bool has_byte_alphabet() const;

    // Entries sorted by id.
    std::vector<std::pair<TokenId, std::string_view>> entries_by_id() const;

private:
    struct StrHash {
        using is_transparent = void;
        std::size_t operator()(std::string_view s) const noexcept {
            return std::hash<std::string_view>{}(s);
        }
    };

    std::unordered_map<std::string, TokenId, StrHash, std::equal_to<>> to_id_;
    std::unordered_map<TokenId, const std::string*> id_to_;
    TokenId max_id_ = -1;
};

} // namespace tokaudit
