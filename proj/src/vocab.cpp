#include "tokaudit/vocab.hpp"

#include "tokaudit/byte_alphabet.hpp"
#include "tokaudit/errors.hpp"
#include "tokaudit/unicode.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>

namespace tokaudit {

namespace {

std::size_t line_of_offset(std::string_view text, std::size_t offset) {
    offset = std::min(offset, text.size());
    return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + offset, '\n'));
}

// SAX handler so duplicate keys are observed (a DOM parse would silently
// keep the last one) and so errors carry byte offsets.
class VocabSax : public nlohmann::json_sax<nlohmann::json> {
public:
    explicit VocabSax(std::string_view source, Vocab& out) : source_(source), out_(out) {}

    bool start_object(std::size_t) override {
        if (depth_++ > 0) fail("nested objects are not valid vocabulary entries");
        return true;
    }
    bool end_object() override { --depth_; return true; }
    bool key(string_t& val) override { current_key_ = val; have_key_ = true; return true; }

    bool number_unsigned(number_unsigned_t val) override { return accept_id(static_cast<long long>(val)); }
    bool number_integer(number_integer_t val) override { return accept_id(val); }

    bool null() override { return reject("null"); }
    bool boolean(bool) override { return reject("a boolean"); }
    bool number_float(number_float_t, const string_t&) override { return reject("a non-integer number"); }
    bool string(string_t&) override {
        if (!have_key_ && depth_ == 0) fail("top-level value must be an object");
        return reject("a string");
    }
    bool binary(binary_t&) override { return reject("binary data"); }
    bool start_array(std::size_t) override {
        if (depth_ == 0) fail("top-level value must be an object");
        return reject("an array");
    }
    bool end_array() override { return true; }

    bool parse_error(std::size_t position, const std::string&,
                     const nlohmann::detail::exception& ex) override {
        throw ParseError("vocabulary JSON: " + std::string(ex.what()) + " (byte " +
                         std::to_string(position) + ", line " +
                         std::to_string(line_of_offset(source_, position)) + ")");
    }

private:
    bool accept_id(long long id) {
        if (!have_key_) fail("top-level value must be an object");
        if (id < 0)
            throw IntegrityError("vocabulary: token \"" + current_key_ + "\" has negative id " +
                                 std::to_string(id));
        out_.add(current_key_, static_cast<TokenId>(id));
        have_key_ = false;
        return true;
    }
    bool reject(const std::string& what) {
        fail("token \"" + current_key_ + "\" maps to " + what + "; expected an integer id");
        return false;
    }
    [[noreturn]] void fail(const std::string& msg) {
        throw ParseError("vocabulary JSON: " + msg);
    }

    std::string_view source_;
    Vocab& out_;
    std::string current_key_;
    bool have_key_ = false;
    int depth_ = 0;
};

} // namespace

Vocab Vocab::from_json(std::string_view json_text) {
    Vocab v;
    VocabSax handler(json_text, v);
    nlohmann::json::sax_parse(json_text, &handler);
    return v;
}

Vocab Vocab::from_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open vocabulary file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return from_json(buf.str());
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what());
    } catch (const IntegrityError& e) {
        throw IntegrityError(path + ": " + e.what());
    }
}

std::string Vocab::to_json() const {
    auto entries = entries_by_id();
    std::string out = "{\n";
    for (std::size_t i = 0; i < entries.size(); ++i) {
        out += "  ";
        out += nlohmann::json(std::string(entries[i].second)).dump();
        out += ": ";
        out += std::to_string(entries[i].first);
        if (i + 1 < entries.size()) out += ',';
        out += '\n';
    }
    out += "}\n";
    return out;
}

bool Vocab::contains(std::string_view token) const {
    return to_id_.find(token) != to_id_.end();
}

std::optional<TokenId> Vocab::id_of(std::string_view token) const {
    auto it = to_id_.find(token);
    if (it == to_id_.end()) return std::nullopt;
    return it->second;
}

const std::string& Vocab::token_of(TokenId id) const {
    auto it = id_to_.find(id);
    if (it == id_to_.end())
        throw TokenError("unknown token id " + std::to_string(id));
    return *it->second;
}

void Vocab::add(std::string token, TokenId id) {
    if (id < 0)
        throw IntegrityError("vocabulary: negative id " + std::to_string(id));
    if (contains(token))
        throw IntegrityError("vocabulary: duplicate token \"" + token + "\"");
    if (contains_id(id))
        throw IntegrityError("vocabulary: duplicate id " + std::to_string(id) +
                             " (token \"" + token + "\")");
    auto [it, inserted] = to_id_.emplace(std::move(token), id);
    (void)inserted;
    id_to_.emplace(id, &it->first);
    max_id_ = std::max(max_id_, id);
}

bool Vocab::has_byte_alphabet() const {
    if (size() < 256) return false;
    for (int b = 0; b < 256; ++b) {
        if (!contains(unicode::encode_utf8(byte_alphabet::byte_to_codepoint(static_cast<uint8_t>(b)))))
            return false;
    }
    return true;
}

std::vector<std::pair<TokenId, std::string_view>> Vocab::entries_by_id() const {
    std::vector<std::pair<TokenId, std::string_view>> out;
    out.reserve(id_to_.size());
    for (const auto& [id, str] : id_to_) out.emplace_back(id, *str);
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace tokaudit
