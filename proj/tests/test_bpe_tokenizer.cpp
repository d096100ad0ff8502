#include "tokaudit/bpe_tokenizer.hpp"
#include "tokaudit/byte_alphabet.hpp"
#include "tokaudit/errors.hpp"

#include "support/checks.hpp"

#include <doctest.h>

#include <array>
#include <memory>
#include <random>
#include <thread>
#include <vector>

using namespace tokaudit;

namespace {

BpeTokenizer make_char_tokenizer() {
    auto vocab = Vocab::from_json(R"({"a": 0, "b": 1, "c": 2, "ab": 3, "abc": 4})");
    MergeTable merges;
    merges.add("a", "b");
    merges.add("ab", "c");
    BpeConfig cfg;
    cfg.mode = TokenizerMode::CharLevel;
    cfg.name = "tiny";
    return BpeTokenizer(std::move(vocab), std::move(merges), cfg);
}

// A byte-level vocabulary containing exactly the 256 single-byte symbols.
BpeTokenizer make_byte_tokenizer(Utf8Policy utf8 = Utf8Policy::Passthrough) {
    Vocab vocab;
    for (int b = 0; b < 256; ++b) {
        std::string raw(1, static_cast<char>(b));
        vocab.add(byte_alphabet::remap_bytes(raw), b);
    }
    BpeConfig cfg;
    cfg.utf8 = utf8;
    cfg.name = "bytes";
    return BpeTokenizer(std::move(vocab), MergeTable{}, cfg);
}

} // namespace

TEST_CASE("char-level encode applies merges by rank") {
    auto tok = make_char_tokenizer();
    auto enc = testsupport::encode_checked(tok, "abcab");
    CHECK(enc.ids() == std::vector<TokenId>{4, 3});
    REQUIRE(enc.pieces.size() == 2);
    CHECK(enc.pieces[0].span == ByteSpan{0, 3});
    CHECK(enc.pieces[1].span == ByteSpan{3, 5});
    CHECK(tok.decode(enc.ids()) == "abcab");

    CHECK(testsupport::encode_checked(tok, "cba").ids() == std::vector<TokenId>{2, 1, 0});
    CHECK(testsupport::encode_checked(tok, "").ids().empty());
    CHECK(tok.name() == "tiny");
    CHECK(tok.vocab_size() == 5);
    CHECK(tok.max_token_id() == 4);
    CHECK(tok.token_text(3) == "ab");

    SUBCASE("unknown symbols are encode errors") {
        CHECK_THROWS_AS(tok.encode("abd"), TokenError);
        CHECK_THROWS_WITH(tok.encode("abd"), doctest::Contains("d"));
        CHECK_THROWS_WITH(tok.encode("abd"), doctest::Contains("offset 2"));
    }
}

TEST_CASE("construction validates inputs") {
    SUBCASE("merge result missing from vocabulary") {
        auto vocab = Vocab::from_json(R"({"a": 0, "b": 1})");
        MergeTable merges;
        merges.add("a", "b");
        BpeConfig cfg;
        cfg.mode = TokenizerMode::CharLevel;
        CHECK_THROWS_AS(BpeTokenizer(std::move(vocab), std::move(merges), cfg), IntegrityError);
    }

    SUBCASE("byte-level mode requires the full byte alphabet") {
        auto vocab = Vocab::from_json(R"({"a": 0, "b": 1})");
        CHECK_THROWS_AS(BpeTokenizer(std::move(vocab), MergeTable{}, BpeConfig{}), IntegrityError);
    }
}

TEST_CASE("byte-level mode round-trips arbitrary bytes") {
    auto tok = make_byte_tokenizer();
    std::mt19937 rng(4242);
    for (int trial = 0; trial < 100; ++trial) {
        std::string raw;
        std::size_t len = rng() % 64;
        for (std::size_t i = 0; i < len; ++i) raw.push_back(static_cast<char>(rng() & 0xFF));
        auto enc = testsupport::encode_checked(tok, raw);
        CHECK(enc.pieces.size() == raw.size()); // no merges -> one token per byte
        CHECK(tok.decode(enc.ids()) == raw);
    }
    // Ids equal byte values in this vocabulary.
    CHECK(testsupport::encode_checked(tok, "AB").ids() == std::vector<TokenId>{65, 66});
}

TEST_CASE("decode utf-8 policies") {
    // Token 0xC3 alone is half of a two-byte character.
    std::vector<TokenId> half = {0xC3};

    CHECK_THROWS_AS(make_byte_tokenizer(Utf8Policy::Error).decode(half), TokenError);
    CHECK(make_byte_tokenizer(Utf8Policy::Replace).decode(half) == "\xEF\xBF\xBD");
    CHECK(make_byte_tokenizer(Utf8Policy::Passthrough).decode(half) == "\xC3");

    auto tok = make_byte_tokenizer(Utf8Policy::Error);
    std::vector<TokenId> fine = {0xC3, 0xA9}; // é split into its two bytes
    CHECK(tok.decode(fine) == "\xC3\xA9");
    CHECK_THROWS_AS(tok.decode(std::vector<TokenId>{999}), TokenError);
}

TEST_CASE("byte-level merges combine within pre-tokens only") {
    // Vocabulary: all single bytes plus "ab", "abab"; merges (a,b), (ab,ab).
    Vocab vocab;
    for (int b = 0; b < 256; ++b)
        vocab.add(byte_alphabet::remap_bytes(std::string(1, static_cast<char>(b))), b);
    vocab.add("ab", 256);
    vocab.add("abab", 257);
    MergeTable merges;
    merges.add("a", "b");
    merges.add("ab", "ab");
    BpeConfig cfg;
    cfg.name = "ab";
    BpeTokenizer tok(std::move(vocab), std::move(merges), cfg);

    CHECK(testsupport::encode_checked(tok, "abab").ids() == std::vector<TokenId>{257});
    CHECK(testsupport::encode_checked(tok, "ababab").ids() == std::vector<TokenId>{257, 256});
    // " ab" is a separate pre-token: (a,b) still merges inside it, but the
    // (ab,ab) merge cannot reach across the boundary.
    CHECK(testsupport::encode_checked(tok, "ab ab").ids() ==
          std::vector<TokenId>{256, ' ', 256});
    CHECK(tok.decode(tok.encode("ab ab").ids()) == "ab ab");
    CHECK(tok.token_text(257) == "abab");
}

TEST_CASE("encode is deterministic and const-thread-safe") {
    auto tok = make_char_tokenizer();
    const std::string text = "abcabcba";
    auto reference = tok.encode(text).ids();
    CHECK(tok.encode(text).ids() == reference);

    std::vector<std::thread> threads;
    std::array<bool, 4> ok{};
    for (int t = 0; t < 4; ++t)
        threads.emplace_back([&, t] {
            bool all = true;
            for (int i = 0; i < 200; ++i)
                all = all && tok.encode(text).ids() == reference;
            ok[static_cast<std::size_t>(t)] = all;
        });
    for (auto& th : threads) th.join();
    for (bool b : ok) CHECK(b);
}
