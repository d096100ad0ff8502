#include "tokaudit/audit.hpp"
#include "tokaudit/bpe_tokenizer.hpp"

#include "support/checks.hpp"
#include "support/r50k.hpp"

#include <doctest.h>

#include <random>
#include <string>
#include <tuple>
#include <vector>

using namespace tokaudit;

namespace {

using PieceTuple = std::tuple<TokenId, std::string, std::size_t, std::size_t>;

std::vector<PieceTuple> pieces_of(const Encoding& enc, const Tokenizer& tok) {
    std::vector<PieceTuple> out;
    for (const auto& p : enc.pieces)
        out.emplace_back(p.id, tok.token_text(p.id), p.span.begin, p.span.end);
    return out;
}

} // namespace

TEST_CASE("reference tokenizer basics") {
    const auto& tok = testsupport::r50k();
    CHECK(tok.vocab_size() == 50257);
    CHECK(tok.max_token_id() == 50256);
    CHECK(tok.name() == "r50k");
    CHECK(tok.merges().size() == 50000);
}

TEST_CASE("golden id sequences") {
    const auto& tok = testsupport::r50k();

    auto list = testsupport::encode_checked(tok, "480, 481, 482");
    CHECK(list.ids() == std::vector<TokenId>{22148, 11, 4764, 16, 11, 4764, 17});
    CHECK(tok.decode(list.ids()) == "480, 481, 482");

    auto pi = testsupport::encode_checked(tok, "3.14159");
    CHECK(pi.ids() == std::vector<TokenId>{18, 13, 1415, 19707});
    CHECK(pieces_of(pi, tok) == std::vector<PieceTuple>{
                                    {18, "3", 0, 1},
                                    {13, ".", 1, 2},
                                    {1415, "14", 2, 4},
                                    {19707, "159", 4, 7},
                                });
    CHECK(tok.decode(pi.ids()) == "3.14159");

    SUBCASE("a trailing space appends a token") {
        auto base = tok.encode("the first step is");
        auto spaced = tok.encode("the first step is ");
        auto expect = base.ids();
        expect.push_back(220);
        CHECK(spaced.ids() == expect);
    }

    SUBCASE("case probes") {
        CHECK(tok.encode("zzzqx").ids() == std::vector<TokenId>{3019, 89, 80, 87});
        CHECK(tok.encode("Zzzqx").ids() == std::vector<TokenId>{57, 3019, 80, 87});
    }

    SUBCASE("whitespace probes") {
        CHECK(tok.encode("x,").ids() == std::vector<TokenId>{87, 11});
        CHECK(tok.encode("x, ").ids() == std::vector<TokenId>{87, 11, 220});
    }
}

TEST_CASE("a full sensor row, token by token") {
    const auto& tok = testsupport::r50k();
    const std::string row = "33,Jogging,49105962326000,-0.6946377,12.680544,0.50395286;";

    auto enc = testsupport::encode_checked(tok, row);
    CHECK(pieces_of(enc, tok) == std::vector<PieceTuple>{
                                     {2091, "33", 0, 2},     {11, ",", 2, 3},
                                     {41, "J", 3, 4},        {30853, "ogging", 4, 10},
                                     {11, ",", 10, 11},      {2920, "49", 11, 13},
                                     {940, "10", 13, 15},    {45734, "596", 15, 18},
                                     {1954, "23", 18, 20},   {2075, "26", 20, 22},
                                     {830, "000", 22, 25},   {12095, ",-", 25, 27},
                                     {15, "0", 27, 28},      {13, ".", 28, 29},
                                     {3388, "69", 29, 31},   {3510, "46", 31, 33},
                                     {26514, "377", 33, 36}, {11, ",", 36, 37},
                                     {1065, "12", 37, 39},   {13, ".", 39, 40},
                                     {21, "6", 40, 41},      {28256, "805", 41, 44},
                                     {2598, "44", 44, 46},   {11, ",", 46, 47},
                                     {15, "0", 47, 48},      {13, ".", 48, 49},
                                     {1120, "50", 49, 51},   {31010, "395", 51, 54},
                                     {27033, "286", 54, 57}, {26, ";", 57, 58},
                                 });
    CHECK(tok.decode(enc.ids()) == row);

    SUBCASE("alignment against the row's field spans") {
        std::vector<FieldSpan> fields = {
            {0, "participant", {0, 2}}, {0, "activity", {3, 10}}, {0, "timestamp", {11, 25}},
            {0, "x", {26, 36}},         {0, "y", {37, 46}},       {0, "z", {47, 57}},
        };
        auto m = alignment_metrics(enc, row, fields);
        // The ",-" token swallows x's left edge: 11 of 12 endpoints align.
        CHECK(m.boundary_alignment == doctest::Approx(11.0 / 12.0));
        CHECK(m.tokens_per_field_mean == doctest::Approx(25.0 / 6.0));
        CHECK(m.tokens_per_field_max == 6);
        CHECK(m.sign_merge_count == 1);
    }
}

TEST_CASE("year coverage is era-dependent") {
    const auto& tok = testsupport::r50k();
    auto past = scan_years(tok, 1900, 1999);
    CHECK(past.fraction_single_token == 1.0);

    auto future = scan_years(tok, 2100, 2199);
    CHECK(future.fraction_single_token == 0.01); // only " 2100" survives whole
    CHECK(future.token_counts[0] == 1);
    CHECK(future.token_counts[1] == 2);
}

TEST_CASE("integer chunking profiles") {
    const auto& tok = testsupport::r50k();

    auto digits = scan_integers(tok, 0, 9);
    CHECK(digits.fraction_single_token == 1.0);

    SUBCASE("the four-digit sweep") {
        auto p = scan_integers(tok, 0, 9999);
        CHECK(p.fraction_single_token == doctest::Approx(0.0907));
        CHECK(p.adjacent_inconsistency == 1015);
        CHECK(p.token_counts.size() == 10000);
    }

    SUBCASE("list context changes the picture") {
        auto p = scan_integers(tok, 480, 482, IntegerFormat::CommaSpaceList);
        CHECK(p.token_counts == std::vector<int>{1, 2, 2});
        CHECK(p.adjacent_inconsistency == 1);
    }
}

TEST_CASE("float fragmentation on reference literals") {
    const auto& tok = testsupport::r50k();

    auto pi = analyze_float(tok, "3.14159");
    CHECK(pi.triggered);
    CHECK(pi.note == "literal fragments into 4 segments: 3|.|14|159");

    CHECK(!analyze_float(tok, "7").triggered);

    auto accel = analyze_float(tok, "-0.6946377");
    CHECK(accel.triggered);
    CHECK(accel.metrics.at(0).second == 6); // -|0|.|69|46|377
}

TEST_CASE("sign merge evidence") {
    const auto& tok = testsupport::r50k();
    auto f = detect_sign_merges(tok, "000,-0.69");
    CHECK(f.triggered);
    REQUIRE(f.tokens.size() == 1);
    CHECK(f.tokens[0].id == 12095);
    CHECK(f.tokens[0].text == ",-");
}

TEST_CASE("arbitrary byte strings round-trip") {
    const auto& tok = testsupport::r50k_passthrough();
    std::mt19937 rng(2024);
    for (int trial = 0; trial < 500; ++trial) {
        std::string raw;
        std::size_t len = rng() % 48;
        for (std::size_t i = 0; i < len; ++i) raw.push_back(static_cast<char>(rng() & 0xFF));
        auto enc = testsupport::encode_checked(tok, raw);
        CHECK(tok.decode(enc.ids()) == raw);
    }
}
