// Acceptance suite: one check per shipped guarantee, one PASS/FAIL line each.
// Unlike the unit tests these run straight through main(), so the binary can
// be invoked standalone and its output read as a checklist.

#include "tokaudit/audit.hpp"
#include "tokaudit/bpe_tokenizer.hpp"
#include "tokaudit/bpe_trainer.hpp"
#include "tokaudit/numeric_tokenizer.hpp"
#include "tokaudit/wisdm.hpp"

#include "support/bpe_oracle.hpp"
#include "support/checks.hpp"
#include "support/paths.hpp"
#include "support/r50k.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

using namespace tokaudit;

namespace {

int failures = 0;

void expect(bool condition, const std::string& what) {
    if (!condition) throw std::runtime_error(what);
}

void criterion(int n, const std::string& name, const std::function<void()>& body) {
    try {
        body();
        std::printf("PASS  %d. %s\n", n, name.c_str());
    } catch (const std::exception& e) {
        ++failures;
        std::printf("FAIL  %d. %s: %s\n", n, name.c_str(), e.what());
    }
    std::fflush(stdout);
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    expect(in.good(), "cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

int run_cli(const std::string& args) {
    int rc = std::system(("'" + testpaths::cli_path + "' " + args + " > /dev/null 2>&1").c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

// ---- criteria ---------------------------------------------------------------

void golden_sequences() {
    const auto& tok = testsupport::r50k();
    auto start = std::chrono::steady_clock::now();

    auto list = testsupport::encode_checked(tok, "480, 481, 482");
    expect(list.ids() == std::vector<TokenId>{22148, 11, 4764, 16, 11, 4764, 17},
           "id sequence for the integer list diverges");
    expect(tok.decode(list.ids()) == "480, 481, 482", "decode does not invert the list encode");

    auto pi = testsupport::encode_checked(tok, "3.14159");
    expect(pi.ids() == std::vector<TokenId>{18, 13, 1415, 19707},
           "id sequence for the decimal literal diverges");
    expect(tok.decode(pi.ids()) == "3.14159", "decode does not invert the literal encode");

    double elapsed = seconds_since(start);
    expect(elapsed < 1.0, "golden encodes took " + std::to_string(elapsed) + " s (budget 1 s)");
}

void digit_chunking_witness() {
    auto profile =
        scan_integers(testsupport::r50k(), 480, 482, IntegerFormat::CommaSpaceList);
    expect(profile.token_counts == std::vector<int>{1, 2, 2},
           "expected token counts {1, 2, 2} for 480..482 in list context");
    expect(profile.adjacent_inconsistency >= 1, "no adjacent inconsistency detected");
}

void case_and_whitespace_probes() {
    const auto& tok = testsupport::r50k();
    expect(probe_case(tok, "good").triggered, "case probe on \"good\" did not trigger");
    expect(probe_whitespace(tok, "the first step is").triggered,
           "whitespace probe on \"the first step is\" did not trigger");
}

void sensor_batch_audit() {
    auto start = std::chrono::steady_clock::now();

    auto rows = parse_rows_file(testpaths::wisdm_fixture());
    expect(rows.size() == 200, "fixture should hold 200 rows, got " +
                                   std::to_string(rows.size()));

    auto batch = serialize(rows);
    const auto& tok = testsupport::r50k();
    auto report = run_audit(tok, batch.text, batch.field_spans);

    // (a) Every timestamp field fragments into two or more tokens.
    bool timestamp_seen = false;
    for (const auto& s : report.per_field) {
        if (s.field != "timestamp") continue;
        timestamp_seen = true;
        expect(s.count == rows.size(), "timestamp column count mismatch");
        expect(s.fragmented == s.count,
               std::to_string(s.count - s.fragmented) + " timestamp field(s) stayed whole");
    }
    expect(timestamp_seen, "no per-field rollup for the timestamp column");

    // (b) Every negative acceleration field is implicated in a sign merge:
    // the token that covers its minus sign reaches back over the separator.
    auto enc = testsupport::encode_checked(tok, batch.text);
    long long negative_fields = 0;
    for (const auto& fs : batch.field_spans) {
        if (fs.field != "x" && fs.field != "y" && fs.field != "z") continue;
        if (batch.text[fs.span.begin] != '-') continue;
        ++negative_fields;
        auto it = std::lower_bound(
            enc.pieces.begin(), enc.pieces.end(), fs.span.begin,
            [](const TokenPiece& p, std::size_t v) { return p.span.end <= v; });
        expect(it != enc.pieces.end() && it->span.begin < fs.span.begin,
               "the sign of the field at byte " + std::to_string(fs.span.begin) +
                   " stayed inside its own token");
    }
    expect(negative_fields > 0, "fixture has no negative acceleration fields");
    expect(report.alignment.has_value(), "alignment block missing");
    expect(report.alignment->sign_merge_count == negative_fields,
           "sign merges (" + std::to_string(report.alignment->sign_merge_count) +
               ") != negative fields (" + std::to_string(negative_fields) + ")");

    // (c) Field boundaries do not all line up with token boundaries.
    expect(report.alignment->boundary_alignment < 1.0, "boundary alignment is not below 1.0");

    double elapsed = seconds_since(start);
    expect(elapsed < 5.0, "batch audit took " + std::to_string(elapsed) + " s (budget 5 s)");
}

void numeric_remediation() {
    NumericTokenizer numtok(testsupport::r50k_shared());

    auto report = verify_consistency(numtok, -1'000'000, 1'000'000);
    expect(report.passed, "consistency check failed at " + std::to_string(report.counterexample) +
                              " (expected " + report.expected + ", got " + report.actual + ")");
    expect(report.checked == 2'000'001,
           "expected 2000001 integers checked, got " + std::to_string(report.checked));

    auto profile = scan_integers(numtok, 0, 100'000);
    expect(profile.adjacent_inconsistency == 0,
           std::to_string(profile.adjacent_inconsistency) +
               " adjacent inconsistencies under the digit-level tokenizer");

    std::mt19937 rng(8899);
    auto digits = [&](int n) {
        std::string s;
        for (int i = 0; i < n; ++i) s.push_back(static_cast<char>('0' + rng() % 10));
        return s;
    };
    for (int trial = 0; trial < 10'000; ++trial) {
        std::string lit;
        if (rng() % 2) lit += '-';
        lit += digits(1 + static_cast<int>(rng() % 9));
        if (rng() % 2) lit += "." + digits(1 + static_cast<int>(rng() % 7));
        if (rng() % 4 == 0) {
            lit += rng() % 2 ? 'e' : 'E';
            unsigned s = rng() % 3;
            if (s == 1) lit += '+';
            if (s == 2) lit += '-';
            lit += digits(1 + static_cast<int>(rng() % 3));
        }
        auto enc = testsupport::encode_checked(numtok, lit);
        expect(enc.pieces.size() == lit.size(),
               "\"" + lit + "\" did not encode one token per character");
        expect(numtok.decode(enc.ids()) == lit, "\"" + lit + "\" did not round-trip");
    }
}

void trainer_matches_oracle() {
    const std::vector<std::string> pool = {"play", "playing", "day",  "way",  "plow",
                                           "plug", "stay",    "some", "tide", "ebb"};
    std::mt19937 rng(24601);

    for (int trial = 0; trial < 25; ++trial) {
        // Up to 100 words spread over a few documents.
        std::vector<std::string> corpus;
        std::size_t docs = 1 + rng() % 3;
        std::size_t words = 10 + rng() % 91;
        for (std::size_t d = 0; d < docs; ++d) corpus.emplace_back();
        for (std::size_t w = 0; w < words; ++w) {
            std::string& doc = corpus[rng() % docs];
            if (!doc.empty()) doc += ' ';
            doc += pool[rng() % pool.size()];
        }

        bool byte_level = trial % 2 == 0;
        TrainConfig config;
        config.mode = byte_level ? TokenizerMode::ByteLevel : TokenizerMode::CharLevel;
        std::size_t target = (byte_level ? 256 : 20) + rng() % 16;

        auto expected = oracle::train(corpus, target, byte_level);
        auto actual = train_bpe(corpus, target, config);

        expect(actual.merges.size() == expected.merges.size(),
               "trial " + std::to_string(trial) + ": merge count " +
                   std::to_string(actual.merges.size()) + " != oracle " +
                   std::to_string(expected.merges.size()));
        for (std::size_t i = 0; i < expected.merges.size(); ++i) {
            const auto& pair = actual.merges.at(static_cast<int>(i));
            expect(pair.left == expected.merges[i].first &&
                       pair.right == expected.merges[i].second,
                   "trial " + std::to_string(trial) + ": merge " + std::to_string(i) +
                       " is (" + pair.left + "," + pair.right + "), oracle has (" +
                       expected.merges[i].first + "," + expected.merges[i].second + ")");
        }
        auto entries = actual.vocab.entries_by_id();
        expect(entries.size() == expected.tokens.size(),
               "trial " + std::to_string(trial) + ": vocabulary size mismatch");
        for (std::size_t i = 0; i < entries.size(); ++i)
            expect(entries[i].second == expected.tokens[i],
                   "trial " + std::to_string(trial) + ": token " + std::to_string(i) +
                       " mismatch");
    }

    // The worked example: (a,y) merges first, and "play" ends up one token.
    std::vector<std::string> corpus;
    auto repeat = [&](const char* w, int n) {
        for (int i = 0; i < n; ++i) corpus.push_back(w);
    };
    repeat("play", 10);
    repeat("playing", 5);
    repeat("day", 20);
    repeat("way", 20);
    repeat("plow", 12);
    repeat("plug", 12);
    TrainConfig config;
    config.mode = TokenizerMode::CharLevel;
    auto result = train_bpe(corpus, 16, config);
    expect(result.merges.size() >= 1, "no merges learned from the worked example");
    expect(result.merges.at(0).left == "a" && result.merges.at(0).right == "y",
           "first merge is (" + result.merges.at(0).left + "," + result.merges.at(0).right +
               "), expected (a,y)");
    expect(result.vocab.id_of("play").has_value(), "\"play\" never became a token");

    BpeConfig tok_config;
    tok_config.mode = TokenizerMode::CharLevel;
    BpeTokenizer trained(std::move(result.vocab), std::move(result.merges), tok_config);
    expect(testsupport::encode_checked(trained, "play").pieces.size() == 1,
           "\"play\" does not encode to a single token");
}

void byte_roundtrip_property() {
    const auto& tok = testsupport::r50k_passthrough();
    std::mt19937 rng(555);
    for (int trial = 0; trial < 10'000; ++trial) {
        std::string raw;
        std::size_t len = rng() % 64;
        for (std::size_t i = 0; i < len; ++i) raw.push_back(static_cast<char>(rng() & 0xFF));
        // encode_checked also enforces the span-tiling invariant on every call.
        auto enc = testsupport::encode_checked(tok, raw);
        expect(tok.decode(enc.ids()) == raw,
               "byte string of length " + std::to_string(raw.size()) + " did not round-trip");
    }
}

void deterministic_reports() {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() /
                   ("tokaudit_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(dir);

    std::string common = "--vocab '" + testpaths::r50k_vocab() + "' --merges '" +
                         testpaths::r50k_merges() + "' --wisdm '" + testpaths::wisdm_fixture() +
                         "'";
    fs::path first = dir / "audit_1.json";
    fs::path second = dir / "audit_2.json";
    expect(run_cli("audit " + common + " --out '" + first.string() + "'") == 0,
           "first audit run did not exit 0");
    expect(run_cli("audit " + common + " --out '" + second.string() + "'") == 0,
           "second audit run did not exit 0");

    std::string a = read_file(first.string());
    std::string b = read_file(second.string());
    expect(!a.empty(), "audit report is empty");
    expect(a == b, "audit reports differ between runs");
}

} // namespace

int main() {
    criterion(1, "golden id sequences match and invert in under a second", golden_sequences);
    criterion(2, "comma-space lists chunk 480..482 as {1, 2, 2} with an inconsistency",
              digit_chunking_witness);
    criterion(3, "case and trailing-space probes trigger", case_and_whitespace_probes);
    criterion(4, "the 200-row sensor batch fragments timestamps and merges signs",
              sensor_batch_audit);
    criterion(5, "the digit-level tokenizer is consistent across two million integers",
              numeric_remediation);
    criterion(6, "training reproduces the brute-force merge oracle on 25 corpora",
              trainer_matches_oracle);
    criterion(7, "byte-level encoding round-trips ten thousand random byte strings",
              byte_roundtrip_property);
    criterion(8, "repeated audit runs emit byte-identical reports", deterministic_reports);

    if (failures == 0) std::printf("all 8 criteria passed\n");
    else std::printf("%d of 8 criteria FAILED\n", failures);
    return failures == 0 ? 0 : 1;
}
