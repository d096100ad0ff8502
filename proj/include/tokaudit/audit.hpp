#pragma once

#include "tokaudit/tokenizer.hpp"
#include "tokaudit/wisdm.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace tokaudit {

enum class Pitfall {
    Case,
    Whitespace,
    DigitChunking,
    FloatFragmentation,
    SignMerge,
    DateCoverage,
    Divergence,
};

// Stable identifiers used in reports.
std::string_view pitfall_name(Pitfall p);

struct EvidenceToken {
    TokenId id = 0;
    std::string text; // raw token text
    ByteSpan span;

    bool operator==(const EvidenceToken&) const = default;
};

struct Finding {
    Pitfall pitfall = Pitfall::Case;
    std::string subject; // the probed text or range
    std::vector<EvidenceToken> tokens;
    bool triggered = false;
    std::string note;
    std::vector<std::pair<std::string, double>> metrics; // ordered numeric extras
};

// Re-encodes the word with its first character's ASCII case flipped and
// reports whether the id sequences differ. Words with no case variant are
// clean with an explanatory note. Pre: word non-empty.
Finding probe_case(const Tokenizer& tok, std::string_view word);

// Compares encode(text) with encode(text + " "). Any change to the token
// stream triggers; the note records whether the space merely appended a token
// or rewrote earlier ones. Empty text is clean with a note.
Finding probe_whitespace(const Tokenizer& tok, std::string_view text);

enum class IntegerFormat {
    Plain,          // each integer encoded on its own
    CommaSpaceList, // the whole range serialized as "a, b, c"; per-integer
                    // counts use span overlap
};

struct IntegerChunkingProfile {
    long long lo = 0;
    long long hi = 0;
    IntegerFormat format = IntegerFormat::Plain;
    std::vector<int> token_counts; // one per integer, lo..hi
    double fraction_single_token = 0;
    // Consecutive pairs with equal digit count and sign whose token counts or
    // chunk-length sequences differ.
    long long adjacent_inconsistency = 0;
    std::vector<std::pair<long long, long long>> single_token_runs; // inclusive
};

// Sweeps [lo, hi]. Pre: lo <= hi and the range is at most max_range wide.
IntegerChunkingProfile scan_integers(const Tokenizer& tok, long long lo, long long hi,
                                     IntegerFormat format = IntegerFormat::Plain,
                                     std::size_t max_range = 1'000'000);

// Pre: literal matches '-'? digits ('.' digits)?. Triggered when it encodes
// to more than one token.
Finding analyze_float(const Tokenizer& tok, std::string_view literal);

// Flags tokens whose text spans both a separator (comma, semicolon or space)
// and a minus sign that is immediately followed by a digit in the source.
Finding detect_sign_merges(const Tokenizer& tok, std::string_view text);

struct YearCoverageProfile {
    int lo = 0;
    int hi = 0;
    std::vector<int> token_counts; // per year, counted over the year's span
    double fraction_single_token = 0;
};

// Sweeps years in running-text context (a leading space before the digits),
// counting the tokens that overlap each year. Pre: 0 <= lo <= hi, range at
// most 100000 wide.
YearCoverageProfile scan_years(const Tokenizer& tok, int lo, int hi);

struct DivergenceReport {
    std::size_t texts = 0;
    std::size_t id_mismatches = 0;
    std::size_t span_mismatches = 0;
    double divergence = 0; // fraction of texts whose encodings differ at all
    std::vector<std::size_t> differing; // indices into the corpus
};

DivergenceReport compare_tokenizers(const Tokenizer& a, const Tokenizer& b,
                                    const std::vector<std::string>& corpus);

struct AlignmentMetrics {
    // Fraction of field endpoints that coincide with token boundaries.
    double boundary_alignment = 1.0;
    double tokens_per_field_mean = 0;
    int tokens_per_field_max = 0;
    long long sign_merge_count = 0; // over the whole encoding
};

// Pre: every field span lies within [0, text.size()]. Results do not depend
// on the order of the field list.
AlignmentMetrics alignment_metrics(const Encoding& enc, std::string_view text,
                                   const std::vector<FieldSpan>& fields);

// Tokens-per-field statistics grouped by field name, to show which columns
// fragment worst.
struct FieldKindStats {
    std::string field;
    std::size_t count = 0;      // fields with this name
    std::size_t fragmented = 0; // fields split across >= 2 tokens
    double tokens_mean = 0;
    int tokens_max = 0;
};

struct AuditReport {
    std::string tokenizer;
    std::size_t text_size = 0;
    std::vector<Finding> findings;
    std::optional<AlignmentMetrics> alignment;
    std::vector<FieldKindStats> per_field;
};

bool any_triggered(const AuditReport& report);

// Full sweep over one text: a case probe on its first word, a whitespace
// probe, a fragmentation finding per distinct numeric literal (first
// occurrence), a sign-merge scan, and alignment metrics when field spans are
// supplied.
AuditReport run_audit(const Tokenizer& tok, std::string_view text,
                      const std::vector<FieldSpan>& fields = {});

} // namespace tokaudit
