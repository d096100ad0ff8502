#include "tokaudit/audit.hpp"

#include "tokaudit/pretokenize.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

namespace tokaudit {

namespace {

bool is_digit(char c) { return c >= '0' && c <= '9'; }

std::string join_ids(const std::vector<TokenId>& ids) {
    std::string out;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (i) out += ' ';
        out += std::to_string(ids[i]);
    }
    return out;
}

std::string subject_of(std::string_view text) {
    constexpr std::size_t kMax = 64;
    if (text.size() <= kMax) return std::string(text);
    return std::string(text.substr(0, kMax - 3)) + "...";
}

std::vector<EvidenceToken> evidence_from(const Tokenizer& tok, const Encoding& enc) {
    std::vector<EvidenceToken> out;
    out.reserve(enc.pieces.size());
    for (const auto& p : enc.pieces) out.push_back({p.id, tok.token_text(p.id), p.span});
    return out;
}

// A token is a sign merge when its text glues a separator to a minus sign
// that introduces a number in the source.
bool piece_is_sign_merge(std::string_view text, const ByteSpan& span) {
    std::string_view slice = text.substr(span.begin, span.size());
    bool has_separator = slice.find_first_of(",; ") != std::string_view::npos;
    if (!has_separator) return false;
    for (std::size_t i = 0; i < slice.size(); ++i) {
        if (slice[i] != '-') continue;
        std::size_t next = span.begin + i + 1;
        if (next < text.size() && is_digit(text[next])) return true;
    }
    return false;
}

// End of the '-'? digits ('.' digits)? literal starting at pos, or pos.
std::size_t match_decimal(std::string_view text, std::size_t pos) {
    const std::size_t n = text.size();
    std::size_t j = pos;
    if (j < n && text[j] == '-') ++j;
    std::size_t digits_start = j;
    while (j < n && is_digit(text[j])) ++j;
    if (j == digits_start) return pos;
    if (j + 1 < n && text[j] == '.' && is_digit(text[j + 1])) {
        ++j;
        while (j < n && is_digit(text[j])) ++j;
    }
    return j;
}

int count_digits(std::string_view literal) {
    int n = 0;
    for (char c : literal)
        if (is_digit(c)) ++n;
    return n;
}

// Tokens of `enc` overlapping [begin, end), as (index, overlap length).
template <class Fn>
void for_overlapping(const Encoding& enc, std::size_t begin, std::size_t end, Fn&& fn) {
    const auto& pieces = enc.pieces;
    auto it = std::lower_bound(pieces.begin(), pieces.end(), begin,
                               [](const TokenPiece& p, std::size_t v) { return p.span.end <= v; });
    for (; it != pieces.end() && it->span.begin < end; ++it) {
        std::size_t lo = std::max(it->span.begin, begin);
        std::size_t hi = std::min(it->span.end, end);
        if (hi > lo) fn(*it, hi - lo);
    }
}

} // namespace

std::string_view pitfall_name(Pitfall p) {
    switch (p) {
        case Pitfall::Case: return "case";
        case Pitfall::Whitespace: return "whitespace";
        case Pitfall::DigitChunking: return "digit-chunking";
        case Pitfall::FloatFragmentation: return "float-fragmentation";
        case Pitfall::SignMerge: return "sign-merge";
        case Pitfall::DateCoverage: return "date-coverage";
        case Pitfall::Divergence: return "divergence";
    }
    return "unknown";
}

Finding probe_case(const Tokenizer& tok, std::string_view word) {
    if (word.empty()) throw std::invalid_argument("probe_case: empty word");

    Finding f;
    f.pitfall = Pitfall::Case;
    f.subject = subject_of(word);

    std::string variant(word);
    char c = variant[0];
    if (c >= 'a' && c <= 'z') variant[0] = static_cast<char>(c - 'a' + 'A');
    else if (c >= 'A' && c <= 'Z') variant[0] = static_cast<char>(c - 'A' + 'a');

    Encoding base = tok.encode(word);
    f.tokens = evidence_from(tok, base);
    f.metrics.emplace_back("base_tokens", static_cast<double>(base.pieces.size()));

    if (variant == word) {
        f.triggered = false;
        f.note = "no ASCII case variant for the leading character; nothing to compare";
        return f;
    }

    Encoding other = tok.encode(variant);
    f.metrics.emplace_back("variant_tokens", static_cast<double>(other.pieces.size()));
    f.triggered = base.ids() != other.ids();
    f.note = "\"" + std::string(word) + "\" -> [" + join_ids(base.ids()) + "], \"" + variant +
             "\" -> [" + join_ids(other.ids()) + "]" +
             (f.triggered ? ": ids diverge on case" : ": ids agree");
    return f;
}

Finding probe_whitespace(const Tokenizer& tok, std::string_view text) {
    Finding f;
    f.pitfall = Pitfall::Whitespace;
    f.subject = subject_of(text);

    if (text.empty()) {
        f.triggered = false;
        f.note = "empty text: the comparison is degenerate";
        return f;
    }

    Encoding base = tok.encode(text);
    Encoding spaced = tok.encode(std::string(text) + " ");
    auto a = base.ids();
    auto b = spaced.ids();
    f.triggered = a != b;

    std::size_t diverge = 0;
    while (diverge < a.size() && diverge < b.size() && a[diverge] == b[diverge]) ++diverge;
    bool append_only = diverge == a.size();
    f.metrics.emplace_back("base_tokens", static_cast<double>(a.size()));
    f.metrics.emplace_back("with_space_tokens", static_cast<double>(b.size()));
    f.metrics.emplace_back("shared_prefix", static_cast<double>(diverge));

    // Evidence: the token stream from the first divergence on (capped).
    Encoding tail;
    tail.text_size = spaced.text_size;
    constexpr std::size_t kCap = 16;
    for (std::size_t i = diverge; i < spaced.pieces.size() && tail.pieces.size() < kCap; ++i)
        tail.pieces.push_back(spaced.pieces[i]);
    f.tokens = evidence_from(tok, tail);

    if (!f.triggered) f.note = "appending a trailing space leaves the token stream unchanged";
    else if (append_only)
        f.note = "a trailing space appends " + std::to_string(b.size() - a.size()) +
                 " token(s); downstream consumers see a different sequence";
    else
        f.note = "a trailing space rewrites the token stream from index " +
                 std::to_string(diverge) + " on";
    return f;
}

IntegerChunkingProfile scan_integers(const Tokenizer& tok, long long lo, long long hi,
                                     IntegerFormat format, std::size_t max_range) {
    if (lo > hi) throw std::invalid_argument("scan_integers: lo > hi");
    unsigned long long width = static_cast<unsigned long long>(hi - lo) + 1;
    if (width > max_range)
        throw std::invalid_argument("scan_integers: range of " + std::to_string(width) +
                                    " integers exceeds the guard of " + std::to_string(max_range));

    IntegerChunkingProfile profile;
    profile.lo = lo;
    profile.hi = hi;
    profile.format = format;

    std::vector<std::vector<int>> shapes;
    shapes.reserve(static_cast<std::size_t>(width));
    profile.token_counts.reserve(static_cast<std::size_t>(width));

    if (format == IntegerFormat::Plain) {
        for (long long n = lo; n <= hi; ++n) {
            Encoding enc = tok.encode(std::to_string(n));
            std::vector<int> shape;
            shape.reserve(enc.pieces.size());
            for (const auto& p : enc.pieces) shape.push_back(static_cast<int>(p.span.size()));
            profile.token_counts.push_back(static_cast<int>(enc.pieces.size()));
            shapes.push_back(std::move(shape));
        }
    } else {
        std::string text;
        std::vector<ByteSpan> spans;
        spans.reserve(static_cast<std::size_t>(width));
        for (long long n = lo; n <= hi; ++n) {
            if (n != lo) text += ", ";
            std::size_t begin = text.size();
            text += std::to_string(n);
            spans.push_back({begin, text.size()});
        }
        Encoding enc = tok.encode(text);
        for (const auto& span : spans) {
            std::vector<int> shape;
            for_overlapping(enc, span.begin, span.end,
                            [&](const TokenPiece&, std::size_t overlap) {
                                shape.push_back(static_cast<int>(overlap));
                            });
            profile.token_counts.push_back(static_cast<int>(shape.size()));
            shapes.push_back(std::move(shape));
        }
    }

    // Summary statistics.
    std::size_t singles = 0;
    for (int c : profile.token_counts)
        if (c == 1) ++singles;
    profile.fraction_single_token =
        static_cast<double>(singles) / static_cast<double>(profile.token_counts.size());

    for (long long n = lo; n < hi; ++n) {
        std::size_t i = static_cast<std::size_t>(n - lo);
        std::string a = std::to_string(n);
        std::string b = std::to_string(n + 1);
        if (count_digits(a) != count_digits(b) || (n < 0) != (n + 1 < 0)) continue;
        if (profile.token_counts[i] != profile.token_counts[i + 1] || shapes[i] != shapes[i + 1])
            ++profile.adjacent_inconsistency;
    }

    for (std::size_t i = 0; i < profile.token_counts.size();) {
        if (profile.token_counts[i] != 1) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j + 1 < profile.token_counts.size() && profile.token_counts[j + 1] == 1) ++j;
        profile.single_token_runs.emplace_back(lo + static_cast<long long>(i),
                                               lo + static_cast<long long>(j));
        i = j + 1;
    }
    return profile;
}

Finding analyze_float(const Tokenizer& tok, std::string_view literal) {
    if (literal.empty() || match_decimal(literal, 0) != literal.size())
        throw std::invalid_argument("analyze_float: \"" + std::string(literal) +
                                    "\" is not a decimal literal");

    Finding f;
    f.pitfall = Pitfall::FloatFragmentation;
    f.subject = std::string(literal);

    Encoding enc = tok.encode(literal);
    f.tokens = evidence_from(tok, enc);
    f.triggered = enc.pieces.size() > 1;
    f.metrics.emplace_back("segments", static_cast<double>(enc.pieces.size()));

    std::string segments;
    for (std::size_t i = 0; i < f.tokens.size(); ++i) {
        if (i) segments += '|';
        segments += f.tokens[i].text;
    }
    f.note = f.triggered
                 ? "literal fragments into " + std::to_string(enc.pieces.size()) +
                       " segments: " + segments
                 : "literal survives as a single token";
    return f;
}

Finding detect_sign_merges(const Tokenizer& tok, std::string_view text) {
    Finding f;
    f.pitfall = Pitfall::SignMerge;
    f.subject = subject_of(text);

    Encoding enc = tok.encode(text);
    for (const auto& p : enc.pieces)
        if (piece_is_sign_merge(text, p.span))
            f.tokens.push_back({p.id, tok.token_text(p.id), p.span});

    f.triggered = !f.tokens.empty();
    f.metrics.emplace_back("sign_merge_count", static_cast<double>(f.tokens.size()));
    f.note = f.triggered
                 ? std::to_string(f.tokens.size()) +
                       " token(s) glue a separator onto a following minus sign"
                 : "no token mixes a separator with a number's sign";
    return f;
}

YearCoverageProfile scan_years(const Tokenizer& tok, int lo, int hi) {
    if (lo < 0) throw std::invalid_argument("scan_years: years must be non-negative");
    if (lo > hi) throw std::invalid_argument("scan_years: lo > hi");
    if (hi - lo + 1 > 100000) throw std::invalid_argument("scan_years: range too wide");

    YearCoverageProfile profile;
    profile.lo = lo;
    profile.hi = hi;
    profile.token_counts.reserve(static_cast<std::size_t>(hi - lo) + 1);

    std::size_t singles = 0;
    for (int y = lo; y <= hi; ++y) {
        // Running-text context: the year follows a space, as in "in 1950".
        std::string text = " " + std::to_string(y);
        Encoding enc = tok.encode(text);
        int count = 0;
        for_overlapping(enc, 1, text.size(), [&](const TokenPiece&, std::size_t) { ++count; });
        profile.token_counts.push_back(count);
        if (count == 1) ++singles;
    }
    profile.fraction_single_token =
        static_cast<double>(singles) / static_cast<double>(profile.token_counts.size());
    return profile;
}

DivergenceReport compare_tokenizers(const Tokenizer& a, const Tokenizer& b,
                                    const std::vector<std::string>& corpus) {
    DivergenceReport report;
    report.texts = corpus.size();
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        Encoding ea = a.encode(corpus[i]);
        Encoding eb = b.encode(corpus[i]);
        bool ids_differ = ea.ids() != eb.ids();
        bool spans_differ = [&] {
            if (ea.pieces.size() != eb.pieces.size()) return true;
            for (std::size_t k = 0; k < ea.pieces.size(); ++k)
                if (ea.pieces[k].span != eb.pieces[k].span) return true;
            return false;
        }();
        if (ids_differ) ++report.id_mismatches;
        if (spans_differ) ++report.span_mismatches;
        if (ids_differ || spans_differ) report.differing.push_back(i);
    }
    report.divergence = corpus.empty() ? 0.0
                                       : static_cast<double>(report.differing.size()) /
                                             static_cast<double>(corpus.size());
    return report;
}

AlignmentMetrics alignment_metrics(const Encoding& enc, std::string_view text,
                                   const std::vector<FieldSpan>& fields) {
    for (const auto& f : fields)
        if (f.span.end < f.span.begin || f.span.end > text.size())
            throw std::invalid_argument("alignment_metrics: field span [" +
                                        std::to_string(f.span.begin) + ", " +
                                        std::to_string(f.span.end) + ") is out of range for row " +
                                        std::to_string(f.row));

    AlignmentMetrics m;
    std::unordered_set<std::size_t> boundaries{0, text.size()};
    for (const auto& p : enc.pieces) {
        boundaries.insert(p.span.begin);
        boundaries.insert(p.span.end);
    }

    for (const auto& p : enc.pieces)
        if (piece_is_sign_merge(text, p.span)) ++m.sign_merge_count;

    if (fields.empty()) return m;

    std::size_t aligned = 0;
    long long total_tokens = 0;
    for (const auto& f : fields) {
        aligned += boundaries.count(f.span.begin) + boundaries.count(f.span.end);
        int count = 0;
        for_overlapping(enc, f.span.begin, f.span.end,
                        [&](const TokenPiece&, std::size_t) { ++count; });
        total_tokens += count;
        m.tokens_per_field_max = std::max(m.tokens_per_field_max, count);
    }
    m.boundary_alignment =
        static_cast<double>(aligned) / static_cast<double>(2 * fields.size());
    m.tokens_per_field_mean =
        static_cast<double>(total_tokens) / static_cast<double>(fields.size());
    return m;
}

bool any_triggered(const AuditReport& report) {
    return std::any_of(report.findings.begin(), report.findings.end(),
                       [](const Finding& f) { return f.triggered; });
}

AuditReport run_audit(const Tokenizer& tok, std::string_view text,
                      const std::vector<FieldSpan>& fields) {
    AuditReport report;
    report.tokenizer = tok.name();
    report.text_size = text.size();

    // Case probe on the first word of the text, when there is one.
    for (const auto& pt : pretokenize_lenient(text)) {
        if (pt.kind != PreTokenKind::Word) continue;
        std::string_view word = text.substr(pt.span.begin, pt.span.size());
        if (!word.empty() && word.front() == ' ') word.remove_prefix(1);
        if (!word.empty()) report.findings.push_back(probe_case(tok, word));
        break;
    }

    report.findings.push_back(probe_whitespace(tok, text));

    // One fragmentation finding per distinct numeric literal.
    std::unordered_set<std::string> seen;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t end = match_decimal(text, pos);
        if (end == pos) {
            ++pos;
            continue;
        }
        std::string literal(text.substr(pos, end - pos));
        if (seen.insert(literal).second)
            report.findings.push_back(analyze_float(tok, literal));
        pos = end;
    }

    report.findings.push_back(detect_sign_merges(tok, text));

    if (!fields.empty()) {
        Encoding enc = tok.encode(text);
        report.alignment = alignment_metrics(enc, text, fields);

        // Per-field-name rollup, in order of first appearance.
        std::vector<FieldKindStats> stats;
        auto stats_for = [&](const std::string& name) -> FieldKindStats& {
            for (auto& s : stats)
                if (s.field == name) return s;
            stats.push_back({name, 0, 0, 0, 0});
            return stats.back();
        };
        for (const auto& f : fields) {
            int count = 0;
            for_overlapping(enc, f.span.begin, f.span.end,
                            [&](const TokenPiece&, std::size_t) { ++count; });
            FieldKindStats& s = stats_for(f.field);
            s.count += 1;
            s.fragmented += count >= 2 ? 1 : 0;
            s.tokens_mean += count; // sum for now
            s.tokens_max = std::max(s.tokens_max, count);
        }
        for (auto& s : stats)
            s.tokens_mean = s.count ? s.tokens_mean / static_cast<double>(s.count) : 0.0;
        report.per_field = std::move(stats);
    }
    return report;
}

} // namespace tokaudit
