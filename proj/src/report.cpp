#include "tokaudit/report.hpp"

#include <sstream>

namespace tokaudit {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json span_to_json(const ByteSpan& span) {
    return ordered_json::array({span.begin, span.end});
}

ordered_json tokens_to_json(const std::vector<EvidenceToken>& tokens) {
    ordered_json arr = ordered_json::array();
    for (const auto& t : tokens)
        arr.push_back({{"id", t.id}, {"text", t.text}, {"span", span_to_json(t.span)}});
    return arr;
}

ordered_json finding_to_json(const Finding& f) {
    ordered_json j;
    j["pitfall"] = std::string(pitfall_name(f.pitfall));
    j["subject"] = f.subject;
    j["severity"] = f.triggered ? "triggered" : "clean";
    j["note"] = f.note;
    ordered_json metrics = ordered_json::object();
    for (const auto& [key, value] : f.metrics) metrics[key] = value;
    j["metrics"] = metrics;
    j["tokens"] = tokens_to_json(f.tokens);
    return j;
}

ordered_json alignment_to_json(const AlignmentMetrics& m) {
    return {{"boundary_alignment", m.boundary_alignment},
            {"tokens_per_field_mean", m.tokens_per_field_mean},
            {"tokens_per_field_max", m.tokens_per_field_max},
            {"sign_merge_count", m.sign_merge_count}};
}

const char* severity_of(const Finding& f) { return f.triggered ? "triggered" : "clean"; }

} // namespace

ordered_json report_to_json(const AuditReport& report, std::string_view stamp) {
    ordered_json j;
    j["tool"] = "tokaudit";
    j["tokenizer"] = report.tokenizer;
    j["text_size"] = report.text_size;
    ordered_json findings = ordered_json::array();
    for (const auto& f : report.findings) findings.push_back(finding_to_json(f));
    j["findings"] = findings;
    if (report.alignment) j["alignment"] = alignment_to_json(*report.alignment);
    if (!report.per_field.empty()) {
        ordered_json arr = ordered_json::array();
        for (const auto& s : report.per_field)
            arr.push_back({{"field", s.field},
                           {"count", s.count},
                           {"fragmented", s.fragmented},
                           {"tokens_mean", s.tokens_mean},
                           {"tokens_max", s.tokens_max}});
        j["per_field"] = arr;
    }
    if (!stamp.empty()) j["stamp"] = std::string(stamp);
    return j;
}

ordered_json profile_to_json(const IntegerChunkingProfile& p) {
    ordered_json j;
    j["lo"] = p.lo;
    j["hi"] = p.hi;
    j["format"] = p.format == IntegerFormat::Plain ? "plain" : "comma-space-list";
    j["count"] = p.token_counts.size();
    j["fraction_single_token"] = p.fraction_single_token;
    j["adjacent_inconsistency"] = p.adjacent_inconsistency;
    ordered_json runs = ordered_json::array();
    for (const auto& [a, b] : p.single_token_runs) runs.push_back(ordered_json::array({a, b}));
    j["single_token_runs"] = runs;
    if (p.token_counts.size() <= 1000) j["token_counts"] = p.token_counts;
    return j;
}

ordered_json profile_to_json(const YearCoverageProfile& p) {
    ordered_json j;
    j["lo"] = p.lo;
    j["hi"] = p.hi;
    j["count"] = p.token_counts.size();
    j["fraction_single_token"] = p.fraction_single_token;
    if (p.token_counts.size() <= 1000) j["token_counts"] = p.token_counts;
    return j;
}

ordered_json divergence_to_json(const DivergenceReport& r) {
    ordered_json j;
    j["texts"] = r.texts;
    j["id_mismatches"] = r.id_mismatches;
    j["span_mismatches"] = r.span_mismatches;
    j["divergence"] = r.divergence;
    j["differing"] = r.differing;
    return j;
}

ordered_json encoding_to_json(const Encoding& enc, const Tokenizer& tok) {
    ordered_json j;
    j["ids"] = enc.ids();
    ordered_json tokens = ordered_json::array();
    for (const auto& p : enc.pieces)
        tokens.push_back(
            {{"id", p.id}, {"text", tok.token_text(p.id)}, {"span", span_to_json(p.span)}});
    j["tokens"] = tokens;
    return j;
}

std::string to_json_text(const ordered_json& j) {
    return j.dump(2, ' ', false, nlohmann::json::error_handler_t::replace) + "\n";
}

std::string render_markdown(const AuditReport& report) {
    std::ostringstream out;
    out << "# Tokenization audit\n\n";
    out << "- tokenizer: `" << report.tokenizer << "`\n";
    out << "- text size: " << report.text_size << " bytes\n";
    if (report.alignment) {
        const auto& m = *report.alignment;
        out << "- boundary alignment: " << m.boundary_alignment << "\n";
        out << "- tokens per field: mean " << m.tokens_per_field_mean << ", max "
            << m.tokens_per_field_max << "\n";
        out << "- sign merges: " << m.sign_merge_count << "\n";
    }
    out << "\n## Findings\n\n";
    out << "| pitfall | severity | subject | note |\n";
    out << "|---|---|---|---|\n";
    for (const auto& f : report.findings) {
        std::string note = f.note;
        for (auto& c : note)
            if (c == '|' || c == '\n') c = ' ';
        std::string subject = f.subject;
        for (auto& c : subject)
            if (c == '|' || c == '\n') c = ' ';
        out << "| " << pitfall_name(f.pitfall) << " | " << severity_of(f) << " | `" << subject
            << "` | " << note << " |\n";
    }
    if (!report.per_field.empty()) {
        out << "\n## Fields\n\n";
        out << "| field | count | fragmented | tokens (mean) | tokens (max) |\n";
        out << "|---|---|---|---|---|\n";
        for (const auto& s : report.per_field)
            out << "| " << s.field << " | " << s.count << " | " << s.fragmented << " | "
                << s.tokens_mean << " | " << s.tokens_max << " |\n";
    }
    return out.str();
}

std::string render_plain(const AuditReport& report) {
    std::ostringstream out;
    out << "tokenizer: " << report.tokenizer << "\n";
    out << "text size: " << report.text_size << "\n";
    if (report.alignment) {
        const auto& m = *report.alignment;
        out << "boundary alignment: " << m.boundary_alignment << "\n";
        out << "tokens per field: mean " << m.tokens_per_field_mean << ", max "
            << m.tokens_per_field_max << "\n";
        out << "sign merges: " << m.sign_merge_count << "\n";
    }
    for (const auto& f : report.findings)
        out << severity_of(f) << "  " << pitfall_name(f.pitfall) << "  " << f.subject << "  "
            << f.note << "\n";
    for (const auto& s : report.per_field)
        out << "field " << s.field << ": count " << s.count << ", fragmented " << s.fragmented
            << ", tokens mean " << s.tokens_mean << ", max " << s.tokens_max << "\n";
    return out.str();
}

} // namespace tokaudit
