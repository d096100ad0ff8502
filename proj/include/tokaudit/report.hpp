#pragma once

#include "tokaudit/audit.hpp"

#include <nlohmann/json.hpp>

#include <string>
#include <string_view>

namespace tokaudit {

// Deterministic JSON: fixed key order, no timestamps unless `stamp` is set.
nlohmann::ordered_json report_to_json(const AuditReport& report, std::string_view stamp = {});

nlohmann::ordered_json profile_to_json(const IntegerChunkingProfile& profile);
nlohmann::ordered_json profile_to_json(const YearCoverageProfile& profile);
nlohmann::ordered_json divergence_to_json(const DivergenceReport& report);
nlohmann::ordered_json encoding_to_json(const Encoding& enc, const Tokenizer& tok);

std::string render_markdown(const AuditReport& report);
std::string render_plain(const AuditReport& report);

// dump() with invalid UTF-8 replaced, two-space indent, trailing newline.
std::string to_json_text(const nlohmann::ordered_json& j);

} // namespace tokaudit
