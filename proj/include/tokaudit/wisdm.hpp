#pragma once

#include "tokaudit/encoding.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace tokaudit {

// One accelerometer sample: "participant,activity,timestamp,x,y,z;".
struct SensorRow {
    int participant = 0;
    std::string activity;
    long long timestamp = 0; // nanoseconds since boot in the raw data; >= 0
    double x = 0;
    double y = 0;
    double z = 0;

    bool operator==(const SensorRow&) const = default;
};

// Parses raw rows. The trailing semicolon is optional, blank lines are
// skipped, and errors name the 1-based line and the offending field.
std::vector<SensorRow> parse_rows(std::string_view text);
std::vector<SensorRow> parse_rows_file(const std::string& path);

// Keeps rows 0, k, 2k, ... Throws std::invalid_argument when k == 0.
std::vector<SensorRow> downsample(const std::vector<SensorRow>& rows, std::size_t k);

enum class AggregateStat { Mean, Min, Max };

// Collapses consecutive non-overlapping windows of `window` rows into one row
// each (a short trailing window is kept). The statistic applies to x/y/z;
// participant, activity and timestamp come from the first row of the window.
// Mixed activity labels within a window throw IntegrityError under strict
// mode and keep the first label otherwise.
std::vector<SensorRow> aggregate(const std::vector<SensorRow>& rows, std::size_t window,
                                 AggregateStat stat, bool strict = true);

// Rounds x/y/z to `decimals` places, half away from zero.
std::vector<SensorRow> round_values(const std::vector<SensorRow>& rows, int decimals);

// Shortest round-trip formatting when decimals < 0, fixed point otherwise.
std::string format_value(double v, int decimals = -1);

enum class SerializeTemplate { RawCsv, LabeledPrompt };

struct FieldSpan {
    std::size_t row = 0;
    std::string field; // participant | activity | timestamp | x | y | z
    ByteSpan span;

    bool operator==(const FieldSpan&) const = default;
};

struct SerializedBatch {
    std::string text;
    std::vector<FieldSpan> field_spans;
};

struct SerializeOptions {
    SerializeTemplate tmpl = SerializeTemplate::RawCsv;
    int decimals = -1;      // -1: shortest round-trip formatting
    std::string preamble;   // LabeledPrompt: emitted once, followed by a newline
    std::string row_template = "participant {participant} doing {activity} at t={timestamp}: "
                               "x={x} y={y} z={z};"; // LabeledPrompt only
};

// Renders rows to text and records the byte span of every substituted field.
// RawCsv reproduces the raw format byte for byte (modulo formatting options).
// Unknown or unclosed placeholders in the row template throw
// std::invalid_argument, as does an empty row list.
SerializedBatch serialize(const std::vector<SensorRow>& rows, const SerializeOptions& opts = {});

// Sidecar representation: a JSON array of {row, field, start, end}.
std::string field_spans_to_json(const std::vector<FieldSpan>& spans);
std::vector<FieldSpan> field_spans_from_json(std::string_view json_text);

} // namespace tokaudit
