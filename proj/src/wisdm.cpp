#include "tokaudit/wisdm.hpp"

#include "tokaudit/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace tokaudit {

namespace {

constexpr const char* kFieldNames[6] = {"participant", "activity", "timestamp", "x", "y", "z"};

[[noreturn]] void field_error(std::size_t line, int field, std::string_view value,
                              const std::string& what) {
    throw ParseError("line " + std::to_string(line) + ": field " + std::to_string(field) + " (" +
                     kFieldNames[field - 1] + "): \"" + std::string(value) + "\" " + what);
}

template <class T>
T parse_number(std::size_t line, int field, std::string_view value, const char* kind) {
    T out{};
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc() || ptr != value.data() + value.size())
        field_error(line, field, value, std::string("is not ") + kind);
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    return s;
}

} // namespace

std::vector<SensorRow> parse_rows(std::string_view text) {
    std::vector<SensorRow> rows;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        std::string_view line =
            text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;

        line = trim(line);
        if (!line.empty() && line.back() == ';') line = trim(line.substr(0, line.size() - 1));
        if (line.empty()) continue;

        std::vector<std::string_view> fields;
        std::size_t start = 0;
        while (true) {
            std::size_t comma = line.find(',', start);
            fields.push_back(line.substr(start, comma == std::string_view::npos
                                                    ? std::string_view::npos
                                                    : comma - start));
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        if (fields.size() != 6)
            throw ParseError("line " + std::to_string(line_no) +
                             ": expected 6 comma-separated fields, got " +
                             std::to_string(fields.size()));

        SensorRow row;
        row.participant = parse_number<int>(line_no, 1, fields[0], "an integer");
        if (fields[1].empty()) field_error(line_no, 2, fields[1], "is empty");
        row.activity = std::string(fields[1]);
        row.timestamp = parse_number<long long>(line_no, 3, fields[2], "an integer");
        if (row.timestamp < 0) field_error(line_no, 3, fields[2], "must be non-negative");
        row.x = parse_number<double>(line_no, 4, fields[3], "a number");
        row.y = parse_number<double>(line_no, 5, fields[4], "a number");
        row.z = parse_number<double>(line_no, 6, fields[5], "a number");
        for (int f = 4; f <= 6; ++f) {
            double v = f == 4 ? row.x : f == 5 ? row.y : row.z;
            if (!std::isfinite(v))
                field_error(line_no, f, fields[static_cast<std::size_t>(f - 1)], "is not finite");
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<SensorRow> parse_rows_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open sensor data file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_rows(buf.str());
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what());
    }
}

std::vector<SensorRow> downsample(const std::vector<SensorRow>& rows, std::size_t k) {
    if (k == 0) throw std::invalid_argument("downsample: k must be positive");
    std::vector<SensorRow> out;
    out.reserve((rows.size() + k - 1) / k);
    for (std::size_t i = 0; i < rows.size(); i += k) out.push_back(rows[i]);
    return out;
}

std::vector<SensorRow> aggregate(const std::vector<SensorRow>& rows, std::size_t window,
                                 AggregateStat stat, bool strict) {
    if (window == 0) throw std::invalid_argument("aggregate: window must be positive");
    std::vector<SensorRow> out;
    out.reserve((rows.size() + window - 1) / window);

    for (std::size_t begin = 0; begin < rows.size(); begin += window) {
        std::size_t end = std::min(begin + window, rows.size());
        SensorRow agg = rows[begin];
        double sx = 0, sy = 0, sz = 0;
        for (std::size_t i = begin; i < end; ++i) {
            const SensorRow& r = rows[i];
            if (strict && r.activity != agg.activity)
                throw IntegrityError("aggregate: window " + std::to_string(begin / window) +
                                     ": mixed activity labels \"" + agg.activity + "\" and \"" +
                                     r.activity + "\"");
            switch (stat) {
                case AggregateStat::Mean:
                    sx += r.x; sy += r.y; sz += r.z;
                    break;
                case AggregateStat::Min:
                    agg.x = std::min(agg.x, r.x);
                    agg.y = std::min(agg.y, r.y);
                    agg.z = std::min(agg.z, r.z);
                    break;
                case AggregateStat::Max:
                    agg.x = std::max(agg.x, r.x);
                    agg.y = std::max(agg.y, r.y);
                    agg.z = std::max(agg.z, r.z);
                    break;
            }
        }
        if (stat == AggregateStat::Mean) {
            double n = static_cast<double>(end - begin);
            agg.x = sx / n;
            agg.y = sy / n;
            agg.z = sz / n;
        }
        out.push_back(std::move(agg));
    }
    return out;
}

std::vector<SensorRow> round_values(const std::vector<SensorRow>& rows, int decimals) {
    if (decimals < 0 || decimals > 15)
        throw std::invalid_argument("round_values: decimals must be in [0, 15]");
    double factor = std::pow(10.0, decimals);
    auto round_one = [&](double v) {
        double r = std::round(v * factor) / factor; // std::round: half away from zero
        return r == 0.0 ? 0.0 : r;                  // normalize -0
    };
    std::vector<SensorRow> out = rows;
    for (auto& r : out) {
        r.x = round_one(r.x);
        r.y = round_one(r.y);
        r.z = round_one(r.z);
    }
    return out;
}

std::string format_value(double v, int decimals) {
    if (decimals < 0) {
        char buf[32];
        auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
        if (ec != std::errc()) throw std::invalid_argument("format_value: value not representable");
        return std::string(buf, ptr);
    }
    char buf[64];
    int n = std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    if (n < 0 || n >= static_cast<int>(sizeof buf))
        throw std::invalid_argument("format_value: value not representable");
    return std::string(buf, static_cast<std::size_t>(n));
}

namespace {

std::string field_value(const SensorRow& row, std::string_view name, int decimals) {
    if (name == "participant") return std::to_string(row.participant);
    if (name == "activity") return row.activity;
    if (name == "timestamp") return std::to_string(row.timestamp);
    if (name == "x") return format_value(row.x, decimals);
    if (name == "y") return format_value(row.y, decimals);
    if (name == "z") return format_value(row.z, decimals);
    throw std::invalid_argument("serialize: unknown placeholder \"{" + std::string(name) + "}\"");
}

} // namespace

SerializedBatch serialize(const std::vector<SensorRow>& rows, const SerializeOptions& opts) {
    if (rows.empty()) throw std::invalid_argument("serialize: row list is empty");
    SerializedBatch batch;

    auto emit_field = [&](std::size_t row, std::string_view name, const std::string& value) {
        std::size_t begin = batch.text.size();
        batch.text += value;
        batch.field_spans.push_back({row, std::string(name), {begin, batch.text.size()}});
    };

    if (opts.tmpl == SerializeTemplate::RawCsv) {
        for (std::size_t i = 0; i < rows.size(); ++i) {
            for (int f = 0; f < 6; ++f) {
                if (f > 0) batch.text += ',';
                emit_field(i, kFieldNames[f], field_value(rows[i], kFieldNames[f], opts.decimals));
            }
            batch.text += ";\n";
        }
        return batch;
    }

    if (!opts.preamble.empty()) batch.text += opts.preamble + "\n";
    const std::string& tmpl = opts.row_template;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        std::size_t pos = 0;
        while (pos < tmpl.size()) {
            std::size_t open = tmpl.find('{', pos);
            if (open == std::string::npos) {
                batch.text.append(tmpl, pos, std::string::npos);
                break;
            }
            batch.text.append(tmpl, pos, open - pos);
            std::size_t close = tmpl.find('}', open);
            if (close == std::string::npos)
                throw std::invalid_argument("serialize: unclosed placeholder in row template");
            std::string_view name = std::string_view(tmpl).substr(open + 1, close - open - 1);
            emit_field(i, name, field_value(rows[i], name, opts.decimals));
            pos = close + 1;
        }
        batch.text += '\n';
    }
    return batch;
}

std::string field_spans_to_json(const std::vector<FieldSpan>& spans) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& s : spans) {
        arr.push_back({{"row", s.row},
                       {"field", s.field},
                       {"start", s.span.begin},
                       {"end", s.span.end}});
    }
    return arr.dump(2) + "\n";
}

std::vector<FieldSpan> field_spans_from_json(std::string_view json_text) {
    nlohmann::json arr;
    try {
        arr = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("field span JSON: ") + e.what());
    }
    if (!arr.is_array()) throw ParseError("field span JSON: top-level value must be an array");
    std::vector<FieldSpan> out;
    out.reserve(arr.size());
    for (const auto& item : arr) {
        if (!item.is_object() || !item.contains("row") || !item.contains("field") ||
            !item.contains("start") || !item.contains("end") ||
            !item["row"].is_number_unsigned() || !item["field"].is_string() ||
            !item["start"].is_number_unsigned() || !item["end"].is_number_unsigned())
            throw ParseError("field span JSON: entries must be {row, field, start, end}");
        FieldSpan span;
        span.row = item["row"].get<std::size_t>();
        span.field = item["field"].get<std::string>();
        span.span.begin = item["start"].get<std::size_t>();
        span.span.end = item["end"].get<std::size_t>();
        if (span.span.end < span.span.begin)
            throw ParseError("field span JSON: end precedes start");
        out.push_back(std::move(span));
    }
    return out;
}

} // namespace tokaudit
