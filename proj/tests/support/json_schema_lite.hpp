#pragma once

// Structural validator for the draft-07 subset used by the report schema:
// type, const, enum, required, properties, items, minimum, minItems, maxItems.

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

namespace schema_lite {

using nlohmann::json;

inline bool type_matches(const std::string& type, const json& value) {
    if (type == "object") return value.is_object();
    if (type == "array") return value.is_array();
    if (type == "string") return value.is_string();
    if (type == "integer") return value.is_number_integer() || value.is_number_unsigned();
    if (type == "number") return value.is_number();
    if (type == "boolean") return value.is_boolean();
    if (type == "null") return value.is_null();
    return false;
}

inline void validate(const json& schema, const json& value, const std::string& path,
                     std::vector<std::string>& errors) {
    if (schema.contains("const") && value != schema["const"])
        errors.push_back(path + ": expected const " + schema["const"].dump() + ", got " +
                         value.dump());

    if (schema.contains("enum")) {
        bool found = false;
        for (const auto& candidate : schema["enum"])
            if (value == candidate) { found = true; break; }
        if (!found) errors.push_back(path + ": " + value.dump() + " not in enum");
    }

    if (schema.contains("type") && !type_matches(schema["type"].get<std::string>(), value)) {
        errors.push_back(path + ": expected type " + schema["type"].get<std::string>() +
                         ", got " + value.dump());
        return;
    }

    if (schema.contains("minimum") && value.is_number() &&
        value.get<double>() < schema["minimum"].get<double>())
        errors.push_back(path + ": " + value.dump() + " below minimum");

    if (value.is_object()) {
        if (schema.contains("required"))
            for (const auto& key : schema["required"])
                if (!value.contains(key.get<std::string>()))
                    errors.push_back(path + ": missing required key \"" +
                                     key.get<std::string>() + "\"");
        if (schema.contains("properties"))
            for (const auto& [key, sub] : schema["properties"].items())
                if (value.contains(key)) validate(sub, value[key], path + "." + key, errors);
    }

    if (value.is_array()) {
        if (schema.contains("minItems") && value.size() < schema["minItems"].get<std::size_t>())
            errors.push_back(path + ": fewer than minItems entries");
        if (schema.contains("maxItems") && value.size() > schema["maxItems"].get<std::size_t>())
            errors.push_back(path + ": more than maxItems entries");
        if (schema.contains("items")) {
            std::size_t i = 0;
            for (const auto& item : value)
                validate(schema["items"], item, path + "[" + std::to_string(i++) + "]", errors);
        }
    }
}

inline std::vector<std::string> validate(const json& schema, const json& value) {
    std::vector<std::string> errors;
    validate(schema, value, "$", errors);
    return errors;
}

} // namespace schema_lite
