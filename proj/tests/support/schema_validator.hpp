#pragma once

// Minimal structural validator for the subset of JSON Schema the shipped
// report schema uses: type (string or list), required, properties, items,
// enum. Plus the repo-specific "result_schemas" dispatch on result.type.

#include <string>
#include <vector>

#include <json.hpp>

namespace shapetest::testing {

inline bool type_matches(const nlohmann::json& value, const std::string& type) {
    if (type == "object") return value.is_object();
    if (type == "array") return value.is_array();
    if (type == "string") return value.is_string();
    if (type == "number") return value.is_number();
    if (type == "integer") return value.is_number_integer() || value.is_number_unsigned();
    if (type == "boolean") return value.is_boolean();
    if (type == "null") return value.is_null();
    return false;
}

inline void validate_subset(const nlohmann::json& value, const nlohmann::json& schema,
                            const std::string& where, std::vector<std::string>& errors) {
    if (schema.contains("type")) {
        const nlohmann::json& t = schema["type"];
        bool ok = false;
        if (t.is_string()) {
            ok = type_matches(value, t.get<std::string>());
        } else {
            for (const auto& option : t)
                if (type_matches(value, option.get<std::string>())) ok = true;
        }
        if (!ok) errors.push_back(where + ": wrong type, got " + std::string(value.type_name()));
    }
    if (schema.contains("enum")) {
        bool ok = false;
        for (const auto& option : schema["enum"])
            if (option == value) ok = true;
        if (!ok) errors.push_back(where + ": value not in enum");
    }
    if (value.is_object()) {
        if (schema.contains("required"))
            for (const auto& key : schema["required"])
                if (!value.contains(key.get<std::string>()))
                    errors.push_back(where + ": missing required key " + key.get<std::string>());
        if (schema.contains("properties"))
            for (auto it = schema["properties"].begin(); it != schema["properties"].end(); ++it)
                if (value.contains(it.key()))
                    validate_subset(value[it.key()], it.value(), where + "." + it.key(), errors);
    }
    if (value.is_array() && schema.contains("items"))
        for (std::size_t i = 0; i < value.size(); ++i)
            validate_subset(value[i], schema["items"], where + "[" + std::to_string(i) + "]",
                            errors);
}

// Validates a full report document: the envelope, then the payload against
// the schema entry selected by result.type.
inline std::vector<std::string> validate_report(const nlohmann::json& doc,
                                                const nlohmann::json& schema) {
    std::vector<std::string> errors;
    validate_subset(doc, schema, "$", errors);
    if (doc.contains("result") && doc["result"].is_object() &&
        doc["result"].contains("type")) {
        const std::string type = doc["result"]["type"].get<std::string>();
        if (schema.contains("result_schemas") && schema["result_schemas"].contains(type))
            validate_subset(doc["result"], schema["result_schemas"][type], "$.result", errors);
        else
            errors.push_back("$.result: unknown result type " + type);
    }
    return errors;
}

}  // namespace shapetest::testing
