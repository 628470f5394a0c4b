#pragma once

// Declarative document schemas and the mapping from documents to attribute
// vectors. Positions 1 and 2 are reserved (wallet id hash, serial); schema
// fields follow in declaration order from position 3.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "zkfaith/commitment.hpp"

namespace zkfaith {

enum class FieldType { text, integer, date };
const char* to_string(FieldType t);

struct FieldSpec {
    std::string name;
    FieldType type = FieldType::text;
    bool required = true;
    bool range = false;  // may appear in a range predicate
};

struct Schema {
    std::string id;
    std::uint32_t version = 1;
    std::vector<FieldSpec> fields;
    std::optional<std::string> expiry_field;

    std::uint32_t length() const { return static_cast<std::uint32_t>(fields.size()) + 2; }
    // SchemaError for unknown names.
    std::uint32_t position(std::string_view field) const;
    const FieldSpec& field(std::string_view name) const;
    const FieldSpec& at_position(std::uint32_t pos) const;

    static Schema from_json(std::string_view text);
};

class SchemaRegistry {
public:
    void add(Schema s);
    const Schema& get(std::string_view id) const;  // SchemaError if unknown
    bool contains(std::string_view id) const;
    std::vector<std::string> ids() const;

    // Every *.json file in the directory.
    static SchemaRegistry load_dir(const std::filesystem::path& dir);
    // The schemas shipped with the sources.
    static const SchemaRegistry& builtin();

private:
    std::map<std::string, Schema, std::less<>> schemas_;
};

// ---- calendar: dates are signed day counts since 1970-01-01

std::int64_t parse_date(std::string_view iso);  // SchemaError on malformed input
std::string format_date(std::int64_t days);
std::int64_t today_days();
// Same calendar day `years` earlier (Feb 29 falls back to Feb 28).
std::int64_t years_before(std::int64_t days, int years);

// ---- documents

using FieldValue = std::variant<std::int64_t, std::string>;

struct Document {
    std::string schema_id;
    std::string wid;
    std::map<std::string, FieldValue> fields;

    Bytes digest() const;
    // {"schema": ..., "wid": ..., "fields": {...}}; dates as "YYYY-MM-DD".
    static Document from_json(std::string_view text, const SchemaRegistry& reg);
};

struct Validation {
    bool ok = true;
    std::string problem;
};
// Presence, types and (when the schema names one) an expiry date after today.
Validation validate(const Document& doc, const Schema& schema, std::int64_t today);

Scalar wid_scalar(const PublicParams& pp, std::string_view wid);
Scalar field_scalar(const PublicParams& pp, const FieldSpec& spec, const FieldValue& v);

// Serial slot left at zero. SchemaError when a field does not fit the schema.
AttributeVector encode_attributes(const PublicParams& pp, const Document& doc, const Schema& schema);

}  // namespace zkfaith
