#include "zkfaith/schema.hpp"

#include <chrono>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "zkfaith/hash.hpp"

#ifndef ZKFAITH_SCHEMA_DIR
#define ZKFAITH_SCHEMA_DIR "schemas"
#endif

namespace zkfaith {

namespace {

using json = nlohmann::json;
namespace chr = std::chrono;

FieldType parse_type(const std::string& s) {
    if (s == "text") return FieldType::text;
    if (s == "integer") return FieldType::integer;
    if (s == "date") return FieldType::date;
    throw SchemaError("unknown field type '" + s + "'");
}

}  // namespace

const char* to_string(FieldType t) {
    switch (t) {
        case FieldType::text: return "text";
        case FieldType::integer: return "integer";
        case FieldType::date: return "date";
    }
    return "?";
}

// ---- Schema

std::uint32_t Schema::position(std::string_view name) const {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (fields[i].name == name) return static_cast<std::uint32_t>(i) + 3;
    }
    throw SchemaError("schema '" + id + "' has no field '" + std::string(name) + "'");
}

const FieldSpec& Schema::field(std::string_view name) const { return fields[position(name) - 3]; }

const FieldSpec& Schema::at_position(std::uint32_t pos) const {
    if (pos < 3 || pos > length()) throw SchemaError("position " + std::to_string(pos) + " is not a schema field");
    return fields[pos - 3];
}

Schema Schema::from_json(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw SchemaError(std::string("schema is not valid JSON: ") + e.what());
    }
    Schema s;
    try {
        s.id = j.at("id").get<std::string>();
        s.version = j.value("version", 1u);
        if (j.contains("expiry_field")) s.expiry_field = j["expiry_field"].get<std::string>();
        for (const auto& f : j.at("fields")) {
            FieldSpec spec;
            spec.name = f.at("name").get<std::string>();
            spec.type = parse_type(f.at("type").get<std::string>());
            spec.required = f.value("required", true);
            spec.range = f.value("range", false);
            if (spec.range && spec.type == FieldType::text) throw SchemaError("text field '" + spec.name + "' cannot be range-capable");
            s.fields.push_back(std::move(spec));
        }
    } catch (const json::exception& e) {
        throw SchemaError(std::string("malformed schema: ") + e.what());
    }
    if (s.id.empty()) throw SchemaError("schema id is empty");
    for (std::size_t a = 0; a < s.fields.size(); ++a) {
        if (s.fields[a].name == "wid" || s.fields[a].name == "serial") {
            throw SchemaError("field name '" + s.fields[a].name + "' is reserved");
        }
        for (std::size_t b = 0; b < a; ++b) {
            if (s.fields[a].name == s.fields[b].name) throw SchemaError("duplicate field '" + s.fields[a].name + "'");
        }
    }
    if (s.expiry_field && s.field(*s.expiry_field).type != FieldType::date) {
        throw SchemaError("expiry field must be a date");
    }
    return s;
}

// ---- registry

void SchemaRegistry::add(Schema s) {
    auto id = s.id;
    schemas_.insert_or_assign(std::move(id), std::move(s));
}

const Schema& SchemaRegistry::get(std::string_view id) const {
    auto it = schemas_.find(id);
    if (it == schemas_.end()) throw SchemaError("unknown schema '" + std::string(id) + "'");
    return it->second;
}

bool SchemaRegistry::contains(std::string_view id) const { return schemas_.find(id) != schemas_.end(); }

std::vector<std::string> SchemaRegistry::ids() const {
    std::vector<std::string> out;
    for (const auto& [k, v] : schemas_) out.push_back(k);
    return out;
}

SchemaRegistry SchemaRegistry::load_dir(const std::filesystem::path& dir) {
    SchemaRegistry reg;
    std::error_code ec;
    if (!std::filesystem::is_directory(dir, ec)) throw SchemaError("schema directory not found: " + dir.string());
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.path().extension() != ".json") continue;
        std::ifstream in(entry.path());
        std::stringstream ss;
        ss << in.rdbuf();
        reg.add(Schema::from_json(ss.str()));
    }
    return reg;
}

const SchemaRegistry& SchemaRegistry::builtin() {
    static const SchemaRegistry reg = load_dir(ZKFAITH_SCHEMA_DIR);
    return reg;
}

// ---- calendar

std::int64_t parse_date(std::string_view iso) {
    int y = 0;
    unsigned m = 0, d = 0;
    char dash1 = 0, dash2 = 0;
    std::istringstream in{std::string(iso)};
    in >> y >> dash1 >> m >> dash2 >> d;
    if (!in || dash1 != '-' || dash2 != '-' || in.peek() != EOF) throw SchemaError("bad date '" + std::string(iso) + "'");
    chr::year_month_day ymd{chr::year{y}, chr::month{m}, chr::day{d}};
    if (!ymd.ok()) throw SchemaError("bad date '" + std::string(iso) + "'");
    return chr::sys_days(ymd).time_since_epoch().count();
}

std::string format_date(std::int64_t days) {
    chr::year_month_day ymd{chr::sys_days(chr::days(days))};
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", int(ymd.year()), unsigned(ymd.month()), unsigned(ymd.day()));
    return buf;
}

std::int64_t today_days() {
    return chr::floor<chr::days>(chr::system_clock::now()).time_since_epoch().count();
}

std::int64_t years_before(std::int64_t days, int years) {
    chr::year_month_day ymd{chr::sys_days(chr::days(days))};
    chr::year_month_day back{ymd.year() - chr::years(years), ymd.month(), ymd.day()};
    if (!back.ok()) back = chr::year_month_day_last{back.year(), chr::month_day_last{back.month()}};
    return chr::sys_days(back).time_since_epoch().count();
}

// ---- documents

Bytes Document::digest() const {
    ByteWriter w;
    w.str(schema_id).str(wid).u32(static_cast<std::uint32_t>(fields.size()));
    for (const auto& [k, v] : fields) {
        w.str(k);
        if (const auto* i = std::get_if<std::int64_t>(&v)) {
            w.u8(1).u64(static_cast<std::uint64_t>(*i));
        } else {
            w.u8(2).str(std::get<std::string>(v));
        }
    }
    auto d = sha256(w.data());
    return Bytes(d.begin(), d.end());
}

Document Document::from_json(std::string_view text, const SchemaRegistry& reg) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw SchemaError(std::string("document is not valid JSON: ") + e.what());
    }
    Document doc;
    try {
        doc.schema_id = j.at("schema").get<std::string>();
        doc.wid = j.at("wid").get<std::string>();
        const Schema& s = reg.get(doc.schema_id);
        for (const auto& [name, v] : j.at("fields").items()) {
            const FieldSpec& spec = s.field(name);
            switch (spec.type) {
                case FieldType::text:
                    if (!v.is_string()) throw SchemaError("field '" + name + "' must be text");
                    doc.fields[name] = v.get<std::string>();
                    break;
                case FieldType::integer:
                    if (!v.is_number_integer()) throw SchemaError("field '" + name + "' must be an integer");
                    doc.fields[name] = v.get<std::int64_t>();
                    break;
                case FieldType::date:
                    if (v.is_string()) doc.fields[name] = parse_date(v.get<std::string>());
                    else if (v.is_number_integer()) doc.fields[name] = v.get<std::int64_t>();
                    else throw SchemaError("field '" + name + "' must be a date");
                    break;
            }
        }
    } catch (const json::exception& e) {
        throw SchemaError(std::string("malformed document: ") + e.what());
    }
    return doc;
}

Validation validate(const Document& doc, const Schema& schema, std::int64_t today) {
    if (doc.schema_id != schema.id) return {false, "schema id mismatch"};
    if (doc.wid.empty()) return {false, "empty wallet id"};
    for (const auto& [name, v] : doc.fields) {
        const FieldSpec* spec = nullptr;
        for (const auto& f : schema.fields) {
            if (f.name == name) spec = &f;
        }
        if (!spec) return {false, "unknown field '" + name + "'"};
        bool is_text = std::holds_alternative<std::string>(v);
        if (is_text != (spec->type == FieldType::text)) return {false, "wrong type for '" + name + "'"};
    }
    for (const auto& f : schema.fields) {
        if (f.required && !doc.fields.contains(f.name)) return {false, "missing field '" + f.name + "'"};
    }
    if (schema.expiry_field) {
        auto it = doc.fields.find(*schema.expiry_field);
        if (it == doc.fields.end()) return {false, "missing expiry"};
        if (std::get<std::int64_t>(it->second) <= today) return {false, "document expired"};
    }
    return {};
}

Scalar wid_scalar(const PublicParams& pp, std::string_view wid) {
    std::vector<Bytes> parts{to_bytes(wid)};
    return hash_to_scalar(pp, "zkfaith/attr/wid", parts);
}

Scalar field_scalar(const PublicParams& pp, const FieldSpec& spec, const FieldValue& v) {
    if (spec.type == FieldType::text) {
        const auto* s = std::get_if<std::string>(&v);
        if (!s) throw SchemaError("field '" + spec.name + "' must be text");
        std::vector<Bytes> parts{to_bytes(*s)};
        return hash_to_scalar(pp, "zkfaith/attr/text", parts);
    }
    const auto* i = std::get_if<std::int64_t>(&v);
    if (!i) throw SchemaError("field '" + spec.name + "' must be numeric");
    return Scalar::from_int(pp.group(), *i);
}

AttributeVector encode_attributes(const PublicParams& pp, const Document& doc, const Schema& schema) {
    if (doc.schema_id != schema.id) throw SchemaError("document is not a '" + schema.id + "'");
    AttributeVector M;
    M.reserve(schema.length());
    M.push_back(wid_scalar(pp, doc.wid));
    M.push_back(Scalar::zero(pp.group()));
    for (const auto& f : schema.fields) {
        auto it = doc.fields.find(f.name);
        M.push_back(it == doc.fields.end() ? Scalar::zero(pp.group()) : field_scalar(pp, f, it->second));
    }
    for (const auto& [name, v] : doc.fields) schema.position(name);  // unknown names
    return M;
}

}  // namespace zkfaith
