#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

namespace mcdc {

enum class PrimitiveKind { Integer, Real, Boolean, Enumeration, String };

std::string_view kind_name(PrimitiveKind kind);

struct AttrType {
    PrimitiveKind kind = PrimitiveKind::Integer;
    std::vector<std::string> literals;  // Enumeration only

    bool is_numeric() const { return kind == PrimitiveKind::Integer || kind == PrimitiveKind::Real; }
    bool operator==(const AttrType&) const = default;

    static AttrType integer() { return {PrimitiveKind::Integer, {}}; }
    static AttrType real() { return {PrimitiveKind::Real, {}}; }
    static AttrType boolean() { return {PrimitiveKind::Boolean, {}}; }
    static AttrType enumeration(std::vector<std::string> literals) {
        return {PrimitiveKind::Enumeration, std::move(literals)};
    }
    static AttrType string() { return {PrimitiveKind::String, {}}; }
};

/// Attribute value. Enumeration literals and strings are both carried as std::string;
/// the declared AttrType disambiguates.
using Value = std::variant<std::int64_t, double, bool, std::string>;

/// Numeric view of an Integer or Real value; nullopt for anything else.
std::optional<double> as_number(const Value& v);
bool value_matches(const Value& v, const AttrType& type);
std::string to_string(const Value& v);

struct Attribute {
    std::string name;
    AttrType type;
    bool operator==(const Attribute&) const = default;
};

struct Constant {
    std::string name;
    Value value;
    bool operator==(const Constant&) const = default;
};

struct ClassDef {
    std::string name;
    std::vector<Attribute> attributes;
    std::vector<Constant> constants;

    const Attribute* find_attribute(std::string_view attr) const;
    const Constant* find_constant(std::string_view constant) const;
    bool operator==(const ClassDef&) const = default;
};

struct Multiplicity {
    unsigned lower = 0;
    std::optional<unsigned> upper;  // nullopt = unbounded ('*')

    bool is_collection() const { return !upper || *upper > 1; }
    bool is_optional() const { return lower == 0; }
    bool operator==(const Multiplicity&) const = default;
};

struct AssociationDef {
    std::string source;
    std::string target;
    std::string role;
    Multiplicity multiplicity;
    bool operator==(const AssociationDef&) const = default;
};

/// Class diagram: the universe an object configuration instantiates.
/// Immutable after construction; `validate()` enforces the naming invariants.
class ClassModel {
public:
    ClassModel() = default;
    ClassModel(std::vector<ClassDef> classes, std::vector<AssociationDef> associations);

    const std::vector<ClassDef>& classes() const { return classes_; }
    const std::vector<AssociationDef>& associations() const { return associations_; }

    const ClassDef* find_class(std::string_view name) const;
    const AssociationDef* find_association(std::string_view source, std::string_view role) const;
    std::vector<const AssociationDef*> associations_from(std::string_view source) const;

    bool operator==(const ClassModel&) const = default;

private:
    void validate() const;

    std::vector<ClassDef> classes_;
    std::vector<AssociationDef> associations_;
};

ClassModel parse_model(std::string_view json_text);
ClassModel load_model(const std::filesystem::path& path);

struct Object {
    std::string id;
    std::string class_name;
    std::map<std::string, Value> attrs;
    bool operator==(const Object&) const = default;
};

/// `to == nullopt` encodes an undefined single-valued navigation.
struct Link {
    std::string role;
    std::string from;
    std::optional<std::string> to;
    bool operator==(const Link&) const = default;
};

/// A candidate or final solution: an object diagram plus values for operation
/// parameters (precondition contexts).
struct ObjectConfiguration {
    std::vector<Object> objects;
    std::vector<Link> links;
    std::map<std::string, Value> params;

    const Object* find(std::string_view id) const;
    Object* find(std::string_view id);
    bool operator==(const ObjectConfiguration&) const = default;
};

/// Numeric search domain and instantiation limits.
struct DomainOptions {
    double lower = -10000.0;
    double upper = 10000.0;
    double real_precision = 0.01;
    unsigned collection_upper = 5;  // cap for '*' or large upper bounds
};

/// Throws SemanticError when `cfg` violates a typing or multiplicity invariant.
void validate_configuration(const ClassModel& model, const ObjectConfiguration& cfg,
                            const DomainOptions& options = {});

/// Default value for an attribute type: 0, 0.0, false, first literal, "".
Value default_value(const AttrType& type);

/// One `ctx` object plus one object per reachable single-valued association end.
/// Mandatory ends are linked; optional ends get a null link and a detached
/// default object the search can attach by toggling presence.
ObjectConfiguration instantiate_default(const ClassModel& model, std::string_view ctx,
                                        const DomainOptions& options = {});

/// Appends a default instance of `cls` (and its mandatory parts) to `cfg` with
/// ids not yet in use; returns the new object's id.
std::string add_default_object(const ClassModel& model, ObjectConfiguration& cfg, std::string_view cls);

/// Model-file type notation: "Integer", "Real", "Boolean", "String", {"enum": [...]}.
AttrType attr_type_from_json(const nlohmann::json& j);
nlohmann::json attr_type_to_json(const AttrType& type);

nlohmann::json configuration_to_json(const ObjectConfiguration& cfg);
ObjectConfiguration configuration_from_json(const nlohmann::json& j);

void save_configuration(const ObjectConfiguration& cfg, const std::filesystem::path& path);
ObjectConfiguration load_configuration(const std::filesystem::path& path);

}  // namespace mcdc
