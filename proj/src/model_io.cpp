#include <fstream>
#include <sstream>

#include "mcdc/error.hpp"
#include "mcdc/model.hpp"

namespace mcdc {

using nlohmann::json;

namespace {

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i < text.size() && i + 1 < byte; ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

json parse_json(std::string_view text) {
    try {
        return json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        auto [line, col] = line_column(text, e.byte);
        std::string msg = e.what();
        throw ParseError("invalid JSON (" + msg.substr(msg.find(':') + 2) + ")", line, col);
    }
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const json& member(const json& j, const char* key, const std::string& where) {
    if (!j.is_object() || !j.contains(key)) throw SemanticError(where + ": missing field '" + key + "'");
    return j.at(key);
}

std::string string_member(const json& j, const char* key, const std::string& where) {
    const json& v = member(j, key, where);
    if (!v.is_string()) throw SemanticError(where + ": field '" + key + "' must be a string");
    return v.get<std::string>();
}

AttrType parse_type(const json& t, const std::string& where) {
    if (t.is_string()) {
        const auto s = t.get<std::string>();
        if (s == "Integer") return AttrType::integer();
        if (s == "Real") return AttrType::real();
        if (s == "Boolean") return AttrType::boolean();
        if (s == "String") return AttrType::string();
        throw SemanticError(where + ": unknown type '" + s + "'");
    }
    if (t.is_object() && t.contains("enum") && t.at("enum").is_array()) {
        std::vector<std::string> literals;
        for (const auto& lit : t.at("enum")) {
            if (!lit.is_string()) throw SemanticError(where + ": enumeration literals must be strings");
            literals.push_back(lit.get<std::string>());
        }
        return AttrType::enumeration(std::move(literals));
    }
    throw SemanticError(where + ": malformed type");
}

Value json_to_value(const json& v, const std::string& where) {
    if (v.is_boolean()) return v.get<bool>();
    if (v.is_number_integer()) return v.get<std::int64_t>();
    if (v.is_number_float()) return v.get<double>();
    if (v.is_string()) return v.get<std::string>();
    throw SemanticError(where + ": unsupported value");
}

json value_to_json(const Value& v) {
    return std::visit([](const auto& x) { return json(x); }, v);
}

}  // namespace

AttrType attr_type_from_json(const json& j) { return parse_type(j, "type"); }

json attr_type_to_json(const AttrType& type) {
    if (type.kind == PrimitiveKind::Enumeration) return json{{"enum", type.literals}};
    return std::string(kind_name(type.kind));
}

ClassModel parse_model(std::string_view json_text) {
    json root = parse_json(json_text);
    if (!root.is_object()) throw SemanticError("model: top level must be an object");
    std::vector<ClassDef> classes;
    if (root.contains("classes")) {
        for (const auto& c : root.at("classes")) {
            ClassDef def;
            def.name = string_member(c, "name", "class");
            const std::string where = "class '" + def.name + "'";
            if (c.contains("attributes")) {
                for (const auto& a : c.at("attributes")) {
                    Attribute attr;
                    attr.name = string_member(a, "name", where);
                    attr.type = parse_type(member(a, "type", where), where + " attribute '" + attr.name + "'");
                    def.attributes.push_back(std::move(attr));
                }
            }
            if (c.contains("constants")) {
                for (const auto& k : c.at("constants")) {
                    Constant constant;
                    constant.name = string_member(k, "name", where);
                    constant.value = json_to_value(member(k, "value", where), where + " constant '" + constant.name + "'");
                    if (std::holds_alternative<std::string>(constant.value))
                        throw SemanticError(where + " constant '" + constant.name + "' must be numeric or boolean");
                    def.constants.push_back(std::move(constant));
                }
            }
            classes.push_back(std::move(def));
        }
    }
    std::vector<AssociationDef> associations;
    if (root.contains("associations")) {
        for (const auto& a : root.at("associations")) {
            AssociationDef def;
            def.source = string_member(a, "source", "association");
            def.target = string_member(a, "target", "association");
            def.role = string_member(a, "role", "association");
            const std::string where = "association '" + def.role + "'";
            const json& lower = member(a, "lower", where);
            if (!lower.is_number_unsigned()) throw SemanticError(where + ": 'lower' must be a natural number");
            def.multiplicity.lower = lower.get<unsigned>();
            const json& upper = member(a, "upper", where);
            if (upper.is_string() && upper.get<std::string>() == "*") {
                def.multiplicity.upper = std::nullopt;
            } else if (upper.is_number_unsigned()) {
                def.multiplicity.upper = upper.get<unsigned>();
            } else {
                throw SemanticError(where + ": 'upper' must be a natural number or \"*\"");
            }
            associations.push_back(std::move(def));
        }
    }
    return ClassModel(std::move(classes), std::move(associations));
}

ClassModel load_model(const std::filesystem::path& path) { return parse_model(read_file(path)); }

json configuration_to_json(const ObjectConfiguration& cfg) {
    json objects = json::array();
    for (const auto& o : cfg.objects) {
        json attrs = json::object();
        for (const auto& [name, v] : o.attrs) attrs[name] = value_to_json(v);
        objects.push_back({{"id", o.id}, {"class", o.class_name}, {"attrs", attrs}});
    }
    json links = json::array();
    for (const auto& l : cfg.links)
        links.push_back({{"role", l.role}, {"from", l.from}, {"to", l.to ? json(*l.to) : json(nullptr)}});
    json out = {{"objects", objects}, {"links", links}};
    if (!cfg.params.empty()) {
        json params = json::object();
        for (const auto& [name, v] : cfg.params) params[name] = value_to_json(v);
        out["params"] = params;
    }
    return out;
}

ObjectConfiguration configuration_from_json(const json& j) {
    ObjectConfiguration cfg;
    for (const auto& o : member(j, "objects", "configuration")) {
        Object obj;
        obj.id = string_member(o, "id", "object");
        obj.class_name = string_member(o, "class", "object '" + obj.id + "'");
        if (o.contains("attrs"))
            for (const auto& [name, v] : o.at("attrs").items())
                obj.attrs.emplace(name, json_to_value(v, "object '" + obj.id + "'"));
        cfg.objects.push_back(std::move(obj));
    }
    if (j.contains("links")) {
        for (const auto& l : j.at("links")) {
            Link link;
            link.role = string_member(l, "role", "link");
            link.from = string_member(l, "from", "link");
            const json& to = member(l, "to", "link");
            if (to.is_string())
                link.to = to.get<std::string>();
            else if (!to.is_null())
                throw SemanticError("link: 'to' must be a string or null");
            cfg.links.push_back(std::move(link));
        }
    }
    if (j.contains("params"))
        for (const auto& [name, v] : j.at("params").items()) cfg.params.emplace(name, json_to_value(v, "params"));
    return cfg;
}

void save_configuration(const ObjectConfiguration& cfg, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out << configuration_to_json(cfg).dump(2) << '\n';
    if (!out) throw IoError("write to '" + path.string() + "' failed");
}

ObjectConfiguration load_configuration(const std::filesystem::path& path) {
    return configuration_from_json(parse_json(read_file(path)));
}

}  // namespace mcdc
