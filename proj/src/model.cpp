#include "mcdc/model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "mcdc/error.hpp"

namespace mcdc {

std::string_view kind_name(PrimitiveKind kind) {
    switch (kind) {
        case PrimitiveKind::Integer: return "Integer";
        case PrimitiveKind::Real: return "Real";
        case PrimitiveKind::Boolean: return "Boolean";
        case PrimitiveKind::Enumeration: return "Enumeration";
        case PrimitiveKind::String: return "String";
    }
    return "?";
}

std::optional<double> as_number(const Value& v) {
    if (const auto* i = std::get_if<std::int64_t>(&v)) return static_cast<double>(*i);
    if (const auto* d = std::get_if<double>(&v)) return *d;
    return std::nullopt;
}

bool value_matches(const Value& v, const AttrType& type) {
    switch (type.kind) {
        case PrimitiveKind::Integer: return std::holds_alternative<std::int64_t>(v);
        case PrimitiveKind::Real: return std::holds_alternative<double>(v);
        case PrimitiveKind::Boolean: return std::holds_alternative<bool>(v);
        case PrimitiveKind::String: return std::holds_alternative<std::string>(v);
        case PrimitiveKind::Enumeration: {
            const auto* s = std::get_if<std::string>(&v);
            return s && std::find(type.literals.begin(), type.literals.end(), *s) != type.literals.end();
        }
    }
    return false;
}

std::string to_string(const Value& v) {
    return std::visit(
        [](const auto& x) -> std::string {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, bool>) {
                return x ? "true" : "false";
            } else if constexpr (std::is_same_v<T, std::int64_t>) {
                return std::to_string(x);
            } else if constexpr (std::is_same_v<T, double>) {
                std::ostringstream os;
                os.precision(15);
                os << x;
                return os.str();
            } else {
                return x;
            }
        },
        v);
}

const Attribute* ClassDef::find_attribute(std::string_view attr) const {
    auto it = std::find_if(attributes.begin(), attributes.end(), [&](const Attribute& a) { return a.name == attr; });
    return it == attributes.end() ? nullptr : &*it;
}

const Constant* ClassDef::find_constant(std::string_view constant) const {
    auto it = std::find_if(constants.begin(), constants.end(), [&](const Constant& c) { return c.name == constant; });
    return it == constants.end() ? nullptr : &*it;
}

ClassModel::ClassModel(std::vector<ClassDef> classes, std::vector<AssociationDef> associations)
    : classes_(std::move(classes)), associations_(std::move(associations)) {
    validate();
}

const ClassDef* ClassModel::find_class(std::string_view name) const {
    auto it = std::find_if(classes_.begin(), classes_.end(), [&](const ClassDef& c) { return c.name == name; });
    return it == classes_.end() ? nullptr : &*it;
}

const AssociationDef* ClassModel::find_association(std::string_view source, std::string_view role) const {
    auto it = std::find_if(associations_.begin(), associations_.end(),
                           [&](const AssociationDef& a) { return a.source == source && a.role == role; });
    return it == associations_.end() ? nullptr : &*it;
}

std::vector<const AssociationDef*> ClassModel::associations_from(std::string_view source) const {
    std::vector<const AssociationDef*> out;
    for (const auto& a : associations_)
        if (a.source == source) out.push_back(&a);
    return out;
}

void ClassModel::validate() const {
    std::set<std::string> class_names;
    for (const auto& c : classes_) {
        if (c.name.empty()) throw SemanticError("class with empty name");
        if (!class_names.insert(c.name).second) throw SemanticError("duplicate class '" + c.name + "'");
        std::set<std::string> members;
        for (const auto& a : c.attributes) {
            if (!members.insert(a.name).second)
                throw SemanticError("duplicate attribute '" + a.name + "' in class '" + c.name + "'");
            if (a.type.kind == PrimitiveKind::Enumeration && a.type.literals.empty())
                throw SemanticError("enumeration attribute '" + c.name + "." + a.name + "' has no literals");
        }
        for (const auto& k : c.constants) {
            if (!members.insert(k.name).second)
                throw SemanticError("duplicate member '" + k.name + "' in class '" + c.name + "'");
        }
    }
    for (const auto& a : associations_) {
        if (!class_names.count(a.source))
            throw SemanticError("association '" + a.role + "' references unknown class '" + a.source + "'");
        if (!class_names.count(a.target))
            throw SemanticError("association '" + a.role + "' references unknown class '" + a.target + "'");
        if (a.multiplicity.upper && a.multiplicity.lower > *a.multiplicity.upper)
            throw SemanticError("association '" + a.role + "' has lower bound above upper bound");
        const ClassDef* src = find_class(a.source);
        if (src->find_attribute(a.role) || src->find_constant(a.role))
            throw SemanticError("role '" + a.role + "' clashes with a member of class '" + a.source + "'");
        auto same = std::count_if(associations_.begin(), associations_.end(), [&](const AssociationDef& b) {
            return b.source == a.source && b.role == a.role;
        });
        if (same > 1) throw SemanticError("duplicate role '" + a.role + "' on class '" + a.source + "'");
    }
}

const Object* ObjectConfiguration::find(std::string_view id) const {
    auto it = std::find_if(objects.begin(), objects.end(), [&](const Object& o) { return o.id == id; });
    return it == objects.end() ? nullptr : &*it;
}

Object* ObjectConfiguration::find(std::string_view id) {
    auto it = std::find_if(objects.begin(), objects.end(), [&](const Object& o) { return o.id == id; });
    return it == objects.end() ? nullptr : &*it;
}

Value default_value(const AttrType& type) {
    switch (type.kind) {
        case PrimitiveKind::Integer: return std::int64_t{0};
        case PrimitiveKind::Real: return 0.0;
        case PrimitiveKind::Boolean: return false;
        case PrimitiveKind::Enumeration: return type.literals.front();
        case PrimitiveKind::String: return std::string{};
    }
    return std::int64_t{0};
}

void validate_configuration(const ClassModel& model, const ObjectConfiguration& cfg, const DomainOptions&) {
    std::set<std::string> ids;
    for (const auto& o : cfg.objects) {
        if (!ids.insert(o.id).second) throw SemanticError("duplicate object id '" + o.id + "'");
        const ClassDef* cls = model.find_class(o.class_name);
        if (!cls) throw SemanticError("object '" + o.id + "' has unknown class '" + o.class_name + "'");
        for (const auto& attr : cls->attributes) {
            auto it = o.attrs.find(attr.name);
            if (it == o.attrs.end())
                throw SemanticError("object '" + o.id + "' lacks attribute '" + attr.name + "'");
            if (!value_matches(it->second, attr.type))
                throw SemanticError("object '" + o.id + "' attribute '" + attr.name + "' is not of type " +
                                    std::string(kind_name(attr.type.kind)));
        }
        for (const auto& [name, _] : o.attrs)
            if (!cls->find_attribute(name))
                throw SemanticError("object '" + o.id + "' has undeclared attribute '" + name + "'");
    }
    std::map<std::pair<std::string, std::string>, unsigned> counts;
    for (const auto& l : cfg.links) {
        const Object* from = cfg.find(l.from);
        if (!from) throw SemanticError("link '" + l.role + "' from unknown object '" + l.from + "'");
        const AssociationDef* assoc = model.find_association(from->class_name, l.role);
        if (!assoc) throw SemanticError("class '" + from->class_name + "' has no role '" + l.role + "'");
        auto& n = counts[{l.from, l.role}];
        if (!l.to) continue;
        const Object* to = cfg.find(*l.to);
        if (!to) throw SemanticError("link '" + l.role + "' to unknown object '" + *l.to + "'");
        if (to->class_name != assoc->target)
            throw SemanticError("link '" + l.role + "' targets class '" + to->class_name + "', expected '" +
                                assoc->target + "'");
        ++n;
    }
    for (const auto& [key, n] : counts) {
        const Object* from = cfg.find(key.first);
        const auto& m = model.find_association(from->class_name, key.second)->multiplicity;
        if (m.upper && n > *m.upper)
            throw SemanticError("role '" + key.second + "' of '" + key.first + "' exceeds its upper bound");
        if (n < m.lower)
            throw SemanticError("role '" + key.second + "' of '" + key.first + "' is below its lower bound");
    }
}

namespace {

std::string lower_id(std::string_view class_name) {
    std::string s(class_name);
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

struct Instantiator {
    const ClassModel& model;
    ObjectConfiguration cfg;
    std::map<std::string, int> used;

    std::string fresh_id(std::string_view class_name) {
        std::string base = lower_id(class_name);
        for (;;) {
            int n = ++used[base];
            std::string id = n == 1 ? base : base + std::to_string(n);
            if (!cfg.find(id)) return id;
        }
    }

    std::string make(const ClassDef& cls, std::vector<std::string>& path) {
        Object obj{fresh_id(cls.name), cls.name, {}};
        for (const auto& a : cls.attributes) obj.attrs.emplace(a.name, default_value(a.type));
        std::string id = obj.id;
        cfg.objects.push_back(std::move(obj));
        path.push_back(cls.name);
        for (const AssociationDef* assoc : model.associations_from(cls.name)) {
            bool cyclic = std::find(path.begin(), path.end(), assoc->target) != path.end();
            const ClassDef* target = model.find_class(assoc->target);
            if (assoc->multiplicity.is_collection()) {
                for (unsigned i = 0; i < assoc->multiplicity.lower && !cyclic; ++i)
                    cfg.links.push_back({assoc->role, id, make(*target, path)});
                continue;
            }
            if (cyclic) {
                if (assoc->multiplicity.is_optional()) cfg.links.push_back({assoc->role, id, std::nullopt});
                continue;
            }
            std::string child = make(*target, path);
            if (assoc->multiplicity.is_optional())
                cfg.links.push_back({assoc->role, id, std::nullopt});
            else
                cfg.links.push_back({assoc->role, id, child});
        }
        path.pop_back();
        return id;
    }
};

}  // namespace

ObjectConfiguration instantiate_default(const ClassModel& model, std::string_view ctx, const DomainOptions&) {
    const ClassDef* cls = model.find_class(ctx);
    if (!cls) throw SemanticError("unknown context class '" + std::string(ctx) + "'");
    Instantiator inst{model, {}, {}};
    std::vector<std::string> path;
    inst.make(*cls, path);
    return std::move(inst.cfg);
}

std::string add_default_object(const ClassModel& model, ObjectConfiguration& cfg, std::string_view cls_name) {
    const ClassDef* cls = model.find_class(cls_name);
    if (!cls) throw SemanticError("unknown class '" + std::string(cls_name) + "'");
    Instantiator inst{model, std::move(cfg), {}};
    std::vector<std::string> path;
    std::string id;
    try {
        id = inst.make(*cls, path);
    } catch (...) {
        cfg = std::move(inst.cfg);
        throw;
    }
    cfg = std::move(inst.cfg);
    return id;
}

}  // namespace mcdc
