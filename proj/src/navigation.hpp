#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mcdc/model.hpp"
#include "mcdc/ocl.hpp"

namespace mcdc::detail {

/// Iterator bindings during evaluation. Explicit names shadow outer ones; the
/// empty name is the innermost implicit iterator.
struct Bindings {
    std::vector<std::pair<std::string, const Object*>> stack;

    const Object* lookup(const std::string& name) const {
        for (auto it = stack.rbegin(); it != stack.rend(); ++it)
            if (it->first == name) return it->second;
        return nullptr;
    }
};

/// Resolves navigations against one configuration. `self` is the first object.
class Navigator {
public:
    explicit Navigator(const ObjectConfiguration& cfg) : cfg_(cfg) {}

    const Object* self() const { return cfg_.objects.empty() ? nullptr : &cfg_.objects.front(); }
    const ObjectConfiguration& config() const { return cfg_; }

    const Object* follow(const Object* from, const std::string& role) const {
        if (!from) return nullptr;
        for (const auto& l : cfg_.links)
            if (l.from == from->id && l.role == role) return l.to ? cfg_.find(*l.to) : nullptr;
        return nullptr;
    }

    std::vector<const Object*> follow_all(const Object* from, const std::string& role) const {
        std::vector<const Object*> out;
        if (!from) return out;
        for (const auto& l : cfg_.links)
            if (l.from == from->id && l.role == role && l.to)
                if (const Object* o = cfg_.find(*l.to)) out.push_back(o);
        return out;
    }

    const Object* root(const ocl::Nav& nav, const Bindings& b) const {
        if (nav.root == "self") return self();
        return b.lookup(nav.root);
    }

    /// Object reached by the role hops of `nav` (all hops for Object targets,
    /// all but the member for Attribute targets). nullptr when undefined.
    const Object* object(const ocl::Nav& nav, const Bindings& b, std::size_t hops) const {
        const Object* o = root(nav, b);
        for (std::size_t i = 0; i < hops && o; ++i) o = follow(o, nav.path[i]);
        return o;
    }

    /// Elements of a Collection or ValueBag navigation; nullopt when an earlier hop is undefined.
    std::optional<std::vector<const Object*>> elements(const ocl::Nav& nav, const Bindings& b) const {
        std::size_t role_index = nav.target == ocl::NavTarget::ValueBag ? nav.path.size() - 2 : nav.path.size() - 1;
        const Object* owner = object(nav, b, role_index);
        if (!owner) return std::nullopt;
        return follow_all(owner, nav.path[role_index]);
    }

    std::optional<Value> attribute(const Object* o, const std::string& name) const {
        if (!o) return std::nullopt;
        auto it = o->attrs.find(name);
        if (it == o->attrs.end()) return std::nullopt;
        return it->second;
    }

    std::optional<Value> param(const std::string& name) const {
        auto it = cfg_.params.find(name);
        if (it == cfg_.params.end()) return std::nullopt;
        return it->second;
    }

private:
    const ObjectConfiguration& cfg_;
};

}  // namespace mcdc::detail
