#include <algorithm>
#include <cmath>

#include "mcdc/error.hpp"
#include "mcdc/search.hpp"

namespace mcdc {

using ocl::CallOp;
using ocl::Expr;
using ocl::NavTarget;

std::string_view kind_name(GeneKind kind) {
    switch (kind) {
        case GeneKind::Numeric: return "numeric";
        case GeneKind::Boolean: return "boolean";
        case GeneKind::Enumeration: return "enumeration";
        case GeneKind::Presence: return "presence";
        case GeneKind::CollectionSize: return "collection-size";
    }
    return "?";
}

namespace {

using Ref = SearchSpace::Ref;

std::string join(const std::vector<std::string>& parts, const std::string& last = "") {
    std::string out;
    for (const auto& p : parts) {
        if (!out.empty()) out += '.';
        out += p;
    }
    if (!last.empty()) {
        if (!out.empty()) out += '.';
        out += last;
    }
    return out;
}

bool same_ref(const Ref& a, const Ref& b) {
    return a.kind == b.kind && a.hops == b.hops && a.member == b.member && a.element_attr == b.element_attr;
}

struct RefCollector {
    const ClassModel& model;
    std::string context;
    std::vector<Ref> refs;
    // Iterator name -> index of the Collection ref it ranges over (-1 when unknown).
    std::vector<std::pair<std::string, int>> iterators;

    int add(Ref r) {
        for (std::size_t i = 0; i < refs.size(); ++i)
            if (same_ref(refs[i], r)) return static_cast<int>(i);
        refs.push_back(std::move(r));
        return static_cast<int>(refs.size() - 1);
    }

    // Presence refs for every optional single-valued hop among the first `count` roles.
    void presence(const std::vector<std::string>& path, std::size_t count) {
        std::string cls = context;
        for (std::size_t i = 0; i < count; ++i) {
            const AssociationDef* a = model.find_association(cls, path[i]);
            if (!a || a->multiplicity.is_collection()) return;
            if (a->multiplicity.is_optional()) {
                Ref r;
                r.kind = Ref::Kind::Presence;
                r.hops.assign(path.begin(), path.begin() + static_cast<std::ptrdiff_t>(i) + 1);
                add(std::move(r));
            }
            cls = a->target;
        }
    }

    int collection(const Expr& receiver) {
        if (receiver.kind == Expr::Kind::Nav && receiver.nav.root == "self" &&
            receiver.nav.target == NavTarget::Collection) {
            const auto& p = receiver.nav.path;
            Ref r;
            r.kind = Ref::Kind::Collection;
            r.hops.assign(p.begin(), p.end() - 1);
            r.member = p.back();
            return add(std::move(r));
        }
        if (receiver.kind == Expr::Kind::Call && !receiver.args.empty()) return collection(receiver.args[0]);
        return -1;
    }

    void nav(const Expr& e) {
        const auto& n = e.nav;
        if (n.target == NavTarget::Constant) return;
        if (n.root != "self") {
            int coll = -1;
            for (auto it = iterators.rbegin(); it != iterators.rend(); ++it)
                if (it->first == n.root) {
                    coll = it->second;
                    break;
                }
            if (coll < 0 || n.target != NavTarget::Attribute || n.path.size() != 1) return;
            Ref r = refs[static_cast<std::size_t>(coll)];
            r.kind = Ref::Kind::Element;
            r.element_attr = n.path[0];
            add(std::move(r));
            return;
        }
        const auto& p = n.path;
        switch (n.target) {
            case NavTarget::Attribute: {
                presence(p, p.size() - 1);
                Ref r;
                r.kind = Ref::Kind::Attribute;
                r.hops.assign(p.begin(), p.end() - 1);
                r.member = p.back();
                add(std::move(r));
                break;
            }
            case NavTarget::Object: presence(p, p.size()); break;
            case NavTarget::Collection:
                presence(p, p.size() - 1);
                collection(e);
                break;
            case NavTarget::ValueBag: {
                presence(p, p.size() - 2);
                Ref c;
                c.kind = Ref::Kind::Collection;
                c.hops.assign(p.begin(), p.end() - 2);
                c.member = p[p.size() - 2];
                Ref el = c;
                add(std::move(c));
                el.kind = Ref::Kind::Element;
                el.element_attr = p.back();
                add(std::move(el));
                break;
            }
            default: break;
        }
    }

    void walk(const Expr& e) {
        switch (e.kind) {
            case Expr::Kind::Nav: nav(e); return;
            case Expr::Kind::Var: {
                Ref r;
                r.kind = Ref::Kind::Param;
                r.member = e.name;
                add(std::move(r));
                return;
            }
            case Expr::Kind::Call: {
                bool iterates = e.call_op == CallOp::ForAll || e.call_op == CallOp::Exists ||
                                e.call_op == CallOp::One || e.call_op == CallOp::Select ||
                                e.call_op == CallOp::Reject;
                walk(e.args[0]);
                if (!iterates) {
                    for (std::size_t i = 1; i < e.args.size(); ++i) walk(e.args[i]);
                    return;
                }
                iterators.emplace_back(e.name, collection(e.args[0]));
                walk(e.args[1]);
                iterators.pop_back();
                return;
            }
            default:
                for (const auto& a : e.args) walk(a);
        }
    }
};

double round_to(double x, double precision) { return std::round(x / precision) * precision; }

}  // namespace

SearchSpace::SearchSpace(const ClassModel& model, const McdcVariant& variant, DomainOptions options)
    : model_(&model), context_(variant.context), params_(variant.params), options_(options) {
    if (!model.find_class(context_)) throw SemanticError("unknown context class '" + context_ + "'");
    RefCollector rc{model, context_, {}, {}};
    rc.walk(variant.expr);
    refs_ = std::move(rc.refs);
}

std::string SearchSpace::parked_target(const ObjectConfiguration& cfg, const Object& from,
                                       const AssociationDef& assoc) const {
    for (const auto& l : cfg.links)
        if (l.from == from.id && l.role == assoc.role && l.to) return *l.to;
    for (std::size_t i = 1; i < cfg.objects.size(); ++i) {
        const Object& o = cfg.objects[i];
        if (o.class_name != assoc.target) continue;
        bool referenced = std::any_of(cfg.links.begin(), cfg.links.end(),
                                      [&](const Link& l) { return l.to && *l.to == o.id; });
        if (!referenced) return o.id;
    }
    return "";
}

const Object* SearchSpace::resolve(const ObjectConfiguration& cfg, const std::vector<std::string>& hops,
                                   std::size_t count) const {
    if (cfg.objects.empty()) return nullptr;
    const Object* cur = &cfg.objects.front();
    for (std::size_t i = 0; i < count && cur; ++i) {
        const AssociationDef* a = model_->find_association(cur->class_name, hops[i]);
        if (!a || a->multiplicity.is_collection()) return nullptr;
        std::string id = parked_target(cfg, *cur, *a);
        cur = id.empty() ? nullptr : cfg.find(id);
    }
    return cur;
}

const Object* SearchSpace::resolve_or_park(ObjectConfiguration& cfg, const std::vector<std::string>& hops,
                                           std::size_t count) const {
    if (cfg.objects.empty()) return nullptr;
    std::string cur = cfg.objects.front().id;
    for (std::size_t i = 0; i < count; ++i) {
        const Object* o = cfg.find(cur);
        const AssociationDef* a = model_->find_association(o->class_name, hops[i]);
        if (!a || a->multiplicity.is_collection()) return nullptr;
        bool has_link = std::any_of(cfg.links.begin(), cfg.links.end(),
                                    [&](const Link& l) { return l.from == cur && l.role == a->role; });
        if (!has_link) cfg.links.push_back({a->role, cur, std::nullopt});
        std::string next = parked_target(cfg, *o, *a);
        if (next.empty()) next = add_default_object(*model_, cfg, a->target);
        cur = next;
    }
    return cfg.find(cur);
}

void SearchSpace::prepare(ObjectConfiguration& cfg) const {
    for (const auto& p : params_)
        if (!cfg.params.count(p.name)) cfg.params[p.name] = default_value(p.type);
    for (const auto& r : refs_) {
        switch (r.kind) {
            case Ref::Kind::Presence: resolve_or_park(cfg, r.hops, r.hops.size()); break;
            case Ref::Kind::Attribute:
            case Ref::Kind::Collection:
            case Ref::Kind::Element: resolve_or_park(cfg, r.hops, r.hops.size()); break;
            case Ref::Kind::Param: break;
        }
    }
}

ObjectConfiguration SearchSpace::initial() const {
    ObjectConfiguration cfg = instantiate_default(*model_, context_, options_);
    prepare(cfg);
    return cfg;
}

namespace {

Gene value_gene(const AttrType& type, const DomainOptions& options) {
    Gene g;
    switch (type.kind) {
        case PrimitiveKind::Integer:
        case PrimitiveKind::Real:
            g.kind = GeneKind::Numeric;
            g.integer = type.kind == PrimitiveKind::Integer;
            g.domain = {options.lower, options.upper};
            break;
        case PrimitiveKind::Boolean: g.kind = GeneKind::Boolean; break;
        case PrimitiveKind::Enumeration:
            g.kind = GeneKind::Enumeration;
            g.literals = type.literals;
            break;
        case PrimitiveKind::String: throw UnsupportedError("String attributes cannot be searched");
    }
    return g;
}

}  // namespace

std::vector<Gene> SearchSpace::genes(const ObjectConfiguration& cfg) const {
    std::vector<Gene> out;
    for (std::size_t ri = 0; ri < refs_.size(); ++ri) {
        const Ref& r = refs_[ri];
        switch (r.kind) {
            case Ref::Kind::Param: {
                auto it = std::find_if(params_.begin(), params_.end(), [&](const ocl::Param& p) { return p.name == r.member; });
                if (it == params_.end()) break;
                Gene g = value_gene(it->type, options_);
                g.name = g.key = r.member;
                g.param = r.member;
                out.push_back(std::move(g));
                break;
            }
            case Ref::Kind::Attribute: {
                const Object* o = resolve(cfg, r.hops, r.hops.size());
                if (!o) break;
                const Attribute* a = model_->find_class(o->class_name)->find_attribute(r.member);
                if (!a || a->type.kind == PrimitiveKind::String) break;
                Gene g = value_gene(a->type, options_);
                g.name = g.key = join(r.hops, r.member);
                g.object_id = o->id;
                g.attr = r.member;
                out.push_back(std::move(g));
                break;
            }
            case Ref::Kind::Presence: {
                const Object* owner = resolve(cfg, r.hops, r.hops.size() - 1);
                if (!owner) break;
                const AssociationDef* a = model_->find_association(owner->class_name, r.hops.back());
                std::string target = parked_target(cfg, *owner, *a);
                if (target.empty()) break;
                Gene g;
                g.kind = GeneKind::Presence;
                g.name = g.key = join(r.hops);
                g.from = owner->id;
                g.role = a->role;
                g.target = target;
                out.push_back(std::move(g));
                break;
            }
            case Ref::Kind::Collection: {
                const Object* owner = resolve(cfg, r.hops, r.hops.size());
                if (!owner) break;
                const AssociationDef* a = model_->find_association(owner->class_name, r.member);
                if (!a) break;
                Gene g;
                g.kind = GeneKind::CollectionSize;
                g.name = g.key = join(r.hops, r.member);
                g.from = owner->id;
                g.role = a->role;
                g.element_class = a->target;
                double upper = a->multiplicity.upper ? std::min<double>(*a->multiplicity.upper, options_.collection_upper)
                                                     : options_.collection_upper;
                g.domain = {static_cast<double>(a->multiplicity.lower),
                            std::max<double>(upper, a->multiplicity.lower)};
                std::vector<std::string> elements;
                for (const auto& l : cfg.links)
                    if (l.from == owner->id && l.role == a->role && l.to) elements.push_back(*l.to);
                std::string coll = g.name;
                out.push_back(std::move(g));
                const ClassDef* ecls = model_->find_class(a->target);
                for (std::size_t ei = 0; ei < elements.size(); ++ei)
                    for (std::size_t rj = ri + 1; rj < refs_.size(); ++rj) {
                        const Ref& er = refs_[rj];
                        if (er.kind != Ref::Kind::Element || er.hops != r.hops || er.member != r.member) continue;
                        const Attribute* attr = ecls->find_attribute(er.element_attr);
                        if (!attr || attr->type.kind == PrimitiveKind::String) continue;
                        Gene eg = value_gene(attr->type, options_);
                        eg.name = coll + "[" + std::to_string(ei + 1) + "]." + er.element_attr;
                        eg.key = coll + "." + er.element_attr;
                        eg.object_id = elements[ei];
                        eg.attr = er.element_attr;
                        out.push_back(std::move(eg));
                    }
                break;
            }
            case Ref::Kind::Element: break;
        }
    }
    return out;
}

Value SearchSpace::get(const ObjectConfiguration& cfg, const Gene& g) const {
    switch (g.kind) {
        case GeneKind::Presence:
            for (const auto& l : cfg.links)
                if (l.from == g.from && l.role == g.role) return l.to.has_value();
            return false;
        case GeneKind::CollectionSize: {
            std::int64_t n = 0;
            for (const auto& l : cfg.links)
                if (l.from == g.from && l.role == g.role && l.to) ++n;
            return n;
        }
        default: {
            if (!g.param.empty()) {
                auto it = cfg.params.find(g.param);
                return it == cfg.params.end() ? Value{std::int64_t{0}} : it->second;
            }
            const Object* o = cfg.find(g.object_id);
            if (!o) throw Error("gene '" + g.name + "' addresses missing object '" + g.object_id + "'");
            return o->attrs.at(g.attr);
        }
    }
}

namespace {

void remove_object(ObjectConfiguration& cfg, const std::string& id) {
    std::vector<std::string> owned;
    for (const auto& l : cfg.links)
        if (l.from == id && l.to) owned.push_back(*l.to);
    cfg.links.erase(std::remove_if(cfg.links.begin(), cfg.links.end(), [&](const Link& l) { return l.from == id; }),
                    cfg.links.end());
    cfg.objects.erase(std::remove_if(cfg.objects.begin(), cfg.objects.end(), [&](const Object& o) { return o.id == id; }),
                      cfg.objects.end());
    for (const auto& child : owned) {
        bool referenced = std::any_of(cfg.links.begin(), cfg.links.end(),
                                      [&](const Link& l) { return l.to && *l.to == child; });
        if (!referenced) remove_object(cfg, child);
    }
}

}  // namespace

void SearchSpace::set(ObjectConfiguration& cfg, const Gene& g, const Value& v) const {
    switch (g.kind) {
        case GeneKind::Presence: {
            bool present = std::get<bool>(v);
            for (auto& l : cfg.links)
                if (l.from == g.from && l.role == g.role) {
                    l.to = present ? std::optional<std::string>(g.target) : std::nullopt;
                    return;
                }
            cfg.links.push_back({g.role, g.from, present ? std::optional<std::string>(g.target) : std::nullopt});
            return;
        }
        case GeneKind::CollectionSize: {
            auto want = static_cast<std::size_t>(std::get<std::int64_t>(v));
            std::vector<std::string> elements;
            for (const auto& l : cfg.links)
                if (l.from == g.from && l.role == g.role && l.to) elements.push_back(*l.to);
            while (elements.size() < want) {
                std::string id = add_default_object(*model_, cfg, g.element_class);
                cfg.links.push_back({g.role, g.from, id});
                elements.push_back(id);
            }
            while (elements.size() > want) {
                std::string id = elements.back();
                elements.pop_back();
                auto it = std::find_if(cfg.links.rbegin(), cfg.links.rend(), [&](const Link& l) {
                    return l.from == g.from && l.role == g.role && l.to && *l.to == id;
                });
                cfg.links.erase(std::next(it).base());
                bool referenced = std::any_of(cfg.links.begin(), cfg.links.end(),
                                              [&](const Link& l) { return l.to && *l.to == id; });
                if (!referenced) remove_object(cfg, id);
            }
            return;
        }
        default:
            if (!g.param.empty()) {
                cfg.params[g.param] = v;
                return;
            }
            Object* o = cfg.find(g.object_id);
            if (!o) throw Error("gene '" + g.name + "' addresses missing object '" + g.object_id + "'");
            o->attrs[g.attr] = v;
    }
}

void SearchSpace::sample(ObjectConfiguration& cfg, std::mt19937_64& rng, const DomainMap* ranges) const {
    std::vector<Gene> gs = genes(cfg);
    for (std::size_t i = 0; i < gs.size(); ++i) {
        const Gene& g = gs[i];
        switch (g.kind) {
            case GeneKind::Presence:
                set(cfg, g, std::bernoulli_distribution(0.5)(rng));
                gs = genes(cfg);
                break;
            case GeneKind::CollectionSize: {
                auto lo = static_cast<std::int64_t>(g.domain.lo);
                auto hi = static_cast<std::int64_t>(g.domain.hi);
                set(cfg, g, std::uniform_int_distribution<std::int64_t>(lo, hi)(rng));
                gs = genes(cfg);
                break;
            }
            case GeneKind::Boolean: set(cfg, g, std::bernoulli_distribution(0.5)(rng)); break;
            case GeneKind::Enumeration: {
                auto k = std::uniform_int_distribution<std::size_t>(0, g.literals.size() - 1)(rng);
                set(cfg, g, g.literals[k]);
                break;
            }
            case GeneKind::Numeric: {
                Interval d = g.domain;
                if (ranges) {
                    auto it = ranges->find(g.key);
                    if (it != ranges->end()) d = it->second;
                }
                if (g.integer) {
                    auto lo = static_cast<std::int64_t>(std::ceil(d.lo));
                    auto hi = static_cast<std::int64_t>(std::floor(d.hi));
                    if (hi < lo) hi = lo;
                    set(cfg, g, std::uniform_int_distribution<std::int64_t>(lo, hi)(rng));
                } else {
                    double x = std::uniform_real_distribution<double>(d.lo, d.hi)(rng);
                    x = std::clamp(round_to(x, options_.real_precision), d.lo, d.hi);
                    set(cfg, g, x);
                }
                break;
            }
        }
    }
}

}  // namespace mcdc
