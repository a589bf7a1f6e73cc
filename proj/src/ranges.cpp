#include <algorithm>
#include <optional>

#include "mcdc/error.hpp"
#include "mcdc/ranges.hpp"

namespace mcdc {

using ocl::Expr;

std::string_view rule_name(RangeRule r) {
    switch (r) {
        case RangeRule::Constant: return "constant";
        case RangeRule::BothSidesConstant: return "both-sides-constant";
        case RangeRule::BothSidesRandom: return "both-sides-random";
        case RangeRule::MultiClause: return "multi-clause";
        case RangeRule::DependentRandom: return "dependent-random";
    }
    return "?";
}

DomainMap RangeMap::domains() const {
    DomainMap out;
    for (const auto& [key, g] : genes) out[key] = g.bounds;
    return out;
}

nlohmann::json RangeMap::to_json() const {
    nlohmann::json gs = nlohmann::json::object();
    for (const auto& [key, g] : genes)
        gs[key] = {{"lo", g.bounds.lo},
                   {"hi", g.bounds.hi},
                   {"rule", std::string(rule_name(g.rule))},
                   {"c_min", g.c_min},
                   {"c_max", g.c_max}};
    return {{"scaling", scaling}, {"genes", gs}};
}

Interval single_clause_range(double c, unsigned scaling) { return multi_clause_range(c, c, scaling); }

Interval multi_clause_range(double c_min, double c_max, unsigned scaling) {
    const double sf = scaling;
    if (c_min > 0) return {0.0, 2 * c_max * sf};
    if (c_max < 0) return {2 * c_min * sf, 0.0};
    if (c_min == 0 && c_max == 0) return {-sf, sf};
    return {2 * c_min * sf, 2 * c_max * sf};
}

namespace {

std::optional<double> fold(const Expr& e) {
    switch (e.kind) {
        case Expr::Kind::Const: return as_number(e.value);
        case Expr::Kind::Nav:
            if (e.nav.target == ocl::NavTarget::Constant) return as_number(e.value);
            return std::nullopt;
        case Expr::Kind::Arith: {
            auto a = fold(e.args[0]);
            auto b = fold(e.args[1]);
            if (!a || !b) return std::nullopt;
            switch (e.arith_op) {
                case ocl::ArithOp::Add: return *a + *b;
                case ocl::ArithOp::Sub: return *a - *b;
                case ocl::ArithOp::Mul: return *a * *b;
                case ocl::ArithOp::Div:
                    if (*b == 0.0) throw ReformulationError("division by a zero constant in " + ocl::render(e));
                    return *a / *b;
            }
            return std::nullopt;
        }
        default: return std::nullopt;
    }
}

struct Side {
    std::vector<std::string> genes;
    std::vector<double> constants;  // maximal constant subterms, folded
    bool unsupported = false;
};

void scan(const Expr& e, Side& s) {
    if (auto v = fold(e)) {
        s.constants.push_back(*v);
        return;
    }
    switch (e.kind) {
        case Expr::Kind::Arith:
            scan(e.args[0], s);
            scan(e.args[1], s);
            return;
        case Expr::Kind::Nav:
            if (e.nav.root == "self" && e.nav.target == ocl::NavTarget::Attribute && e.type.is_numeric()) {
                std::string key;
                for (const auto& p : e.nav.path) key += (key.empty() ? "" : ".") + p;
                s.genes.push_back(key);
                return;
            }
            break;
        case Expr::Kind::Var:
            if (e.type.is_numeric()) {
                s.genes.push_back(e.name);
                return;
            }
            break;
        default: break;
    }
    s.unsupported = true;
}

struct ClauseInfo {
    std::vector<std::string> genes;  // unique, appearance order
    bool both_sides = false;
    std::vector<double> constants;
    RangeRule rule = RangeRule::Constant;
    std::optional<double> c;  // nullopt: random per clause
};

std::optional<ClauseInfo> analyze(const Expr& clause) {
    if (clause.kind != Expr::Kind::Rel || !clause.args[0].type.is_numeric() || !clause.args[1].type.is_numeric())
        return std::nullopt;
    Side l, r;
    scan(clause.args[0], l);
    scan(clause.args[1], r);
    if (l.unsupported || r.unsupported || (l.genes.empty() && r.genes.empty())) return std::nullopt;
    ClauseInfo info;
    for (const Side* s : {&l, &r})
        for (const auto& g : s->genes)
            if (std::find(info.genes.begin(), info.genes.end(), g) == info.genes.end()) info.genes.push_back(g);
    info.constants = l.constants;
    info.constants.insert(info.constants.end(), r.constants.begin(), r.constants.end());
    if (l.genes.empty() || r.genes.empty()) {
        const Side& gene_side = l.genes.empty() ? r : l;
        const Expr& const_side = l.genes.empty() ? clause.args[0] : clause.args[1];
        double c0 = *fold(const_side);
        if (gene_side.constants.empty()) {
            info.rule = RangeRule::Constant;
            info.c = c0;
        } else {
            info.rule = RangeRule::BothSidesConstant;
            info.c = *std::min_element(info.constants.begin(), info.constants.end());
        }
        return info;
    }
    info.both_sides = true;
    if (!info.constants.empty()) {
        info.rule = RangeRule::BothSidesConstant;
        info.c = *std::min_element(info.constants.begin(), info.constants.end());
    } else {
        info.rule = RangeRule::BothSidesRandom;
    }
    return info;
}

}  // namespace

RangeMap reduce_ranges(const McdcVariant& variant, unsigned scaling, std::uint64_t rng_seed,
                       const DomainOptions& options) {
    if (scaling == 0) throw SemanticError("scaling factor must be a positive integer");
    RangeMap out;
    out.scaling = scaling;
    std::mt19937_64 rng(rng_seed);
    std::uniform_int_distribution<int> random_c(1, 100);

    std::vector<ClauseInfo> clauses;
    std::size_t total = 0;
    for (const auto& c : ocl::extract_clauses(variant.expr)) {
        ++total;
        if (auto info = analyze(c.expr)) clauses.push_back(std::move(*info));
    }

    std::vector<std::string> order;
    std::map<std::string, std::vector<const ClauseInfo*>> uses;
    for (const auto& ci : clauses)
        for (const auto& g : ci.genes) {
            if (!uses.count(g)) order.push_back(g);
            uses[g].push_back(&ci);
        }

    bool dependent = false;
    if (total >= 2)
        for (const auto& [g, cs] : uses)
            if (cs.size() >= 2 && std::any_of(cs.begin(), cs.end(), [](const ClauseInfo* ci) { return ci->both_sides; }))
                dependent = true;

    auto put = [&](const std::string& key, RangeRule rule, double lo_c, double hi_c) {
        Interval b = multi_clause_range(lo_c, hi_c, scaling);
        b.lo = std::clamp(b.lo, options.lower, options.upper);
        b.hi = std::clamp(b.hi, options.lower, options.upper);
        out.genes[key] = {b, rule, lo_c, hi_c};
    };

    if (dependent) {
        for (const auto& g : order) {
            const auto& cs = uses[g];
            if (std::any_of(cs.begin(), cs.end(), [](const ClauseInfo* ci) { return ci->both_sides; })) {
                double c = random_c(rng);
                put(g, RangeRule::DependentRandom, c, c);
            }
        }
    } else {
        for (auto& ci : clauses)
            if (ci.rule == RangeRule::BothSidesRandom) ci.c = random_c(rng);
    }

    for (const auto& g : order) {
        if (out.genes.count(g)) continue;
        const auto& cs = uses[g];
        if (cs.size() == 1) {
            put(g, cs.front()->rule, *cs.front()->c, *cs.front()->c);
            continue;
        }
        double lo = *cs.front()->c, hi = lo;
        for (const ClauseInfo* ci : cs) {
            lo = std::min(lo, *ci->c);
            hi = std::max(hi, *ci->c);
        }
        put(g, RangeRule::MultiClause, lo, hi);
    }
    return out;
}

ObjectConfiguration sample_within(const SearchSpace& space, const RangeMap& ranges, std::mt19937_64& rng) {
    ObjectConfiguration cfg = space.initial();
    DomainMap d = ranges.domains();
    space.sample(cfg, rng, &d);
    return cfg;
}

}  // namespace mcdc
