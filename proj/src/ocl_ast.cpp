#include <map>

#include "mcdc/ocl.hpp"

namespace mcdc::ocl {

std::string_view spelling(BoolOp op) {
    switch (op) {
        case BoolOp::And: return "and";
        case BoolOp::Or: return "or";
        case BoolOp::Xor: return "xor";
        case BoolOp::Implies: return "implies";
    }
    return "?";
}

std::string_view spelling(RelOp op) {
    switch (op) {
        case RelOp::Lt: return "<";
        case RelOp::Le: return "<=";
        case RelOp::Gt: return ">";
        case RelOp::Ge: return ">=";
        case RelOp::Eq: return "=";
        case RelOp::Ne: return "<>";
    }
    return "?";
}

std::string_view spelling(ArithOp op) {
    switch (op) {
        case ArithOp::Add: return "+";
        case ArithOp::Sub: return "-";
        case ArithOp::Mul: return "*";
        case ArithOp::Div: return "/";
    }
    return "?";
}

std::string_view spelling(CallOp op) {
    switch (op) {
        case CallOp::OclIsUndefined: return "oclIsUndefined";
        case CallOp::ForAll: return "forAll";
        case CallOp::Exists: return "exists";
        case CallOp::One: return "one";
        case CallOp::Select: return "select";
        case CallOp::Reject: return "reject";
        case CallOp::Includes: return "includes";
        case CallOp::Excludes: return "excludes";
        case CallOp::IsEmpty: return "isEmpty";
        case CallOp::NotEmpty: return "notEmpty";
        case CallOp::Size: return "size";
    }
    return "?";
}

RelOp inverse(RelOp op) {
    switch (op) {
        case RelOp::Lt: return RelOp::Ge;
        case RelOp::Le: return RelOp::Gt;
        case RelOp::Gt: return RelOp::Le;
        case RelOp::Ge: return RelOp::Lt;
        case RelOp::Eq: return RelOp::Ne;
        case RelOp::Ne: return RelOp::Eq;
    }
    return op;
}

RelOp mirror(RelOp op) {
    switch (op) {
        case RelOp::Lt: return RelOp::Gt;
        case RelOp::Le: return RelOp::Ge;
        case RelOp::Gt: return RelOp::Lt;
        case RelOp::Ge: return RelOp::Le;
        default: return op;
    }
}

bool operator==(const Expr& a, const Expr& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case Expr::Kind::Bool:
            if (a.bool_op != b.bool_op) return false;
            break;
        case Expr::Kind::Not: break;
        case Expr::Kind::Rel:
            if (a.rel_op != b.rel_op) return false;
            break;
        case Expr::Kind::Arith:
            if (a.arith_op != b.arith_op) return false;
            break;
        case Expr::Kind::Nav: return a.nav == b.nav;
        case Expr::Kind::Var: return a.name == b.name;
        case Expr::Kind::Const: return a.value == b.value && a.enum_literal == b.enum_literal;
        case Expr::Kind::Call:
            if (a.call_op != b.call_op || a.name != b.name) return false;
            break;
    }
    return a.args == b.args;
}

Expr Expr::boolean(BoolOp op, Expr lhs, Expr rhs) {
    Expr e;
    e.kind = Kind::Bool;
    e.bool_op = op;
    e.type.kind = TypeKind::Boolean;
    e.args.push_back(std::move(lhs));
    e.args.push_back(std::move(rhs));
    return e;
}

Expr Expr::negation(Expr operand) {
    Expr e;
    e.kind = Kind::Not;
    e.type.kind = TypeKind::Boolean;
    e.args.push_back(std::move(operand));
    return e;
}

Expr Expr::relation(RelOp op, Expr lhs, Expr rhs) {
    Expr e;
    e.kind = Kind::Rel;
    e.rel_op = op;
    e.type.kind = TypeKind::Boolean;
    e.args.push_back(std::move(lhs));
    e.args.push_back(std::move(rhs));
    return e;
}

Expr Expr::arith(ArithOp op, Expr lhs, Expr rhs) {
    Expr e;
    e.kind = Kind::Arith;
    e.arith_op = op;
    bool integral = lhs.type.kind == TypeKind::Integer && rhs.type.kind == TypeKind::Integer && op != ArithOp::Div;
    e.type.kind = integral ? TypeKind::Integer : TypeKind::Real;
    e.args.push_back(std::move(lhs));
    e.args.push_back(std::move(rhs));
    return e;
}

Expr Expr::constant(Value v) {
    Expr e;
    e.kind = Kind::Const;
    if (std::holds_alternative<bool>(v))
        e.type.kind = TypeKind::Boolean;
    else if (std::holds_alternative<std::int64_t>(v))
        e.type.kind = TypeKind::Integer;
    else if (std::holds_alternative<double>(v))
        e.type.kind = TypeKind::Real;
    e.value = std::move(v);
    return e;
}

Expr Expr::enum_constant(std::string literal) {
    Expr e;
    e.kind = Kind::Const;
    e.enum_literal = true;
    e.type.kind = TypeKind::Enumeration;
    e.value = std::move(literal);
    return e;
}

bool is_clause(const Expr& e) { return e.kind != Expr::Kind::Bool && e.kind != Expr::Kind::Not; }

Expr expand_derived_operators(Expr e) {
    for (auto& a : e.args) a = expand_derived_operators(std::move(a));
    if (e.kind != Expr::Kind::Bool) return e;
    if (e.bool_op == BoolOp::Implies)
        return Expr::boolean(BoolOp::Or, Expr::negation(std::move(e.args[0])), std::move(e.args[1]));
    if (e.bool_op == BoolOp::Xor) {
        Expr a = e.args[0];
        Expr b = e.args[1];
        Expr either = Expr::boolean(BoolOp::Or, a, b);
        Expr both = Expr::negation(Expr::boolean(BoolOp::And, std::move(a), std::move(b)));
        return Expr::boolean(BoolOp::And, std::move(either), std::move(both));
    }
    return e;
}

namespace {

void collect_leaves(const Expr& e, std::vector<const Expr*>& out) {
    if (is_clause(e)) {
        out.push_back(&e);
        return;
    }
    for (const auto& a : e.args) collect_leaves(a, out);
}

void tag_leaves(Expr& e, int& next) {
    if (is_clause(e)) {
        e.clause = next++;
        return;
    }
    e.clause = -1;
    for (auto& a : e.args) tag_leaves(a, next);
}

std::string join(const std::vector<std::string>& path, std::size_t count) {
    std::string out;
    for (std::size_t i = 0; i < count && i < path.size(); ++i) {
        if (i) out += '.';
        out += path[i];
    }
    return out;
}

struct AttrCollector {
    std::map<std::string, std::string> iterators;  // iterator name -> identifier of its range
    std::set<std::string> out;

    std::string base(const Nav& nav) const {
        if (nav.root == "self") return "";
        auto it = iterators.find(nav.root);
        return it == iterators.end() ? nav.root : it->second;
    }

    static std::string concat(const std::string& a, const std::string& b) {
        if (a.empty()) return b;
        if (b.empty()) return a;
        return a + "." + b;
    }

    std::string range_of(const Expr& receiver) const {
        if (receiver.kind == Expr::Kind::Nav) return concat(base(receiver.nav), join(receiver.nav.path, receiver.nav.path.size()));
        if (receiver.kind == Expr::Kind::Call && !receiver.args.empty()) return range_of(receiver.args[0]);
        if (receiver.kind == Expr::Kind::Var) {
            auto it = iterators.find(receiver.name);
            return it == iterators.end() ? receiver.name : it->second;
        }
        return "";
    }

    void walk(const Expr& e) {
        switch (e.kind) {
            case Expr::Kind::Nav: {
                const Nav& n = e.nav;
                if (n.target == NavTarget::Constant) return;
                std::string b = base(n);
                if (n.target == NavTarget::ValueBag) out.insert(concat(b, join(n.path, n.path.size() - 1)));
                out.insert(concat(b, join(n.path, n.path.size())));
                return;
            }
            case Expr::Kind::Var: {
                auto it = iterators.find(e.name);
                out.insert(it == iterators.end() ? e.name : it->second);
                return;
            }
            case Expr::Kind::Call: {
                walk(e.args[0]);
                if (e.args.size() < 2) return;
                bool iterates = e.call_op == CallOp::ForAll || e.call_op == CallOp::Exists ||
                                e.call_op == CallOp::One || e.call_op == CallOp::Select ||
                                e.call_op == CallOp::Reject;
                if (!iterates) {
                    walk(e.args[1]);
                    return;
                }
                auto saved = iterators;
                iterators[e.name] = range_of(e.args[0]);
                walk(e.args[1]);
                iterators = std::move(saved);
                return;
            }
            default:
                for (const auto& a : e.args) walk(a);
        }
    }
};

}  // namespace

void tag_clauses(Expr& e) {
    int next = 0;
    tag_leaves(e, next);
}

std::set<std::string> clause_attributes(const Expr& clause) {
    AttrCollector c;
    c.walk(clause);
    return std::move(c.out);
}

std::vector<Clause> extract_clauses(const Expr& body) {
    std::vector<const Expr*> leaves;
    collect_leaves(body, leaves);
    std::map<int, const Expr*> by_tag;
    std::vector<Clause> untagged;
    for (const Expr* leaf : leaves) {
        if (leaf->clause >= 0)
            by_tag.emplace(leaf->clause, leaf);
        else
            untagged.push_back({*leaf, 0, {}});
    }
    std::vector<Clause> out;
    if (!by_tag.empty() && untagged.empty()) {
        for (const auto& [tag, leaf] : by_tag) out.push_back({*leaf, static_cast<std::size_t>(tag), {}});
    } else {
        for (const Expr* leaf : leaves) out.push_back({*leaf, 0, {}});
    }
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i].index = i;
        out[i].attrs = clause_attributes(out[i].expr);
    }
    return out;
}

std::vector<Clause> extract_clauses(const OclConstraint& c) { return extract_clauses(c.body); }

Expr resolve_constants(const Expr& e) {
    if (e.kind == Expr::Kind::Nav && e.nav.target == NavTarget::Constant) {
        Expr k = Expr::constant(e.value);
        k.clause = e.clause;
        return k;
    }
    Expr out = e;
    for (auto& a : out.args) a = resolve_constants(a);
    return out;
}

}  // namespace mcdc::ocl
