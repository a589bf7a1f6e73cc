// Reference evaluator: three-valued OCL semantics, written without reusing the
// distance code so the two can check each other.

#include <optional>

#include "mcdc/error.hpp"
#include "mcdc/fitness.hpp"
#include "navigation.hpp"

namespace mcdc {

using ocl::CallOp;
using ocl::Expr;
using ocl::NavTarget;

namespace {

enum class Tri { False, True, Undefined };

Tri tri(bool b) { return b ? Tri::True : Tri::False; }

Tri tri_not(Tri t) {
    if (t == Tri::Undefined) return t;
    return t == Tri::True ? Tri::False : Tri::True;
}

Tri tri_and(Tri a, Tri b) {
    if (a == Tri::False || b == Tri::False) return Tri::False;
    if (a == Tri::Undefined || b == Tri::Undefined) return Tri::Undefined;
    return Tri::True;
}

Tri tri_or(Tri a, Tri b) { return tri_not(tri_and(tri_not(a), tri_not(b))); }

class Interpreter {
public:
    explicit Interpreter(const ObjectConfiguration& cfg) : nav_(cfg) {}

    Tri truth(const Expr& e) {
        switch (e.kind) {
            case Expr::Kind::Not: return tri_not(truth(e.args[0]));
            case Expr::Kind::Bool: {
                Tri a = truth(e.args[0]);
                Tri b = truth(e.args[1]);
                switch (e.bool_op) {
                    case ocl::BoolOp::And: return tri_and(a, b);
                    case ocl::BoolOp::Or: return tri_or(a, b);
                    case ocl::BoolOp::Implies: return tri_or(tri_not(a), b);
                    case ocl::BoolOp::Xor: return tri_or(tri_and(a, tri_not(b)), tri_and(tri_not(a), b));
                }
                return Tri::Undefined;
            }
            case Expr::Kind::Rel: {
                auto a = value(e.args[0]);
                auto b = value(e.args[1]);
                if (!a || !b) return Tri::Undefined;
                auto x = as_number(*a);
                auto y = as_number(*b);
                if (x && y) {
                    switch (e.rel_op) {
                        case ocl::RelOp::Lt: return tri(*x < *y);
                        case ocl::RelOp::Le: return tri(*x <= *y);
                        case ocl::RelOp::Gt: return tri(*x > *y);
                        case ocl::RelOp::Ge: return tri(*x >= *y);
                        case ocl::RelOp::Eq: return tri(*x == *y);
                        case ocl::RelOp::Ne: return tri(*x != *y);
                    }
                }
                if (e.rel_op == ocl::RelOp::Eq) return tri(*a == *b);
                if (e.rel_op == ocl::RelOp::Ne) return tri(*a != *b);
                return Tri::Undefined;
            }
            case Expr::Kind::Call: return call(e);
            default: {
                auto v = value(e);
                if (!v || !std::holds_alternative<bool>(*v)) return Tri::Undefined;
                return tri(std::get<bool>(*v));
            }
        }
    }

private:
    Tri call(const Expr& e) {
        if (e.call_op == CallOp::OclIsUndefined) {
            const Expr& r = e.args[0];
            if (r.kind == Expr::Kind::Nav) return tri(nav_.object(r.nav, bind_, r.nav.path.size()) == nullptr);
            return tri(!value(r).has_value());
        }
        if (e.call_op == CallOp::Includes || e.call_op == CallOp::Excludes) {
            auto items = bag(e.args[0]);
            auto v = value(e.args[1]);
            if (!items || !v) return Tri::Undefined;
            bool found = false;
            for (const auto& item : *items) {
                auto a = as_number(item);
                auto b = as_number(*v);
                if ((a && b) ? *a == *b : item == *v) found = true;
            }
            return tri(found == (e.call_op == CallOp::Includes));
        }
        if (e.call_op == CallOp::IsEmpty || e.call_op == CallOp::NotEmpty) {
            auto n = count(e.args[0]);
            if (!n) return Tri::Undefined;
            return tri((*n == 0) == (e.call_op == CallOp::IsEmpty));
        }
        auto elems = collection(e.args[0]);
        if (!elems) return Tri::Undefined;
        switch (e.call_op) {
            case CallOp::ForAll: {
                Tri acc = Tri::True;
                for (const Object* o : *elems) acc = tri_and(acc, body(e, o));
                return acc;
            }
            case CallOp::Exists: {
                Tri acc = Tri::False;
                for (const Object* o : *elems) acc = tri_or(acc, body(e, o));
                return acc;
            }
            case CallOp::One: {
                int n = 0;
                for (const Object* o : *elems)
                    if (body(e, o) == Tri::True) ++n;
                return tri(n == 1);
            }
            default: return Tri::Undefined;
        }
    }

    Tri body(const Expr& iter, const Object* o) {
        bind_.stack.emplace_back(iter.name, o);
        Tri t = truth(iter.args[1]);
        bind_.stack.pop_back();
        return t;
    }

    std::optional<std::vector<const Object*>> collection(const Expr& e) {
        if (e.kind == Expr::Kind::Nav && e.nav.target == NavTarget::Collection) return nav_.elements(e.nav, bind_);
        if (e.kind == Expr::Kind::Call && (e.call_op == CallOp::Select || e.call_op == CallOp::Reject)) {
            auto all = collection(e.args[0]);
            if (!all) return std::nullopt;
            Tri keep = e.call_op == CallOp::Select ? Tri::True : Tri::False;
            std::vector<const Object*> out;
            for (const Object* o : *all)
                if (body(e, o) == keep) out.push_back(o);
            return out;
        }
        return std::nullopt;
    }

    std::optional<std::vector<Value>> bag(const Expr& e) {
        if (e.kind != Expr::Kind::Nav || e.nav.target != NavTarget::ValueBag) return std::nullopt;
        auto elems = nav_.elements(e.nav, bind_);
        if (!elems) return std::nullopt;
        std::vector<Value> out;
        for (const Object* o : *elems) {
            auto it = o->attrs.find(e.nav.path.back());
            if (it != o->attrs.end()) out.push_back(it->second);
        }
        return out;
    }

    std::optional<std::size_t> count(const Expr& e) {
        if (auto b = bag(e)) return b->size();
        if (auto c = collection(e)) return c->size();
        return std::nullopt;
    }

    std::optional<Value> value(const Expr& e) {
        switch (e.kind) {
            case Expr::Kind::Const: return e.value;
            case Expr::Kind::Var: return nav_.param(e.name);
            case Expr::Kind::Nav: {
                if (e.nav.target == NavTarget::Constant) return e.value;
                if (e.nav.target != NavTarget::Attribute) return std::nullopt;
                const Object* o = nav_.object(e.nav, bind_, e.nav.path.size() - 1);
                return nav_.attribute(o, e.nav.path.back());
            }
            case Expr::Kind::Arith: {
                auto a = value(e.args[0]);
                auto b = value(e.args[1]);
                if (!a || !b) return std::nullopt;
                double x = *as_number(*a), y = *as_number(*b);
                switch (e.arith_op) {
                    case ocl::ArithOp::Add: return x + y;
                    case ocl::ArithOp::Sub: return x - y;
                    case ocl::ArithOp::Mul: return x * y;
                    case ocl::ArithOp::Div:
                        if (y == 0.0) return std::nullopt;
                        return x / y;
                }
                return std::nullopt;
            }
            case Expr::Kind::Call:
                if (e.call_op == CallOp::Size) {
                    auto n = count(e.args[0]);
                    if (!n) return std::nullopt;
                    return static_cast<std::int64_t>(*n);
                }
                [[fallthrough]];
            default: {
                Tri t = truth(e);
                if (t == Tri::Undefined) return std::nullopt;
                return t == Tri::True;
            }
        }
    }

    detail::Navigator nav_;
    detail::Bindings bind_;
};

}  // namespace

bool holds(const Expr& e, const ObjectConfiguration& cfg) { return Interpreter(cfg).truth(e) == Tri::True; }

}  // namespace mcdc
