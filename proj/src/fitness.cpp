#include "mcdc/fitness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "navigation.hpp"

namespace mcdc {

using ocl::CallOp;
using ocl::Expr;
using ocl::NavTarget;
using ocl::RelOp;

namespace {

double relation_distance(RelOp op, double a, double b) {
    switch (op) {
        case RelOp::Gt: return a > b ? 0.0 : b - a + kFailure;
        case RelOp::Ge: return a >= b ? 0.0 : b - a;
        case RelOp::Lt: return a < b ? 0.0 : a - b + kFailure;
        case RelOp::Le: return a <= b ? 0.0 : a - b;
        case RelOp::Eq: return std::fabs(a - b);
        case RelOp::Ne: return a != b ? 0.0 : kFailure;
    }
    return kFailure;
}

class DistanceEvaluator {
public:
    explicit DistanceEvaluator(const ObjectConfiguration& cfg) : nav_(cfg) {}

    double distance(const Expr& e, bool positive) {
        switch (e.kind) {
            case Expr::Kind::Not: return distance(e.args[0], !positive);
            case Expr::Kind::Bool: return connective(e, positive);
            case Expr::Kind::Rel: return relation(e, positive);
            case Expr::Kind::Call: return call(e, positive);
            default: {
                auto v = scalar(e);
                if (!v || !std::holds_alternative<bool>(*v)) return kUndefinedDistance;
                return std::get<bool>(*v) == positive ? 0.0 : kFailure;
            }
        }
    }

private:
    double connective(const Expr& e, bool positive) {
        const Expr& a = e.args[0];
        const Expr& b = e.args[1];
        auto conj = [&](bool pa, bool pb) { return normalize(distance(a, pa)) + normalize(distance(b, pb)); };
        auto disj = [&](bool pa, bool pb) { return std::min(distance(a, pa), distance(b, pb)); };
        switch (e.bool_op) {
            case ocl::BoolOp::And: return positive ? conj(true, true) : disj(false, false);
            case ocl::BoolOp::Or: return positive ? disj(true, true) : conj(false, false);
            case ocl::BoolOp::Implies: return positive ? disj(false, true) : conj(true, false);
            case ocl::BoolOp::Xor:
                return positive ? std::min(conj(true, false), conj(false, true))
                                : std::min(conj(true, true), conj(false, false));
        }
        return kUndefinedDistance;
    }

    double relation(const Expr& e, bool positive) {
        RelOp op = positive ? e.rel_op : ocl::inverse(e.rel_op);
        auto lhs = scalar(e.args[0]);
        auto rhs = scalar(e.args[1]);
        if (!lhs || !rhs) return kUndefinedDistance;
        auto na = as_number(*lhs);
        auto nb = as_number(*rhs);
        if (na && nb) return relation_distance(op, *na, *nb);
        bool equal = *lhs == *rhs;
        if (op == RelOp::Eq) return equal ? 0.0 : kFailure;
        if (op == RelOp::Ne) return equal ? kFailure : 0.0;
        return kUndefinedDistance;
    }

    double call(const Expr& e, bool positive) {
        switch (e.call_op) {
            case CallOp::OclIsUndefined: return undefined(e.args[0]) == positive ? 0.0 : kFailure;
            case CallOp::ForAll:
            case CallOp::Exists: {
                auto elems = objects(e.args[0]);
                if (!elems) return kUndefinedDistance;
                bool universal = (e.call_op == CallOp::ForAll) == positive;
                bool want = positive;
                return universal ? all_of(*elems, e, want) : any_of(*elems, e, want);
            }
            case CallOp::One: {
                auto elems = objects(e.args[0]);
                if (!elems) return kUndefinedDistance;
                return positive ? exactly_one(*elems, e) : not_exactly_one(*elems, e);
            }
            case CallOp::Includes:
            case CallOp::Excludes: {
                auto items = bag(e.args[0]);
                auto v = scalar(e.args[1]);
                if (!items || !v) return kUndefinedDistance;
                bool includes = (e.call_op == CallOp::Includes) == positive;
                return includes ? inclusion(*items, *v) : exclusion(*items, *v);
            }
            case CallOp::IsEmpty:
            case CallOp::NotEmpty: {
                auto n = size(e.args[0]);
                if (!n) return kUndefinedDistance;
                bool empty = (e.call_op == CallOp::IsEmpty) == positive;
                if (empty) return static_cast<double>(*n);
                return *n > 0 ? 0.0 : kFailure;
            }
            default: return kUndefinedDistance;
        }
    }

    double element_distance(const Object* o, const Expr& iter, bool want) {
        nav_bindings_.stack.emplace_back(iter.name, o);
        double d = distance(iter.args[1], want);
        nav_bindings_.stack.pop_back();
        return d;
    }

    double all_of(const std::vector<const Object*>& elems, const Expr& iter, bool want) {
        double sum = 0.0;
        for (const Object* o : elems) sum += normalize(element_distance(o, iter, want));
        return sum;
    }

    double any_of(const std::vector<const Object*>& elems, const Expr& iter, bool want) {
        if (elems.empty()) return kFailure;
        double best = std::numeric_limits<double>::infinity();
        for (const Object* o : elems) best = std::min(best, normalize(element_distance(o, iter, want)));
        return best;
    }

    double exactly_one(const std::vector<const Object*>& elems, const Expr& iter) {
        std::vector<double> to_true, to_false;
        for (const Object* o : elems) {
            double t = element_distance(o, iter, true);
            if (t == 0.0)
                to_false.push_back(normalize(element_distance(o, iter, false)));
            else
                to_true.push_back(normalize(t));
        }
        if (to_false.size() == 1) return 0.0;
        if (to_false.empty()) return to_true.empty() ? kFailure : *std::min_element(to_true.begin(), to_true.end());
        std::sort(to_false.begin(), to_false.end());
        double sum = 0.0;
        for (std::size_t i = 0; i + 1 < to_false.size(); ++i) sum += to_false[i];
        return sum;
    }

    double not_exactly_one(const std::vector<const Object*>& elems, const Expr& iter) {
        double falsify = std::numeric_limits<double>::infinity();
        double satisfy_other = std::numeric_limits<double>::infinity();
        std::size_t count = 0;
        for (const Object* o : elems) {
            double t = element_distance(o, iter, true);
            if (t == 0.0) {
                ++count;
                falsify = normalize(element_distance(o, iter, false));
            } else {
                satisfy_other = std::min(satisfy_other, normalize(t));
            }
        }
        if (count != 1) return 0.0;
        return std::min(falsify, satisfy_other);
    }

    static double inclusion(const std::vector<Value>& items, const Value& v) {
        auto target = as_number(v);
        double best = std::numeric_limits<double>::infinity();
        for (const auto& item : items) {
            if (item == v) return 0.0;
            auto n = as_number(item);
            if (n && target) best = std::min(best, std::fabs(*n - *target));
            if (n && target && best == 0.0) return 0.0;
        }
        return std::isinf(best) ? kFailure : best;
    }

    static double exclusion(const std::vector<Value>& items, const Value& v) {
        auto target = as_number(v);
        double d = 0.0;
        for (const auto& item : items) {
            auto n = as_number(item);
            bool equal = (n && target) ? *n == *target : item == v;
            if (equal) d += kFailure;
        }
        return d;
    }

    bool undefined(const Expr& receiver) {
        if (receiver.kind != Expr::Kind::Nav) return !scalar(receiver).has_value();
        return nav_.object(receiver.nav, nav_bindings_, receiver.nav.path.size()) == nullptr;
    }

    std::optional<std::vector<const Object*>> objects(const Expr& e) {
        if (e.kind == Expr::Kind::Nav && e.nav.target == NavTarget::Collection) return nav_.elements(e.nav, nav_bindings_);
        if (e.kind == Expr::Kind::Call && (e.call_op == CallOp::Select || e.call_op == CallOp::Reject)) {
            auto all = objects(e.args[0]);
            if (!all) return std::nullopt;
            bool want = e.call_op == CallOp::Select;
            std::vector<const Object*> out;
            for (const Object* o : *all)
                if (element_distance(o, e, want) == 0.0) out.push_back(o);
            return out;
        }
        return std::nullopt;
    }

    std::optional<std::vector<Value>> bag(const Expr& e) {
        if (e.kind != Expr::Kind::Nav || e.nav.target != NavTarget::ValueBag) return std::nullopt;
        auto elems = nav_.elements(e.nav, nav_bindings_);
        if (!elems) return std::nullopt;
        std::vector<Value> out;
        for (const Object* o : *elems)
            if (auto v = nav_.attribute(o, e.nav.path.back())) out.push_back(*v);
        return out;
    }

    std::optional<std::size_t> size(const Expr& e) {
        if (e.kind == Expr::Kind::Nav && e.nav.target == NavTarget::ValueBag) {
            auto b = bag(e);
            if (!b) return std::nullopt;
            return b->size();
        }
        auto o = objects(e);
        if (!o) return std::nullopt;
        return o->size();
    }

    std::optional<Value> scalar(const Expr& e) {
        switch (e.kind) {
            case Expr::Kind::Const: return e.value;
            case Expr::Kind::Var: return nav_.param(e.name);
            case Expr::Kind::Nav:
                switch (e.nav.target) {
                    case NavTarget::Constant: return e.value;
                    case NavTarget::Attribute:
                        return nav_.attribute(nav_.object(e.nav, nav_bindings_, e.nav.path.size() - 1), e.nav.path.back());
                    default: return std::nullopt;
                }
            case Expr::Kind::Arith: {
                auto a = scalar(e.args[0]);
                auto b = scalar(e.args[1]);
                if (!a || !b) return std::nullopt;
                auto x = as_number(*a);
                auto y = as_number(*b);
                if (!x || !y) return std::nullopt;
                switch (e.arith_op) {
                    case ocl::ArithOp::Add: return *x + *y;
                    case ocl::ArithOp::Sub: return *x - *y;
                    case ocl::ArithOp::Mul: return *x * *y;
                    case ocl::ArithOp::Div:
                        if (*y == 0.0) return std::nullopt;
                        return *x / *y;
                }
                return std::nullopt;
            }
            case Expr::Kind::Call:
                if (e.call_op == CallOp::Size) {
                    auto n = size(e.args[0]);
                    if (!n) return std::nullopt;
                    return static_cast<std::int64_t>(*n);
                }
                [[fallthrough]];
            default: {
                // Boolean subexpression used as a value.
                if (distance(e, true) == 0.0) return true;
                if (distance(e, false) == 0.0) return false;
                return std::nullopt;
            }
        }
    }

    detail::Navigator nav_;
    detail::Bindings nav_bindings_;
};

}  // namespace

Fitness evaluate(const Expr& e, const ObjectConfiguration& cfg) {
    DistanceEvaluator ev(cfg);
    double d = ev.distance(e, true);
    if (!std::isfinite(d)) d = kUndefinedDistance;
    return {d, d == 0.0};
}

TruthVector clause_truth_vector(const std::vector<ocl::Clause>& clauses, const ObjectConfiguration& cfg) {
    TruthVector out;
    out.reserve(clauses.size());
    for (const auto& c : clauses) out.push_back(holds(c.expr, cfg));
    return out;
}

}  // namespace mcdc
