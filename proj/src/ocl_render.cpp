#include <charconv>
#include <cmath>

#include "mcdc/ocl.hpp"

namespace mcdc::ocl {

namespace {

constexpr int kPrecImplies = 1;
constexpr int kPrecXor = 2;
constexpr int kPrecOr = 3;
constexpr int kPrecAnd = 4;
constexpr int kPrecRel = 5;
constexpr int kPrecAdd = 6;
constexpr int kPrecMul = 7;
constexpr int kPrecUnary = 8;
constexpr int kPrecPrimary = 9;

int precedence(const Expr& e) {
    switch (e.kind) {
        case Expr::Kind::Bool:
            switch (e.bool_op) {
                case BoolOp::Implies: return kPrecImplies;
                case BoolOp::Xor: return kPrecXor;
                case BoolOp::Or: return kPrecOr;
                case BoolOp::And: return kPrecAnd;
            }
            break;
        case Expr::Kind::Rel: return kPrecRel;
        case Expr::Kind::Arith: return e.arith_op == ArithOp::Add || e.arith_op == ArithOp::Sub ? kPrecAdd : kPrecMul;
        case Expr::Kind::Not: return kPrecUnary;
        default: break;
    }
    return kPrecPrimary;
}

std::string format_real(double d) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, d);
    std::string s(buf, p);
    if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
    return s;
}

std::string literal(const Expr& e) {
    if (e.enum_literal) return "#" + std::get<std::string>(e.value);
    if (const auto* b = std::get_if<bool>(&e.value)) return *b ? "true" : "false";
    if (const auto* i = std::get_if<std::int64_t>(&e.value)) return std::to_string(*i);
    if (const auto* d = std::get_if<double>(&e.value)) return format_real(*d);
    return "'" + std::get<std::string>(e.value) + "'";
}

bool negative_literal(const Expr& e) {
    if (e.kind != Expr::Kind::Const) return false;
    if (const auto* i = std::get_if<std::int64_t>(&e.value)) return *i < 0;
    if (const auto* d = std::get_if<double>(&e.value)) return std::signbit(*d);
    return false;
}

std::string nav_text(const Nav& n) {
    std::string out = n.root;
    for (const auto& hop : n.path) {
        if (!out.empty()) out += '.';
        out += hop;
    }
    return out;
}

void emit(const Expr& e, std::string& out);

void emit_operand(const Expr& e, int min_prec, bool arith_parent, std::string& out) {
    bool parens = precedence(e) < min_prec || (arith_parent && negative_literal(e));
    if (parens) out += '(';
    emit(e, out);
    if (parens) out += ')';
}

void emit(const Expr& e, std::string& out) {
    switch (e.kind) {
        case Expr::Kind::Bool: {
            int p = precedence(e);
            emit_operand(e.args[0], p, false, out);
            out += ' ';
            out += spelling(e.bool_op);
            out += ' ';
            emit_operand(e.args[1], p + 1, false, out);
            return;
        }
        case Expr::Kind::Not:
            out += "not ";
            emit_operand(e.args[0], kPrecUnary, false, out);
            return;
        case Expr::Kind::Rel:
            emit_operand(e.args[0], kPrecAdd, false, out);
            out += spelling(e.rel_op);
            emit_operand(e.args[1], kPrecAdd, false, out);
            return;
        case Expr::Kind::Arith: {
            int p = precedence(e);
            emit_operand(e.args[0], p, true, out);
            out += spelling(e.arith_op);
            emit_operand(e.args[1], p + 1, true, out);
            return;
        }
        case Expr::Kind::Nav: out += nav_text(e.nav); return;
        case Expr::Kind::Var: out += e.name; return;
        case Expr::Kind::Const: out += literal(e); return;
        case Expr::Kind::Call:
            emit(e.args[0], out);
            if (e.call_op == CallOp::OclIsUndefined) {
                out += ".oclIsUndefined()";
                return;
            }
            out += "->";
            out += spelling(e.call_op);
            out += '(';
            if (e.args.size() > 1) {
                if (!e.name.empty()) {
                    out += e.name;
                    out += " | ";
                }
                emit(e.args[1], out);
            }
            out += ')';
            return;
    }
}

}  // namespace

std::string render(const Expr& e) {
    std::string out;
    emit(e, out);
    return out;
}

std::string render(const OclConstraint& c, const Expr& body) {
    std::string out = "context " + c.context;
    if (c.kind == ConstraintKind::Precondition) {
        out += "::" + c.operation + "(";
        for (std::size_t i = 0; i < c.params.size(); ++i) {
            if (i) out += ", ";
            out += "in " + c.params[i].name + " : " + std::string(kind_name(c.params[i].type.kind));
        }
        out += ") pre: ";
    } else {
        out += " inv: ";
    }
    return out + render(body);
}

}  // namespace mcdc::ocl
