#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "mcdc/error.hpp"
#include "mcdc/ocl.hpp"
#include "ocl_lexer.hpp"

namespace mcdc::ocl {

namespace {

using detail::Tok;
using detail::Token;

const std::set<std::string, std::less<>> kReserved = {
    "and", "or", "xor", "implies", "not", "true", "false", "self", "context", "inv", "pre", "post",
};
const std::set<std::string, std::less<>> kUnsupportedKeywords = {
    "let", "if", "then", "else", "endif", "def", "Tuple", "iterate", "null", "invalid",
};

ExprType type_of(const AttrType& a) {
    ExprType t;
    switch (a.kind) {
        case PrimitiveKind::Integer: t.kind = TypeKind::Integer; break;
        case PrimitiveKind::Real: t.kind = TypeKind::Real; break;
        case PrimitiveKind::Boolean: t.kind = TypeKind::Boolean; break;
        case PrimitiveKind::Enumeration:
            t.kind = TypeKind::Enumeration;
            t.element = a;
            break;
        case PrimitiveKind::String: throw UnsupportedError("String values are not supported in constraints");
    }
    return t;
}

bool is_iterator_op(CallOp op) {
    return op == CallOp::ForAll || op == CallOp::Exists || op == CallOp::One || op == CallOp::Select ||
           op == CallOp::Reject;
}

class Parser {
public:
    Parser(std::string_view text, const ClassModel& model) : toks_(detail::tokenize(text)), model_(model) {}

    std::vector<OclConstraint> parse_file() {
        std::vector<OclConstraint> out;
        std::set<std::string> ids;
        while (!at(Tok::End)) {
            std::string label;
            if (at(Tok::Ident) && peek(1).kind == Tok::Colon && peek(2).kind == Tok::Ident && peek(2).text == "context") {
                label = next().text;
                next();
            }
            expect_keyword("context");
            parse_context_block(label, out);
        }
        if (out.empty()) throw ParseError("no constraints found", 1, 1);
        for (auto& c : out) {
            if (!ids.insert(c.id).second) throw SemanticError("duplicate constraint id '" + c.id + "'");
        }
        return out;
    }

    Expr parse_standalone(std::string_view context, const std::vector<Param>& params) {
        self_ = model_.find_class(context);
        if (!self_) throw SemanticError("unknown context class '" + std::string(context) + "'");
        params_ = params;
        Expr e = parse_expr();
        if (!at(Tok::End)) fail("unexpected '" + cur().text + "' after expression");
        require_boolean(e, "constraint body");
        tag_clauses(e);
        return e;
    }

private:
    // ---- token helpers -------------------------------------------------

    const Token& cur() const { return toks_[pos_]; }
    const Token& peek(std::size_t off) const { return toks_[std::min(pos_ + off, toks_.size() - 1)]; }
    bool at(Tok k) const { return cur().kind == k; }
    bool at_keyword(std::string_view kw) const { return at(Tok::Ident) && cur().text == kw; }
    const Token& next() {
        const Token& t = toks_[pos_];
        if (pos_ + 1 < toks_.size()) ++pos_;
        return t;
    }
    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, cur().line, cur().column); }
    [[noreturn]] void type_fail(const std::string& msg) const {
        throw SemanticError(msg + " at line " + std::to_string(cur().line) + ", column " + std::to_string(cur().column));
    }
    const Token& expect(Tok k, std::string_view what) {
        if (!at(k)) fail("expected " + std::string(what) + (at(Tok::End) ? " before end of input" : ", found '" + cur().text + "'"));
        return next();
    }
    void expect_keyword(std::string_view kw) {
        if (!at_keyword(kw)) fail("expected '" + std::string(kw) + "'");
        next();
    }
    std::string expect_name(std::string_view what) {
        const Token& t = expect(Tok::Ident, what);
        if (kReserved.count(t.text)) throw ParseError("reserved word '" + t.text + "' used as " + std::string(what), t.line, t.column);
        return t.text;
    }

    // ---- context blocks ------------------------------------------------

    AttrType parse_param_type() {
        const Token& t = expect(Tok::Ident, "type name");
        if (t.text == "Integer") return AttrType::integer();
        if (t.text == "Real") return AttrType::real();
        if (t.text == "Boolean") return AttrType::boolean();
        if (t.text == "String") throw UnsupportedError("String parameters are not supported");
        throw ParseError("unsupported parameter type '" + t.text + "'", t.line, t.column);
    }

    void parse_context_block(const std::string& label, std::vector<OclConstraint>& out) {
        const Token& ctx_tok = cur();
        std::string ctx = expect_name("context class");
        self_ = model_.find_class(ctx);
        if (!self_) throw SemanticError("unknown context class '" + ctx + "' (line " + std::to_string(ctx_tok.line) + ")");
        std::string operation;
        params_.clear();
        bool op_context = false;
        if (at(Tok::ColonColon)) {
            next();
            op_context = true;
            operation = expect_name("operation name");
            expect(Tok::LParen, "'('");
            std::set<std::string> seen;
            while (!at(Tok::RParen)) {
                if (at_keyword("in") || at_keyword("out") || at_keyword("inout")) next();
                const Token& nt = cur();
                std::string name = expect_name("parameter name");
                expect(Tok::Colon, "':'");
                AttrType type = parse_param_type();
                if (!seen.insert(name).second)
                    throw SemanticError("duplicate parameter '" + name + "' (line " + std::to_string(nt.line) + ")");
                if (self_->find_attribute(name) || self_->find_constant(name) || model_.find_association(ctx, name))
                    throw SemanticError("parameter '" + name + "' shadows a member of class '" + ctx + "'");
                params_.push_back({name, type});
                if (!at(Tok::Comma)) break;
                next();
            }
            expect(Tok::RParen, "')'");
            if (at(Tok::Colon)) {
                next();
                expect(Tok::Ident, "return type");
            }
        }
        bool first = true;
        while (at_keyword("inv") || at_keyword("pre") || at_keyword("post") || at_keyword("def")) {
            const Token& kw = next();
            if (kw.text == "post" || kw.text == "def")
                throw UnsupportedError("'" + kw.text + "' constraints are not supported (line " + std::to_string(kw.line) + ")");
            OclConstraint c;
            c.context = ctx;
            c.operation = operation;
            c.params = params_;
            c.kind = kw.text == "inv" ? ConstraintKind::Invariant : ConstraintKind::Precondition;
            if (c.kind == ConstraintKind::Precondition && !op_context)
                throw ParseError("'pre' requires an operation context", kw.line, kw.column);
            if (c.kind == ConstraintKind::Invariant && op_context)
                throw ParseError("'inv' requires a class context", kw.line, kw.column);
            std::string inv_name;
            if (at(Tok::Ident)) inv_name = expect_name("constraint name");
            expect(Tok::Colon, "':'");
            c.source = parse_expr();
            require_boolean(c.source, "constraint body");
            tag_clauses(c.source);
            c.body = expand_derived_operators(c.source);
            c.clause_count = extract_clauses(c.source).size();
            if (first && !label.empty())
                c.id = label;
            else if (!inv_name.empty())
                c.id = inv_name;
            else
                c.id = "C" + std::to_string(out.size() + 1);
            first = false;
            out.push_back(std::move(c));
        }
        if (first) fail("expected 'inv' or 'pre'");
    }

    // ---- expressions ---------------------------------------------------

    void require_boolean(const Expr& e, std::string_view what) const {
        if (e.type.kind != TypeKind::Boolean) type_fail(std::string(what) + " must be Boolean");
    }
    void require_numeric(const Expr& e, std::string_view what) const {
        if (!e.type.is_numeric()) type_fail(std::string(what) + " must be numeric");
    }

    Expr parse_expr() { return parse_binary_bool(0); }

    // Precedence ladder, loosest first.
    Expr parse_binary_bool(int level) {
        static constexpr BoolOp ladder[] = {BoolOp::Implies, BoolOp::Xor, BoolOp::Or, BoolOp::And};
        if (level == 4) return parse_relational();
        Expr lhs = parse_binary_bool(level + 1);
        while (at_keyword(spelling(ladder[level]))) {
            next();
            Expr rhs = parse_binary_bool(level + 1);
            require_boolean(lhs, "operand of '" + std::string(spelling(ladder[level])) + "'");
            require_boolean(rhs, "operand of '" + std::string(spelling(ladder[level])) + "'");
            lhs = Expr::boolean(ladder[level], std::move(lhs), std::move(rhs));
        }
        return lhs;
    }

    std::optional<RelOp> rel_token() const {
        switch (cur().kind) {
            case Tok::Lt: return RelOp::Lt;
            case Tok::Le: return RelOp::Le;
            case Tok::Gt: return RelOp::Gt;
            case Tok::Ge: return RelOp::Ge;
            case Tok::Eq: return RelOp::Eq;
            case Tok::Ne: return RelOp::Ne;
            default: return std::nullopt;
        }
    }

    Expr parse_relational() {
        Expr lhs = parse_additive();
        auto op = rel_token();
        if (!op) return lhs;
        next();
        Expr rhs = parse_additive();
        check_relation(*op, lhs, rhs);
        if (rel_token()) fail("relational operators cannot be chained");
        return Expr::relation(*op, std::move(lhs), std::move(rhs));
    }

    void check_relation(RelOp op, const Expr& lhs, const Expr& rhs) const {
        const auto& a = lhs.type;
        const auto& b = rhs.type;
        if (a.is_numeric() && b.is_numeric()) return;
        bool equality = op == RelOp::Eq || op == RelOp::Ne;
        if (a.kind == TypeKind::Boolean && b.kind == TypeKind::Boolean) {
            if (!equality) type_fail("Boolean values only support '=' and '<>'");
            return;
        }
        if (a.kind == TypeKind::Enumeration && b.kind == TypeKind::Enumeration) {
            if (!equality) type_fail("enumeration values only support '=' and '<>'");
            auto check_literal = [&](const Expr& lit, const Expr& other) {
                if (lit.kind == Expr::Kind::Const && lit.enum_literal && !other.type.element.literals.empty()) {
                    const auto& ls = other.type.element.literals;
                    if (std::find(ls.begin(), ls.end(), std::get<std::string>(lit.value)) == ls.end())
                        throw SemanticError("unknown enumeration literal '#" + std::get<std::string>(lit.value) + "'");
                }
            };
            check_literal(lhs, rhs);
            check_literal(rhs, lhs);
            return;
        }
        type_fail("operands of '" + std::string(spelling(op)) + "' have incompatible types");
    }

    Expr parse_additive() {
        Expr lhs = parse_multiplicative();
        while (at(Tok::Plus) || at(Tok::Minus)) {
            ArithOp op = next().kind == Tok::Plus ? ArithOp::Add : ArithOp::Sub;
            Expr rhs = parse_multiplicative();
            require_numeric(lhs, "arithmetic operand");
            require_numeric(rhs, "arithmetic operand");
            lhs = Expr::arith(op, std::move(lhs), std::move(rhs));
        }
        return lhs;
    }

    Expr parse_multiplicative() {
        Expr lhs = parse_unary();
        while (at(Tok::Star) || at(Tok::Slash)) {
            ArithOp op = next().kind == Tok::Star ? ArithOp::Mul : ArithOp::Div;
            Expr rhs = parse_unary();
            require_numeric(lhs, "arithmetic operand");
            require_numeric(rhs, "arithmetic operand");
            lhs = Expr::arith(op, std::move(lhs), std::move(rhs));
        }
        return lhs;
    }

    Expr parse_unary() {
        if (at_keyword("not")) {
            next();
            Expr operand = parse_unary();
            require_boolean(operand, "operand of 'not'");
            return Expr::negation(std::move(operand));
        }
        if (at(Tok::Minus)) {
            next();
            if (at(Tok::Integer) || at(Tok::Real)) {
                Expr lit = parse_number();
                if (auto* i = std::get_if<std::int64_t>(&lit.value)) *i = -*i;
                if (auto* d = std::get_if<double>(&lit.value)) *d = -*d;
                return parse_postfix(std::move(lit));
            }
            Expr operand = parse_unary();
            require_numeric(operand, "operand of unary '-'");
            return Expr::arith(ArithOp::Sub, Expr::constant(std::int64_t{0}), std::move(operand));
        }
        return parse_postfix(parse_primary());
    }

    Expr parse_number() {
        const Token& t = next();
        if (t.kind == Tok::Integer) {
            std::int64_t v = 0;
            auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
            if (ec != std::errc()) throw ParseError("integer literal out of range", t.line, t.column);
            return Expr::constant(v);
        }
        return Expr::constant(std::stod(t.text));
    }

    Expr parse_primary() {
        const Token& t = cur();
        switch (t.kind) {
            case Tok::LParen: {
                next();
                Expr e = parse_expr();
                expect(Tok::RParen, "')'");
                return e;
            }
            case Tok::Integer:
            case Tok::Real: return parse_number();
            case Tok::EnumLiteral: return Expr::enum_constant(next().text);
            case Tok::String: throw UnsupportedError("string literals are not supported (line " + std::to_string(t.line) + ")");
            case Tok::Ident: break;
            case Tok::End: fail("unexpected end of input");
            default: fail("unexpected '" + t.text + "'");
        }
        if (t.text == "true" || t.text == "false") {
            next();
            return Expr::constant(t.text == "true");
        }
        if (kUnsupportedKeywords.count(t.text))
            throw UnsupportedError("'" + t.text + "' expressions are not supported (line " + std::to_string(t.line) + ")");
        if (t.text == "self") {
            next();
            Expr e;
            e.kind = Expr::Kind::Nav;
            e.nav.root = "self";
            e.nav.target = NavTarget::Object;
            e.type.kind = TypeKind::Object;
            e.type.class_name = self_->name;
            return e;
        }
        if (kReserved.count(t.text)) fail("unexpected '" + t.text + "'");
        std::string name = next().text;
        for (auto it = iters_.rbegin(); it != iters_.rend(); ++it) {
            if (!it->name.empty() && it->name == name) {
                Expr e;
                e.kind = Expr::Kind::Nav;
                e.nav.root = name;
                e.nav.target = NavTarget::Object;
                e.type.kind = TypeKind::Object;
                e.type.class_name = it->cls->name;
                return e;
            }
        }
        for (const auto& p : params_) {
            if (p.name == name) {
                Expr e;
                e.kind = Expr::Kind::Var;
                e.name = name;
                e.type = type_of(p.type);
                return e;
            }
        }
        for (auto it = iters_.rbegin(); it != iters_.rend(); ++it) {
            if (it->name.empty() && has_member(*it->cls, name)) {
                Expr root;
                root.kind = Expr::Kind::Nav;
                root.nav.root = "";
                root.type.kind = TypeKind::Object;
                root.type.class_name = it->cls->name;
                return extend(std::move(root), name, t);
            }
        }
        if (has_member(*self_, name)) {
            Expr root;
            root.kind = Expr::Kind::Nav;
            root.nav.root = "self";
            root.type.kind = TypeKind::Object;
            root.type.class_name = self_->name;
            return extend(std::move(root), name, t);
        }
        throw SemanticError("unknown identifier '" + name + "' (line " + std::to_string(t.line) + ", column " +
                            std::to_string(t.column) + ")");
    }

    bool has_member(const ClassDef& cls, std::string_view name) const {
        return cls.find_attribute(name) || cls.find_constant(name) || model_.find_association(cls.name, name);
    }

    // Appends `.member` to a navigation expression.
    Expr extend(Expr nav, const std::string& member, const Token& where) {
        if (nav.kind != Expr::Kind::Nav) type_fail("'.' navigation requires an object");
        if (nav.type.kind == TypeKind::Collection) {
            const ClassDef* elem = model_.find_class(nav.type.class_name);
            const Attribute* attr = elem->find_attribute(member);
            if (!attr)
                throw UnsupportedError("only an attribute may follow a collection navigation ('" + member + "')");
            ExprType et = type_of(attr->type);
            nav.nav.path.push_back(member);
            nav.nav.target = NavTarget::ValueBag;
            nav.type = ExprType{TypeKind::ValueBag, elem->name, attr->type};
            (void)et;
            return nav;
        }
        if (nav.type.kind != TypeKind::Object)
            throw UnsupportedError("navigation from a primitive value ('" + member + "', line " +
                                   std::to_string(where.line) + ")");
        const ClassDef* cls = model_.find_class(nav.type.class_name);
        if (const AssociationDef* assoc = model_.find_association(cls->name, member)) {
            nav.nav.path.push_back(member);
            if (assoc->multiplicity.is_collection()) {
                nav.nav.target = NavTarget::Collection;
                nav.type = ExprType{TypeKind::Collection, assoc->target, {}};
            } else {
                nav.nav.target = NavTarget::Object;
                nav.type = ExprType{TypeKind::Object, assoc->target, {}};
            }
            return nav;
        }
        if (const Attribute* attr = cls->find_attribute(member)) {
            nav.type = type_of(attr->type);
            nav.nav.path.push_back(member);
            nav.nav.target = NavTarget::Attribute;
            return nav;
        }
        if (const Constant* k = cls->find_constant(member)) {
            nav.nav.path.push_back(member);
            nav.nav.target = NavTarget::Constant;
            nav.value = k->value;
            if (std::holds_alternative<bool>(k->value))
                nav.type.kind = TypeKind::Boolean;
            else if (std::holds_alternative<std::int64_t>(k->value))
                nav.type.kind = TypeKind::Integer;
            else
                nav.type.kind = TypeKind::Real;
            nav.type.class_name.clear();
            return nav;
        }
        throw SemanticError("class '" + cls->name + "' has no member '" + member + "' (line " +
                            std::to_string(where.line) + ", column " + std::to_string(where.column) + ")");
    }

    Expr parse_postfix(Expr e) {
        while (true) {
            if (at(Tok::Dot)) {
                next();
                const Token& t = cur();
                std::string member = expect_name("member name");
                if (at(Tok::LParen)) {
                    if (member != "oclIsUndefined")
                        throw UnsupportedError("operation '" + member + "' is not supported (line " +
                                               std::to_string(t.line) + ")");
                    next();
                    expect(Tok::RParen, "')'");
                    if (e.type.kind != TypeKind::Object || e.kind != Expr::Kind::Nav || e.nav.path.empty())
                        type_fail("oclIsUndefined() requires an object navigation");
                    Expr call;
                    call.kind = Expr::Kind::Call;
                    call.call_op = CallOp::OclIsUndefined;
                    call.type.kind = TypeKind::Boolean;
                    call.args.push_back(std::move(e));
                    e = std::move(call);
                    continue;
                }
                e = extend(std::move(e), member, t);
                continue;
            }
            if (at(Tok::Arrow)) {
                next();
                e = parse_collection_call(std::move(e));
                continue;
            }
            return e;
        }
    }

    Expr parse_collection_call(Expr receiver) {
        const Token& t = cur();
        std::string name = expect_name("collection operation");
        static const std::map<std::string, CallOp, std::less<>> ops = {
            {"forAll", CallOp::ForAll},     {"exists", CallOp::Exists},     {"one", CallOp::One},
            {"select", CallOp::Select},     {"reject", CallOp::Reject},     {"includes", CallOp::Includes},
            {"excludes", CallOp::Excludes}, {"isEmpty", CallOp::IsEmpty},   {"notEmpty", CallOp::NotEmpty},
            {"size", CallOp::Size},
        };
        auto it = ops.find(name);
        if (it == ops.end())
            throw UnsupportedError("collection operation '" + name + "' is not supported (line " +
                                   std::to_string(t.line) + ")");
        CallOp op = it->second;
        bool is_collection = receiver.type.kind == TypeKind::Collection;
        bool is_bag = receiver.type.kind == TypeKind::ValueBag;
        if (!is_collection && !is_bag) type_fail("'->" + name + "' requires a collection");
        Expr call;
        call.kind = Expr::Kind::Call;
        call.call_op = op;
        expect(Tok::LParen, "'('");
        if (is_iterator_op(op)) {
            if (!is_collection) throw UnsupportedError("'->" + name + "' over attribute values is not supported");
            std::string iter;
            if (at(Tok::Ident) && peek(1).kind == Tok::Bar) {
                iter = expect_name("iterator name");
                next();
            } else if (at(Tok::Ident) && peek(1).kind == Tok::Colon && peek(2).kind == Tok::Ident &&
                       peek(3).kind == Tok::Bar) {
                iter = expect_name("iterator name");
                next();
                const Token& ty = next();
                if (ty.text != receiver.type.class_name)
                    throw SemanticError("iterator type '" + ty.text + "' does not match '" + receiver.type.class_name + "'");
                next();
            }
            if (!iter.empty() && (std::any_of(params_.begin(), params_.end(), [&](const Param& p) { return p.name == iter; }) ||
                                  has_member(*self_, iter)))
                throw SemanticError("iterator '" + iter + "' shadows another name");
            iters_.push_back({iter, model_.find_class(receiver.type.class_name)});
            Expr body = parse_expr();
            iters_.pop_back();
            require_boolean(body, "iterator body");
            call.name = iter;
            call.args.push_back(std::move(receiver));
            call.args.push_back(std::move(body));
            if (op == CallOp::Select || op == CallOp::Reject)
                call.type = call.args[0].type;
            else
                call.type.kind = TypeKind::Boolean;
        } else if (op == CallOp::Includes || op == CallOp::Excludes) {
            if (!is_bag) throw UnsupportedError("'->" + name + "' over objects is not supported; navigate to an attribute");
            Expr arg = parse_expr();
            ExprType elem = type_of(receiver.type.element);
            bool ok = (elem.is_numeric() && arg.type.is_numeric()) ||
                      (elem.kind == TypeKind::Boolean && arg.type.kind == TypeKind::Boolean) ||
                      (elem.kind == TypeKind::Enumeration && arg.type.kind == TypeKind::Enumeration);
            if (!ok) type_fail("argument of '->" + name + "' does not match the element type");
            call.type.kind = TypeKind::Boolean;
            call.args.push_back(std::move(receiver));
            call.args.push_back(std::move(arg));
        } else {
            call.type.kind = op == CallOp::Size ? TypeKind::Integer : TypeKind::Boolean;
            call.args.push_back(std::move(receiver));
        }
        expect(Tok::RParen, "')'");
        return call;
    }

    struct Iter {
        std::string name;
        const ClassDef* cls;
    };

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    const ClassModel& model_;
    const ClassDef* self_ = nullptr;
    std::vector<Param> params_;
    std::vector<Iter> iters_;
};

}  // namespace

std::vector<OclConstraint> parse(std::string_view text, const ClassModel& model) {
    Parser p(text, model);
    return p.parse_file();
}

Expr parse_expression(std::string_view text, const ClassModel& model, std::string_view context,
                      const std::vector<Param>& params) {
    Parser p(text, model);
    return p.parse_standalone(context, params);
}

std::vector<OclConstraint> load(const std::filesystem::path& path, const ClassModel& model) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    return parse(text.str(), model);
}

}  // namespace mcdc::ocl
