#pragma once

#include <cstddef>
#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "mcdc/model.hpp"

namespace mcdc::ocl {

enum class BoolOp { And, Or, Xor, Implies };
enum class RelOp { Lt, Le, Gt, Ge, Eq, Ne };
enum class ArithOp { Add, Sub, Mul, Div };
enum class CallOp {
    OclIsUndefined,
    ForAll,
    Exists,
    One,
    Select,
    Reject,
    Includes,
    Excludes,
    IsEmpty,
    NotEmpty,
    Size,
};

std::string_view spelling(BoolOp op);
std::string_view spelling(RelOp op);
std::string_view spelling(ArithOp op);
std::string_view spelling(CallOp op);

/// Relational operator whose truth value is the complement of `op`.
RelOp inverse(RelOp op);
/// Operator obtained by swapping the operands of `op` (a < b  <=>  b > a).
RelOp mirror(RelOp op);

/// Static type of an expression after resolution against the model.
enum class TypeKind { Boolean, Integer, Real, Enumeration, Object, Collection, ValueBag };

struct ExprType {
    TypeKind kind = TypeKind::Boolean;
    std::string class_name;  // Object / Collection element class
    AttrType element;        // ValueBag element type, Enumeration literals
    bool operator==(const ExprType&) const = default;
    bool is_numeric() const { return kind == TypeKind::Integer || kind == TypeKind::Real; }
};

/// What a navigation chain resolves to.
enum class NavTarget { Attribute, Constant, Object, Collection, ValueBag };

struct Nav {
    /// "self", an explicit iterator name, or "" for an implicit iterator.
    std::string root = "self";
    /// Role hops followed, for Attribute/Constant/ValueBag, by the member name.
    std::vector<std::string> path;
    NavTarget target = NavTarget::Attribute;
    bool operator==(const Nav&) const = default;
};

/// Node of a parsed, type-checked OCL expression. Value type; children owned.
struct Expr {
    enum class Kind { Bool, Not, Rel, Arith, Nav, Var, Const, Call };

    Kind kind = Kind::Const;
    BoolOp bool_op = BoolOp::And;
    RelOp rel_op = RelOp::Eq;
    ArithOp arith_op = ArithOp::Add;
    CallOp call_op = CallOp::Size;
    /// Bool/Rel/Arith: two operands. Not: one. Call: receiver, then body or argument.
    std::vector<Expr> args;
    Nav nav;
    /// Var: variable name. Call: iterator name ("" when implicit).
    std::string name;
    /// Const literal, or the resolved value of a Constant navigation.
    Value value = std::int64_t{0};
    /// Const: written as an enumeration literal (#Lit).
    bool enum_literal = false;
    ExprType type;
    /// Index of the clause this boolean leaf belongs to; -1 for non-leaves.
    /// Not part of structural equality.
    int clause = -1;

    friend bool operator==(const Expr& a, const Expr& b);

    static Expr boolean(BoolOp op, Expr lhs, Expr rhs);
    static Expr negation(Expr operand);
    static Expr relation(RelOp op, Expr lhs, Expr rhs);
    static Expr arith(ArithOp op, Expr lhs, Expr rhs);
    static Expr constant(Value v);
    static Expr enum_constant(std::string literal);
};

enum class ConstraintKind { Invariant, Precondition };

struct Param {
    std::string name;
    AttrType type;
    bool operator==(const Param&) const = default;
};

struct OclConstraint {
    std::string id;
    std::string context;
    ConstraintKind kind = ConstraintKind::Invariant;
    std::string operation;  // preconditions only
    std::vector<Param> params;
    /// Body as written (may contain implies/xor).
    Expr source;
    /// Body with implies/xor expanded into and/or/not; leaves keep clause tags.
    Expr body;
    std::size_t clause_count = 0;
};

struct Clause {
    Expr expr;
    std::size_t index = 0;
    /// Attribute paths (relative to self or to the collection they range over),
    /// parameter names, and navigations tested for definedness.
    std::set<std::string> attrs;
};

/// Parses every `context ... inv:/pre:` block of `text`.
std::vector<OclConstraint> parse(std::string_view text, const ClassModel& model);

/// Reads and parses a constraint file; IoError when unreadable.
std::vector<OclConstraint> load(const std::filesystem::path& path, const ClassModel& model);

/// Parses a single boolean expression in the scope of `context` and `params`,
/// without implies/xor expansion. Leaves are tagged left to right.
Expr parse_expression(std::string_view text, const ClassModel& model, std::string_view context,
                      const std::vector<Param>& params = {});

/// Rewrites `a implies b` to `not (a) or b` and `a xor b` to
/// `(a or b) and not (a and b)`, recursively (including iterator bodies).
Expr expand_derived_operators(Expr e);

/// Boolean leaves of the and/or/not structure, one entry per clause tag in
/// tag order. Untagged leaves are numbered by appearance.
std::vector<Clause> extract_clauses(const Expr& body);
std::vector<Clause> extract_clauses(const OclConstraint& c);

/// Identifier set used by one clause (see Clause::attrs).
std::set<std::string> clause_attributes(const Expr& clause);

/// True when `e` is a boolean leaf (not an and/or/xor/implies/not node).
bool is_clause(const Expr& e);

/// Replaces constant navigations by their literal values; used for clause identity.
Expr resolve_constants(const Expr& e);

/// Re-assigns clause tags to the leaves in appearance order.
void tag_clauses(Expr& e);

std::string render(const Expr& e);
std::string render(const OclConstraint& c, const Expr& body);

}  // namespace mcdc::ocl
