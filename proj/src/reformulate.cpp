#include "mcdc/reformulate.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "mcdc/error.hpp"

namespace mcdc {

using ocl::CallOp;
using ocl::Expr;
using ocl::RelOp;

bool evaluate_structure(const Expr& body, const TruthVector& truth) {
    switch (body.kind) {
        case Expr::Kind::Not: return !evaluate_structure(body.args[0], truth);
        case Expr::Kind::Bool: {
            bool a = evaluate_structure(body.args[0], truth);
            bool b = evaluate_structure(body.args[1], truth);
            switch (body.bool_op) {
                case ocl::BoolOp::And: return a && b;
                case ocl::BoolOp::Or: return a || b;
                case ocl::BoolOp::Xor: return a != b;
                case ocl::BoolOp::Implies: return !a || b;
            }
            return false;
        }
        default:
            if (body.clause < 0 || static_cast<std::size_t>(body.clause) >= truth.size())
                throw ReformulationError("clause leaf without a valid tag: " + ocl::render(body));
            return truth[static_cast<std::size_t>(body.clause)];
    }
}

namespace {

// Row r (1-based): clause k is true iff bit (n-1-k) of r-1 is clear.
TruthVector row_truth(std::size_t n, std::size_t row) {
    TruthVector t(n);
    for (std::size_t k = 0; k < n; ++k) t[k] = ((row - 1) >> (n - 1 - k) & 1U) == 0;
    return t;
}

std::size_t flip_row(std::size_t n, std::size_t row, std::size_t k) { return ((row - 1) ^ (std::size_t{1} << (n - 1 - k))) + 1; }

}  // namespace

PairTable build_pair_table(std::size_t clauses, const Expr& predicate) {
    if (clauses == 0) throw ReformulationError("constraint has no clauses");
    if (clauses > kMaxClauses)
        throw ReformulationError("too many clauses (" + std::to_string(clauses) + "); at most " +
                                 std::to_string(kMaxClauses) + " are supported");
    PairTable t;
    t.clauses = clauses;
    const std::size_t count = std::size_t{1} << clauses;
    t.rows.reserve(count);
    for (std::size_t r = 1; r <= count; ++r) {
        TruthVector truth = row_truth(clauses, r);
        bool outcome = evaluate_structure(predicate, truth);
        t.rows.push_back({std::move(truth), outcome});
    }
    t.pairs.resize(clauses);
    for (std::size_t k = 0; k < clauses; ++k)
        for (std::size_t r = 1; r <= count; ++r) {
            std::size_t partner = flip_row(clauses, r, k);
            if (t.rows[r - 1].outcome != t.rows[partner - 1].outcome) t.pairs[k][r] = partner;
        }
    return t;
}

namespace {

struct CoverSearch {
    // Per clause (in search order) the candidate pairs as (low, high) row numbers.
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> candidates;
    std::set<std::size_t> best;
    bool have_best = false;
    std::size_t nodes = 0;
    static constexpr std::size_t kNodeLimit = 200000;

    static bool better(const std::set<std::size_t>& a, const std::set<std::size_t>& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
    }

    bool covered(std::size_t depth, const std::set<std::size_t>& rows) const {
        for (const auto& [lo, hi] : candidates[depth])
            if (rows.count(lo) && rows.count(hi)) return true;
        return false;
    }

    void run(std::size_t depth, std::set<std::size_t>& rows) {
        if (++nodes > kNodeLimit && have_best) return;
        if (have_best && rows.size() > best.size()) return;
        if (depth == candidates.size()) {
            if (!have_best || better(rows, best)) {
                best = rows;
                have_best = true;
            }
            return;
        }
        if (covered(depth, rows)) {
            run(depth + 1, rows);
            return;
        }
        // Cheapest extensions first so the first leaf is a good incumbent.
        std::vector<std::pair<std::size_t, std::size_t>> order = candidates[depth];
        std::stable_sort(order.begin(), order.end(), [&](const auto& a, const auto& b) {
            auto added = [&](const auto& p) { return std::size_t{!rows.count(p.first)} + !rows.count(p.second); };
            return added(a) < added(b);
        });
        for (const auto& [lo, hi] : order) {
            std::size_t added = std::size_t{!rows.count(lo)} + !rows.count(hi);
            if (have_best && rows.size() + added > best.size()) continue;
            bool ins_lo = rows.insert(lo).second;
            bool ins_hi = rows.insert(hi).second;
            run(depth + 1, rows);
            if (ins_lo) rows.erase(lo);
            if (ins_hi) rows.erase(hi);
        }
    }
};

}  // namespace

std::vector<TruthVector> select_combinations(const PairTable& table) {
    std::vector<std::size_t> order(table.clauses);
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t k = 0; k < table.clauses; ++k)
        if (table.pairs[k].empty())
            throw ReformulationError("clause " + std::to_string(k) + " cannot independently affect the outcome");
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return table.pairs[a].size() < table.pairs[b].size(); });
    CoverSearch search;
    for (std::size_t k : order) {
        std::vector<std::pair<std::size_t, std::size_t>> cands;
        for (const auto& [row, partner] : table.pairs[k])
            if (row < partner) cands.emplace_back(row, partner);
        search.candidates.push_back(std::move(cands));
    }
    std::set<std::size_t> rows;
    search.run(0, rows);
    std::vector<TruthVector> out;
    for (std::size_t r : search.best) out.push_back(table.rows[r - 1].truth);
    return out;
}

namespace {

bool is_bool_const(const Expr& e) { return e.kind == Expr::Kind::Const && std::holds_alternative<bool>(e.value); }

Expr negate_predicate(const Expr& p) {
    if (p.kind == Expr::Kind::Not) return p.args[0];
    return Expr::negation(p);
}

Expr call(CallOp op, std::string iterator, std::vector<Expr> args, ocl::ExprType type) {
    Expr e;
    e.kind = Expr::Kind::Call;
    e.call_op = op;
    e.name = std::move(iterator);
    e.args = std::move(args);
    e.type = std::move(type);
    return e;
}

}  // namespace

Expr negate_clause(const Expr& clause) {
    if (clause.type.kind != ocl::TypeKind::Boolean)
        throw ReformulationError("cannot negate non-Boolean expression " + ocl::render(clause));
    Expr out;
    switch (clause.kind) {
        case Expr::Kind::Rel: {
            out = clause;
            bool equality = clause.rel_op == RelOp::Eq || clause.rel_op == RelOp::Ne;
            if (equality && is_bool_const(clause.args[1])) {
                out.args[1].value = !std::get<bool>(clause.args[1].value);
            } else if (equality && is_bool_const(clause.args[0])) {
                out.args[0].value = !std::get<bool>(clause.args[0].value);
            } else {
                out.rel_op = ocl::inverse(clause.rel_op);
            }
            break;
        }
        case Expr::Kind::Const:
            out = clause;
            out.value = !std::get<bool>(clause.value);
            break;
        case Expr::Kind::Call:
            switch (clause.call_op) {
                case CallOp::ForAll:
                    out = call(CallOp::Exists, clause.name, {clause.args[0], negate_predicate(clause.args[1])}, clause.type);
                    break;
                case CallOp::Exists:
                    out = call(CallOp::ForAll, clause.name, {clause.args[0], negate_predicate(clause.args[1])}, clause.type);
                    break;
                case CallOp::One: {
                    Expr selected = call(CallOp::Select, clause.name, clause.args, clause.args[0].type);
                    ocl::ExprType integer;
                    integer.kind = ocl::TypeKind::Integer;
                    Expr size = call(CallOp::Size, "", {std::move(selected)}, integer);
                    out = Expr::relation(RelOp::Ne, std::move(size), Expr::constant(std::int64_t{1}));
                    break;
                }
                case CallOp::Includes:
                case CallOp::Excludes:
                case CallOp::IsEmpty:
                case CallOp::NotEmpty: {
                    static const std::map<CallOp, CallOp> dual = {{CallOp::Includes, CallOp::Excludes},
                                                                  {CallOp::Excludes, CallOp::Includes},
                                                                  {CallOp::IsEmpty, CallOp::NotEmpty},
                                                                  {CallOp::NotEmpty, CallOp::IsEmpty}};
                    out = clause;
                    out.call_op = dual.at(clause.call_op);
                    break;
                }
                case CallOp::OclIsUndefined: out = Expr::negation(clause); break;
                default: throw ReformulationError("unsupported clause shape " + ocl::render(clause));
            }
            break;
        case Expr::Kind::Nav:
        case Expr::Kind::Var: out = Expr::negation(clause); break;
        default: throw ReformulationError("unsupported clause shape " + ocl::render(clause));
    }
    out.clause = clause.clause;
    return out;
}

std::string combination_label(const TruthVector& combination) {
    std::string s;
    for (bool b : combination) s += b ? 'T' : 'F';
    return s;
}

TruthVector parse_combination(const std::string& label) {
    TruthVector out;
    for (char ch : label) {
        if (ch == 'T' || ch == 't')
            out.push_back(true);
        else if (ch == 'F' || ch == 'f')
            out.push_back(false);
        else
            throw Error("invalid combination label '" + label + "'");
    }
    return out;
}

std::vector<std::vector<std::size_t>> dependency_groups(const std::vector<ocl::Clause>& clauses) {
    std::vector<std::size_t> parent(clauses.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    std::map<std::string, std::size_t> owner;
    for (std::size_t i = 0; i < clauses.size(); ++i)
        for (const auto& attr : clauses[i].attrs) {
            auto [it, fresh] = owner.emplace(attr, i);
            if (!fresh) {
                std::size_t a = find(it->second), b = find(i);
                if (a != b) parent[std::max(a, b)] = std::min(a, b);
            }
        }
    std::map<std::size_t, std::vector<std::size_t>> by_root;
    for (std::size_t i = 0; i < clauses.size(); ++i) by_root[find(i)].push_back(clauses[i].index);
    std::vector<std::vector<std::size_t>> out;
    for (auto& [root, members] : by_root) out.push_back(std::move(members));
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::vector<std::size_t>> static_dependency_groups(const McdcVariant& variant) {
    return dependency_groups(ocl::extract_clauses(variant.expr));
}

namespace {

Expr literalize(const Expr& e, const TruthVector& combination) {
    if (e.kind == Expr::Kind::Not) return literalize(e.args[0], combination);
    if (e.kind == Expr::Kind::Bool)
        return Expr::boolean(ocl::BoolOp::And, literalize(e.args[0], combination), literalize(e.args[1], combination));
    auto k = static_cast<std::size_t>(e.clause);
    if (e.clause < 0 || k >= combination.size())
        throw ReformulationError("clause leaf without a valid tag: " + ocl::render(e));
    return combination[k] ? e : negate_clause(e);
}

}  // namespace

McdcVariant make_variant(const ocl::OclConstraint& c, const TruthVector& combination) {
    if (combination.size() != c.clause_count)
        throw ReformulationError("combination " + combination_label(combination) + " does not match the " +
                                 std::to_string(c.clause_count) + " clauses of " + c.id);
    McdcVariant v;
    v.origin = c.id;
    v.context = c.context;
    v.params = c.params;
    v.combination = combination;
    v.expr = literalize(c.source, combination);
    v.dependent_groups = dependency_groups(ocl::extract_clauses(c));
    return v;
}

std::vector<McdcVariant> reformulate(const ocl::OclConstraint& c) {
    PairTable table = build_pair_table(c.clause_count, c.body);
    std::vector<McdcVariant> out;
    for (const auto& combination : select_combinations(table)) out.push_back(make_variant(c, combination));
    return out;
}

}  // namespace mcdc
