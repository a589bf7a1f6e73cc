#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "mcdc/ocl.hpp"

namespace mcdc {

using TruthVector = std::vector<bool>;

/// Upper bound on clauses per constraint; the pair table has 2^n rows.
inline constexpr std::size_t kMaxClauses = 12;

struct PairTable {
    struct Row {
        TruthVector truth;
        bool outcome = false;
    };

    std::size_t clauses = 0;
    /// Row r (1-based) is rows[r-1]. Row 1 is all true, the last row all false.
    std::vector<Row> rows;
    /// pairs[k] maps a row number to its independence partner for clause k (both directions).
    std::vector<std::map<std::size_t, std::size_t>> pairs;
};

/// Outcome of the and/or/not structure of `body` when clause k takes truth[k].
/// Leaves must carry clause tags.
bool evaluate_structure(const ocl::Expr& body, const TruthVector& truth);

PairTable build_pair_table(std::size_t clauses, const ocl::Expr& predicate);

/// Smallest row set that contains one independence pair per clause, as truth
/// vectors in row order. Ties go to the lexicographically smallest row set.
std::vector<TruthVector> select_combinations(const PairTable& table);

/// Logical complement of a single clause, without a leading `not` where an
/// operator rewrite exists.
ocl::Expr negate_clause(const ocl::Expr& clause);

/// "TTF" style label.
std::string combination_label(const TruthVector& combination);
TruthVector parse_combination(const std::string& label);

struct McdcVariant {
    std::string origin;
    std::string context;
    std::vector<ocl::Param> params;
    TruthVector combination;
    /// Conjunction of every clause in its target polarity, in source order.
    ocl::Expr expr;
    std::vector<std::vector<std::size_t>> dependent_groups;
};

/// Clauses sharing an attribute, parameter or navigation identifier, closed
/// transitively. Groups are ordered by their smallest clause index.
std::vector<std::vector<std::size_t>> dependency_groups(const std::vector<ocl::Clause>& clauses);
std::vector<std::vector<std::size_t>> static_dependency_groups(const McdcVariant& variant);

/// Rewrites `c` into the conjunction of clause literals matching `combination`.
McdcVariant make_variant(const ocl::OclConstraint& c, const TruthVector& combination);

/// One variant per selected MC/DC combination.
std::vector<McdcVariant> reformulate(const ocl::OclConstraint& c);

}  // namespace mcdc
