#pragma once

#include <optional>
#include <vector>

#include "mcdc/model.hpp"
#include "mcdc/ocl.hpp"
#include "mcdc/reformulate.hpp"

namespace mcdc {

/// Failure constant added when a strict relation is missed or a categorical test fails.
inline constexpr double kFailure = 1.0;
/// Raw distance of a clause whose navigation reaches an undefined object.
inline constexpr double kUndefinedDistance = 1e12;

inline double normalize(double d) { return d / (d + 1.0); }

struct Fitness {
    double value = 0.0;
    bool solved = true;
};

/// Branch distance of `e` under `cfg`. The first object of `cfg` is `self`.
/// Zero exactly when `holds(e, cfg)` is true.
Fitness evaluate(const ocl::Expr& e, const ObjectConfiguration& cfg);

/// Plain three-valued evaluation (undefined propagates, Kleene and/or);
/// true only when the result is defined and true.
bool holds(const ocl::Expr& e, const ObjectConfiguration& cfg);

/// holds() of every clause, in clause order.
TruthVector clause_truth_vector(const std::vector<ocl::Clause>& clauses, const ObjectConfiguration& cfg);

}  // namespace mcdc
