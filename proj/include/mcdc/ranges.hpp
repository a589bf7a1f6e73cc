#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>

#include <json.hpp>

#include "mcdc/reformulate.hpp"
#include "mcdc/search.hpp"

namespace mcdc {

/// Which heuristic produced a gene's bounds.
enum class RangeRule {
    Constant,           // one clause against a (folded) constant side
    BothSidesConstant,  // genes on both sides; smallest constant of the clause
    BothSidesRandom,    // genes on both sides, no constant; random c per clause
    MultiClause,        // gene constrained by several clauses; c_min/c_max over their constants
    DependentRandom,    // dependent clauses with genes on both sides; random c per gene
};

std::string_view rule_name(RangeRule r);

struct GeneRange {
    Interval bounds;
    RangeRule rule = RangeRule::Constant;
    double c_min = 0.0;
    double c_max = 0.0;
};

struct RangeMap {
    unsigned scaling = 1;
    /// Keyed by Gene::key.
    std::map<std::string, GeneRange> genes;

    DomainMap domains() const;
    nlohmann::json to_json() const;
};

/// Bounds for a single constant c: [0, 2c·sf], [2c·sf, 0], or [-sf, sf].
Interval single_clause_range(double c, unsigned scaling);
/// Bounds for a constant collection with extremes c_min, c_max.
Interval multi_clause_range(double c_min, double c_max, unsigned scaling);

/// Reduced domains of the numeric genes of `variant`; genes without a matching
/// clause are absent. Random constants are drawn from [1, 100].
RangeMap reduce_ranges(const McdcVariant& variant, unsigned scaling, std::uint64_t rng_seed,
                       const DomainOptions& options = {});

/// A configuration with numeric genes uniform inside `ranges` and every other gene
/// uniform over its full domain.
ObjectConfiguration sample_within(const SearchSpace& space, const RangeMap& ranges, std::mt19937_64& rng);

}  // namespace mcdc
