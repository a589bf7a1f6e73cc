#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "mcdc/model.hpp"
#include "mcdc/ocl.hpp"
#include "mcdc/reformulate.hpp"

namespace mcdc {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    bool operator==(const Interval&) const = default;
};

/// Sampling bounds keyed by Gene::key.
using DomainMap = std::map<std::string, Interval>;

enum class GeneKind { Numeric, Boolean, Enumeration, Presence, CollectionSize };

std::string_view kind_name(GeneKind kind);

/// One search variable, addressed inside an ObjectConfiguration.
struct Gene {
    GeneKind kind = GeneKind::Numeric;
    /// Unique within a gene list, e.g. "mission.points[2].altitude".
    std::string name;
    /// Name with element indices dropped ("mission.points.altitude"); matches
    /// clause attribute paths and range keys.
    std::string key;

    // Attribute genes: object_id + attr. Parameter genes: param.
    std::string object_id;
    std::string attr;
    std::string param;
    // Presence: link (from, role) points at target when present.
    // CollectionSize: links (from, role) to element_class objects.
    std::string from;
    std::string role;
    std::string target;
    std::string element_class;

    bool integer = true;
    /// Numeric domain, or the size bounds of a collection.
    Interval domain;
    std::vector<std::string> literals;
};

/// The variables a variant's references induce over configurations of its
/// context class. Gene order is the order of first appearance in the variant.
class SearchSpace {
public:
    SearchSpace(const ClassModel& model, const McdcVariant& variant, DomainOptions options = {});

    const ClassModel& model() const { return *model_; }
    const DomainOptions& options() const { return options_; }

    /// Default instance of the context with every gene addressable.
    ObjectConfiguration initial() const;
    /// Adds missing parameters and parking objects for undefined optional links.
    void prepare(ObjectConfiguration& cfg) const;

    std::vector<Gene> genes(const ObjectConfiguration& cfg) const;

    Value get(const ObjectConfiguration& cfg, const Gene& g) const;
    void set(ObjectConfiguration& cfg, const Gene& g, const Value& v) const;

    /// Every gene sampled uniformly; numeric genes use `ranges` when they have an entry.
    void sample(ObjectConfiguration& cfg, std::mt19937_64& rng, const DomainMap* ranges = nullptr) const;

    struct Ref {
        enum class Kind { Presence, Attribute, Param, Collection, Element };
        Kind kind = Kind::Attribute;
        std::vector<std::string> hops;  // role path from self to the owning object
        std::string member;             // attribute, parameter, or collection role
        std::string element_attr;       // Element refs
    };
    const std::vector<Ref>& refs() const { return refs_; }

private:
    const Object* resolve(const ObjectConfiguration& cfg, const std::vector<std::string>& hops, std::size_t count) const;
    const Object* resolve_or_park(ObjectConfiguration& cfg, const std::vector<std::string>& hops, std::size_t count) const;
    std::string parked_target(const ObjectConfiguration& cfg, const Object& from, const AssociationDef& assoc) const;

    const ClassModel* model_;
    std::string context_;
    std::vector<ocl::Param> params_;
    DomainOptions options_;
    std::vector<Ref> refs_;
};

enum class SearchStatus { Solved, BudgetExhausted, ConflictSuspected };

std::string_view status_name(SearchStatus s);

struct SearchResult {
    SearchStatus status = SearchStatus::BudgetExhausted;
    /// Solving configuration, or the best one seen.
    ObjectConfiguration cfg;
    std::size_t iterations = 0;
    double best_fitness = 0.0;
    std::chrono::duration<double, std::milli> elapsed{0};
    /// Fitness of every evaluated candidate, when requested.
    std::vector<double> trace;
};

struct SearchOptions {
    std::size_t budget = 2000;
    std::uint64_t rng_seed = 0;
    bool record_trace = false;
    /// Distribution for random restarts; global domains when null.
    const DomainMap* restart_ranges = nullptr;
};

/// Largest relative drop of the best fitness that still counts as no progress.
inline constexpr double kStagnationTolerance = 1e-3;

/// Checked once, after ceil(budget/2) evaluations: true when some group has at
/// least two clauses and the best fitness fell by at most kStagnationTolerance
/// (relative) over the preceding budget/4 evaluations.
bool conflict_watchdog(const std::vector<double>& trace, std::size_t budget,
                       const std::vector<std::vector<std::size_t>>& groups);

/// Alternating Variable Method from `seed`. One fitness evaluation is one iteration;
/// the seed's evaluation is the first.
SearchResult avm_solve(const SearchSpace& space, const McdcVariant& variant, const ObjectConfiguration& seed,
                       const SearchOptions& options);

/// Independent uniform samples over the global gene domains.
SearchResult random_solve(const SearchSpace& space, const McdcVariant& variant, const SearchOptions& options);

}  // namespace mcdc
