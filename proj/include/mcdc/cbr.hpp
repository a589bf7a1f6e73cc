#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mcdc/model.hpp"
#include "mcdc/ocl.hpp"
#include "mcdc/reformulate.hpp"

namespace mcdc {

/// Clause literals of a variant with constants resolved, in source order.
std::vector<ocl::Expr> normalized_clauses(const McdcVariant& variant);

/// Number of positions j where target[j] and stored[j] are structurally equal.
std::size_t similarity(const std::vector<ocl::Expr>& target, const std::vector<ocl::Expr>& stored);

struct RepositoryEntry {
    std::string constraint_id;
    std::string combination;
    std::string context;
    std::vector<ocl::Param> params;
    std::vector<ocl::Expr> predicate;
    ObjectConfiguration data;
};

struct SeedChoice {
    ObjectConfiguration seed;
    /// Index of the reused entry; nullopt when the random configuration won.
    std::optional<std::size_t> entry;
    std::size_t similarity = 0;
    double stored_fitness = 0.0;
    double random_fitness = 0.0;
};

/// Append-only store of solved variants.
class Repository {
public:
    /// Throws SemanticError unless `data` solves `variant`.
    void store(const McdcVariant& variant, ObjectConfiguration data);

    const std::vector<RepositoryEntry>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }
    std::vector<const RepositoryEntry*> entries_for(const std::string& constraint_id) const;

    /// Closest stored solution (highest similarity, then lowest fitness on the
    /// target, then earliest) when it is strictly fitter than `random_cfg`.
    SeedChoice select_seed(const McdcVariant& target, const ObjectConfiguration& random_cfg) const;

    nlohmann::json to_json() const;
    static Repository from_json(const nlohmann::json& j, const ClassModel& model);
    void save(const std::filesystem::path& path) const;
    static Repository load(const std::filesystem::path& path, const ClassModel& model);

private:
    std::vector<RepositoryEntry> entries_;
};

}  // namespace mcdc
