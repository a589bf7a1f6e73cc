#include <algorithm>
#include <fstream>
#include <sstream>

#include "mcdc/cbr.hpp"
#include "mcdc/error.hpp"
#include "mcdc/fitness.hpp"

namespace mcdc {

using nlohmann::json;

std::vector<ocl::Expr> normalized_clauses(const McdcVariant& variant) {
    std::vector<ocl::Expr> out;
    for (const auto& c : ocl::extract_clauses(variant.expr)) out.push_back(ocl::resolve_constants(c.expr));
    return out;
}

std::size_t similarity(const std::vector<ocl::Expr>& target, const std::vector<ocl::Expr>& stored) {
    std::size_t n = std::min(target.size(), stored.size());
    std::size_t score = 0;
    for (std::size_t j = 0; j < n; ++j)
        if (target[j] == stored[j]) ++score;
    return score;
}

void Repository::store(const McdcVariant& variant, ObjectConfiguration data) {
    if (!evaluate(variant.expr, data).solved)
        throw SemanticError("refusing to store unsolved data for " + variant.origin + " " +
                            combination_label(variant.combination));
    entries_.push_back({variant.origin, combination_label(variant.combination), variant.context, variant.params,
                        normalized_clauses(variant), std::move(data)});
}

std::vector<const RepositoryEntry*> Repository::entries_for(const std::string& constraint_id) const {
    std::vector<const RepositoryEntry*> out;
    for (const auto& e : entries_)
        if (e.constraint_id == constraint_id) out.push_back(&e);
    return out;
}

SeedChoice Repository::select_seed(const McdcVariant& target, const ObjectConfiguration& random_cfg) const {
    SeedChoice choice;
    choice.seed = random_cfg;
    choice.random_fitness = evaluate(target.expr, random_cfg).value;
    auto clauses = normalized_clauses(target);
    std::optional<std::size_t> best;
    std::size_t best_sim = 0;
    double best_fit = 0.0;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        const auto& e = entries_[i];
        if (e.context != target.context) continue;
        std::size_t sim = similarity(clauses, e.predicate);
        if (best && sim < best_sim) continue;
        double fit = evaluate(target.expr, e.data).value;
        if (!best || sim > best_sim || fit < best_fit) {
            best = i;
            best_sim = sim;
            best_fit = fit;
        }
    }
    if (!best) return choice;
    choice.similarity = best_sim;
    choice.stored_fitness = best_fit;
    if (best_fit < choice.random_fitness) {
        choice.entry = best;
        choice.seed = entries_[*best].data;
    }
    return choice;
}

json Repository::to_json() const {
    json out = json::array();
    for (const auto& e : entries_) {
        json predicate = json::array();
        for (const auto& c : e.predicate) predicate.push_back(ocl::render(c));
        json params = json::array();
        for (const auto& p : e.params) params.push_back({{"name", p.name}, {"type", attr_type_to_json(p.type)}});
        out.push_back({{"constraint_id", e.constraint_id},
                       {"combination", e.combination},
                       {"context", e.context},
                       {"params", params},
                       {"predicate", predicate},
                       {"data", configuration_to_json(e.data)}});
    }
    return out;
}

Repository Repository::from_json(const json& j, const ClassModel& model) {
    if (!j.is_array()) throw SemanticError("repository: expected an array of entries");
    Repository repo;
    try {
        for (const auto& item : j) {
            RepositoryEntry e;
            e.constraint_id = item.at("constraint_id").get<std::string>();
            e.combination = item.value("combination", "");
            e.context = item.at("context").get<std::string>();
            for (const auto& p : item.value("params", json::array()))
                e.params.push_back({p.at("name").get<std::string>(), attr_type_from_json(p.at("type"))});
            for (const auto& c : item.at("predicate"))
                e.predicate.push_back(
                    ocl::resolve_constants(ocl::parse_expression(c.get<std::string>(), model, e.context, e.params)));
            e.data = configuration_from_json(item.at("data"));
            repo.entries_.push_back(std::move(e));
        }
    } catch (const json::exception& ex) {
        throw SemanticError(std::string("repository: ") + ex.what());
    }
    return repo;
}

void Repository::save(const std::filesystem::path& path) const {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << to_json().dump(2) << '\n';
    if (!out) throw IoError("failed writing " + path.string());
}

Repository Repository::load(const std::filesystem::path& path, const ClassModel& model) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& ex) {
        throw SemanticError(path.string() + ": " + ex.what());
    }
    return from_json(j, model);
}

}  // namespace mcdc
