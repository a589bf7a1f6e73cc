#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "mcdc/cbr.hpp"
#include "mcdc/model.hpp"
#include "mcdc/ocl.hpp"
#include "mcdc/ranges.hpp"
#include "mcdc/search.hpp"

namespace mcdc {

enum class Mode { Avmo, Avmc, Avmr, Avmrc, Rs };

std::string_view mode_name(Mode m);
/// Throws SemanticError for an unknown name.
Mode parse_mode(std::string_view name);
std::vector<Mode> parse_modes(std::string_view comma_separated);
inline const std::vector<Mode> kAllModes{Mode::Avmo, Mode::Avmc, Mode::Avmr, Mode::Avmrc, Mode::Rs};

/// 64-bit seed derived from the campaign seed and the trial coordinates; stable
/// across platforms and runs.
std::uint64_t trial_seed(std::uint64_t base_seed, std::string_view constraint_id, std::string_view combination,
                         Mode mode, std::size_t rep);

struct SolveSettings {
    Mode mode = Mode::Avmo;
    std::size_t budget = 2000;
    unsigned scaling = 1;
    std::uint64_t seed = 0;
    bool record_trace = false;
};

/// One trial. CBR modes read `repo` for the seed; nullptr behaves like an empty repository.
/// Range modes report the reduced domains through `ranges_used`.
SearchResult solve_variant(const SearchSpace& space, const McdcVariant& variant, const SolveSettings& settings,
                           const Repository* repo = nullptr, RangeMap* ranges_used = nullptr);

struct TrialRecord {
    std::string constraint_id;
    std::string combination;
    Mode mode = Mode::Avmo;
    std::size_t rep = 0;
    SearchStatus status = SearchStatus::BudgetExhausted;
    std::size_t iterations = 0;
    double elapsed_ms = 0.0;
    std::uint64_t rng_seed = 0;
};

struct CampaignOptions {
    std::vector<Mode> modes = kAllModes;
    std::size_t reps = 30;
    std::size_t budget = 2000;
    std::uint64_t base_seed = 42;
    unsigned scaling = 1;
    /// 0 selects std::thread::hardware_concurrency().
    unsigned threads = 0;
    DomainOptions domain;
};

struct CampaignFailure {
    std::string constraint_id;
    std::string message;
};

struct Campaign {
    /// Ordered by constraint, combination, mode, rep.
    std::vector<TrialRecord> records;
    std::vector<CampaignFailure> failures;
};

Campaign run_campaign(const ClassModel& model, const std::vector<ocl::OclConstraint>& constraints,
                      const CampaignOptions& options);

void write_csv(std::ostream& out, const std::vector<TrialRecord>& records);

/// Solved fraction of the records of one variant under one mode; nullopt when there are none.
std::optional<double> success_rate(const std::vector<TrialRecord>& records, std::string_view constraint_id,
                                   std::string_view combination, Mode mode);

/// Per-variant success counts and pairwise mode comparisons, plus per-mode
/// median success rates over variants.
nlohmann::json campaign_stats(const std::vector<TrialRecord>& records, const std::vector<Mode>& modes);

}  // namespace mcdc
