#include <doctest.h>

#include <set>
#include <sstream>

#include "mcdc/bench.hpp"
#include "mcdc/error.hpp"
#include "test_support.hpp"

using namespace mcdc;
using mcdc::testing::gcs_model;

namespace {

std::vector<ocl::OclConstraint> corpus() { return ocl::parse(mcdc::testing::gcs_constraints_text(), gcs_model()); }

std::string csv_without_elapsed(const std::vector<TrialRecord>& records) {
    std::ostringstream out;
    for (auto r : records) {
        r.elapsed_ms = 0;
        write_csv(out, {r});
    }
    return out.str();
}

}  // namespace

TEST_CASE("mode names") {
    CHECK(parse_modes("avmo,avmc,avmr,avmrc,rs") == kAllModes);
    CHECK(parse_modes("rs,avmo,rs") == std::vector<Mode>{Mode::Rs, Mode::Avmo});
    CHECK_THROWS_AS(parse_modes("avmx"), SemanticError);
    CHECK_THROWS_AS(parse_modes(""), SemanticError);
    for (Mode m : kAllModes) CHECK(parse_mode(mode_name(m)) == m);
}

TEST_CASE("trial seeds are stable and distinct") {
    std::set<std::uint64_t> seen;
    for (Mode m : kAllModes)
        for (std::size_t rep = 0; rep < 50; ++rep) {
            auto s = trial_seed(42, "C1", "TTF", m, rep);
            CHECK(s == trial_seed(42, "C1", "TTF", m, rep));
            seen.insert(s);
        }
    CHECK(seen.size() == 250);
    CHECK(trial_seed(42, "C1", "TTF", Mode::Avmo, 0) != trial_seed(43, "C1", "TTF", Mode::Avmo, 0));
    CHECK(trial_seed(42, "C1", "TFT", Mode::Avmo, 0) != trial_seed(42, "C1", "TTF", Mode::Avmo, 0));
}

TEST_CASE("trivially true variant is solved at iteration 1 in every mode") {
    auto cs = ocl::parse("T1: context GCS inv: true", gcs_model());
    CampaignOptions opt;
    opt.reps = 1;
    auto camp = run_campaign(gcs_model(), cs, opt);
    REQUIRE(camp.records.size() == 10);
    for (const auto& r : camp.records) {
        if (r.combination != "T") continue;
        CHECK(r.status == SearchStatus::Solved);
        CHECK(r.iterations == 1);
    }
}

TEST_CASE("campaign covers every variant, mode and rep, deterministically") {
    auto cs = corpus();
    std::size_t variants = 0;
    for (const auto& c : cs) variants += reformulate(c).size();
    CampaignOptions opt;
    opt.reps = 3;
    opt.budget = 300;
    opt.threads = 1;
    auto a = run_campaign(gcs_model(), cs, opt);
    CHECK(a.failures.empty());
    CHECK(a.records.size() == 5 * 3 * variants);
    opt.threads = 3;
    auto b = run_campaign(gcs_model(), cs, opt);
    CHECK(csv_without_elapsed(a.records) == csv_without_elapsed(b.records));
    for (const auto& r : a.records) {
        CHECK(r.rep < 3);
        CHECK(r.iterations <= 300);
        CHECK(r.iterations >= 1);
    }
    opt.base_seed = 7;
    auto c = run_campaign(gcs_model(), cs, opt);
    CHECK(csv_without_elapsed(a.records) != csv_without_elapsed(c.records));
}

TEST_CASE("a failing constraint does not abort the campaign") {
    std::string many = "context Mission inv: self.waypoints > 0";
    for (int i = 1; i <= 12; ++i) many += " and self.waypoints > " + std::to_string(i);
    auto cs = ocl::parse("Big: " + many + "\nC2: context GCS inv: self.mission.waypoints>self.mission.MIN_WP_LIMIT",
                         gcs_model());
    REQUIRE(cs.size() == 2);
    CampaignOptions opt;
    opt.reps = 2;
    opt.modes = {Mode::Avmo};
    auto camp = run_campaign(gcs_model(), cs, opt);
    REQUIRE(camp.failures.size() == 1);
    CHECK(camp.failures[0].constraint_id == "Big");
    CHECK(camp.records.size() == 4);
}

TEST_CASE("success rates") {
    std::vector<TrialRecord> recs;
    for (int i = 0; i < 100; ++i) {
        TrialRecord r;
        r.constraint_id = "C";
        r.combination = "T";
        r.mode = Mode::Avmo;
        r.rep = static_cast<std::size_t>(i);
        r.status = i < 57 ? SearchStatus::Solved : SearchStatus::BudgetExhausted;
        recs.push_back(r);
        r.mode = Mode::Rs;
        r.status = SearchStatus::Solved;
        recs.push_back(r);
        r.mode = Mode::Avmc;
        r.status = SearchStatus::ConflictSuspected;
        recs.push_back(r);
    }
    CHECK(*success_rate(recs, "C", "T", Mode::Avmo) == doctest::Approx(0.57));
    CHECK(*success_rate(recs, "C", "T", Mode::Rs) == 1.0);
    CHECK(*success_rate(recs, "C", "T", Mode::Avmc) == 0.0);
    CHECK_FALSE(success_rate(recs, "C", "F", Mode::Avmo).has_value());
}

TEST_CASE("campaign statistics are well formed") {
    CampaignOptions opt;
    opt.reps = 6;
    opt.budget = 200;
    auto camp = run_campaign(gcs_model(), corpus(), opt);
    auto j = campaign_stats(camp.records, opt.modes);
    CHECK(j.at("variants").size() == 26);
    for (const auto& v : j.at("variants"))
        for (const auto& c : v.at("comparisons")) {
            CHECK(c.at("fisher_p").get<double>() >= 0.0);
            CHECK(c.at("fisher_p").get<double>() <= 1.0);
            CHECK(c.at("a12_iterations").get<double>() >= 0.0);
            CHECK(c.at("a12_iterations").get<double>() <= 1.0);
            CHECK(c.at("wilcoxon_p").get<double>() <= 1.0);
        }
    for (Mode m : kAllModes) CHECK(j.at("summary").contains(std::string(mode_name(m))));
}
