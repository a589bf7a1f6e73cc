#include <doctest.h>

#include <set>

#include "mcdc/fitness.hpp"
#include "mcdc/search.hpp"
#include "test_support.hpp"

using namespace mcdc;
using mcdc::testing::constraint;
using mcdc::testing::gcs_constraint;
using mcdc::testing::gcs_model;

namespace {

McdcVariant variant_of(const ocl::OclConstraint& c, const std::string& label) {
    return make_variant(c, parse_combination(label));
}

const Gene& gene_named(const std::vector<Gene>& genes, const std::string& name) {
    for (const auto& g : genes)
        if (g.name == name) return g;
    FAIL("no gene " << name);
    return genes.front();
}

std::int64_t int_attr(const SearchSpace& space, const ObjectConfiguration& cfg, const std::string& name) {
    return std::get<std::int64_t>(space.get(cfg, gene_named(space.genes(cfg), name)));
}

}  // namespace

TEST_CASE("genes follow appearance order and address the configuration") {
    auto v = variant_of(gcs_constraint("C1"), "TTF");
    SearchSpace space(gcs_model(), v);
    auto cfg = space.initial();
    auto genes = space.genes(cfg);
    std::vector<std::string> names;
    for (const auto& g : genes) names.push_back(g.name);
    CHECK(names == std::vector<std::string>{"mission", "mission.flightTime", "mission.flightDistance"});
    CHECK(genes[0].kind == GeneKind::Presence);
    CHECK(std::get<bool>(space.get(cfg, genes[0])) == false);
    space.set(cfg, genes[0], true);
    CHECK(std::get<bool>(space.get(cfg, genes[0])) == true);
    space.set(cfg, genes[1], std::int64_t{7});
    CHECK(int_attr(space, cfg, "mission.flightTime") == 7);
    validate_configuration(gcs_model(), cfg);
}

TEST_CASE("parameters become genes") {
    auto v = variant_of(gcs_constraint("C9"), "TT");
    SearchSpace space(gcs_model(), v);
    auto cfg = space.initial();
    std::set<std::string> names;
    for (const auto& g : space.genes(cfg)) names.insert(g.name);
    CHECK(names == std::set<std::string>{"distance", "maxDist", "minDist"});
    CHECK(cfg.params.count("minDist") == 1);
}

TEST_CASE("collection size genes grow and shrink elements") {
    auto c = constraint(gcs_model(), "context Mission inv: self.points->forAll(p | p.altitude > 100)");
    auto v = variant_of(c, "T");
    SearchSpace space(gcs_model(), v);
    auto cfg = space.initial();
    auto genes = space.genes(cfg);
    REQUIRE(genes.size() == 1);
    CHECK(genes[0].kind == GeneKind::CollectionSize);
    CHECK(genes[0].domain == Interval{0, 5});
    space.set(cfg, genes[0], std::int64_t{3});
    genes = space.genes(cfg);
    REQUIRE(genes.size() == 4);
    CHECK(genes[2].name == "points[2].altitude");
    CHECK(genes[2].key == "points.altitude");
    space.set(cfg, genes[0], std::int64_t{1});
    CHECK(space.genes(cfg).size() == 2);
    validate_configuration(gcs_model(), cfg);
}

TEST_CASE("sampling respects domains and ranges") {
    auto v = variant_of(gcs_constraint("C1"), "TTF");
    SearchSpace space(gcs_model(), v);
    std::mt19937_64 rng(5);
    DomainMap ranges{{"mission.flightTime", {0, 300}}};
    for (int i = 0; i < 200; ++i) {
        auto cfg = space.initial();
        space.sample(cfg, rng, &ranges);
        auto t = int_attr(space, cfg, "mission.flightTime");
        auto d = int_attr(space, cfg, "mission.flightDistance");
        CHECK(t >= 0);
        CHECK(t <= 300);
        CHECK(d >= -10000);
        CHECK(d <= 10000);
    }
}

TEST_CASE("variant true is solved at iteration 1 with the seed unchanged") {
    auto c = constraint(gcs_model(), "context GCS inv: true");
    auto v = variant_of(c, "T");
    SearchSpace space(gcs_model(), v);
    auto seed = space.initial();
    auto r = avm_solve(space, v, seed, {});
    CHECK(r.status == SearchStatus::Solved);
    CHECK(r.iterations == 1);
    CHECK(r.cfg == seed);
    auto rs = random_solve(space, v, {});
    CHECK(rs.status == SearchStatus::Solved);
    CHECK(rs.iterations == 1);
}

TEST_CASE("AVM from the TTF solution reaches the TFT variant") {
    auto v = variant_of(gcs_constraint("C1"), "TFT");
    SearchSpace space(gcs_model(), v);
    auto seed = space.initial();
    auto genes = space.genes(seed);
    space.set(seed, gene_named(genes, "mission"), true);
    space.set(seed, gene_named(genes, "mission.flightTime"), std::int64_t{8});
    space.set(seed, gene_named(genes, "mission.flightDistance"), std::int64_t{152});
    SearchOptions opt;
    opt.record_trace = true;
    auto r = avm_solve(space, v, seed, opt);
    REQUIRE(r.status == SearchStatus::Solved);
    CHECK(int_attr(space, r.cfg, "mission.flightDistance") == 149);
    CHECK(int_attr(space, r.cfg, "mission.flightTime") >= 10);
    CHECK(r.iterations <= 15);
    CHECK(holds(v.expr, r.cfg));
}

TEST_CASE("AVM runs are deterministic and the best-so-far is monotone") {
    auto c = gcs_constraint("C1");
    for (const auto& v : reformulate(c)) {
        SearchSpace space(gcs_model(), v);
        SearchOptions opt;
        opt.rng_seed = 99;
        opt.record_trace = true;
        // Seed far from the solution to force restarts.
        auto seed = space.initial();
        std::mt19937_64 rng(3);
        space.sample(seed, rng);
        auto a = avm_solve(space, v, seed, opt);
        auto b = avm_solve(space, v, seed, opt);
        CHECK(a.status == b.status);
        CHECK(a.iterations == b.iterations);
        CHECK(a.cfg == b.cfg);
        CHECK(a.trace == b.trace);
        CHECK(a.trace.size() == a.iterations);
        CHECK(a.iterations <= opt.budget);
        double best = a.trace.front();
        for (double f : a.trace) best = std::min(best, f);
        CHECK(a.best_fitness == best);
        if (a.status == SearchStatus::Solved) {
            CHECK(evaluate(v.expr, a.cfg).solved);
            CHECK(holds(v.expr, a.cfg));
        }
    }
}

TEST_CASE("every solved variant of the corpus is confirmed by the interpreter") {
    for (const auto& c : ocl::parse(mcdc::testing::gcs_constraints_text(), gcs_model()))
        for (const auto& v : reformulate(c)) {
            SearchSpace space(gcs_model(), v);
            SearchOptions opt;
            opt.rng_seed = 17;
            auto r = avm_solve(space, v, space.initial(), opt);
            CAPTURE(c.id);
            CAPTURE(combination_label(v.combination));
            if (r.status == SearchStatus::Solved) CHECK(holds(v.expr, r.cfg));
            auto rs = random_solve(space, v, opt);
            if (rs.status == SearchStatus::Solved) CHECK(holds(v.expr, rs.cfg));
        }
}

TEST_CASE("budget accounting is exact on an unsatisfiable independent variant") {
    auto c = constraint(gcs_model(), "context GCS inv: self.mission.flightDistance > 20000");
    auto v = variant_of(c, "T");
    SearchSpace space(gcs_model(), v);
    for (std::size_t budget : {1u, 2u, 37u, 500u}) {
        SearchOptions opt;
        opt.budget = budget;
        opt.record_trace = true;
        auto r = avm_solve(space, v, space.initial(), opt);
        CHECK(r.status == SearchStatus::BudgetExhausted);
        CHECK(r.iterations == budget);
        CHECK(r.trace.size() == budget);
        auto rs = random_solve(space, v, opt);
        CHECK(rs.status == SearchStatus::BudgetExhausted);
        CHECK(rs.iterations == budget);
    }
}

TEST_CASE("conflict watchdog examples") {
    std::vector<std::vector<std::size_t>> dependent{{0, 1}};
    std::vector<std::vector<std::size_t>> singletons{{0}, {1}};
    std::vector<double> decreasing;
    for (int i = 0; i < 1000; ++i) decreasing.push_back(1.0 / (i + 1));
    CHECK_FALSE(conflict_watchdog(decreasing, 2000, dependent));
    std::vector<double> flat(1000, 0.5);
    CHECK(conflict_watchdog(flat, 2000, dependent));
    CHECK_FALSE(conflict_watchdog(flat, 2000, singletons));
    CHECK_FALSE(conflict_watchdog(std::vector<double>(999, 0.5), 2000, dependent));
    std::vector<double> creeping;
    for (int i = 0; i < 1000; ++i) creeping.push_back(0.9999 - 1e-7 * i);
    CHECK(conflict_watchdog(creeping, 2000, dependent));
    std::vector<double> late_progress(1000, 0.5);
    late_progress[900] = 0.4;
    CHECK_FALSE(conflict_watchdog(late_progress, 2000, dependent));
    CHECK(conflict_watchdog(std::vector<double>(51, 0.5), 101, dependent));
}

TEST_CASE("unsatisfiable dependent variant ends as a suspected conflict at half the budget") {
    auto c = gcs_constraint("C7");
    auto v = variant_of(c, "FF");
    SearchSpace space(gcs_model(), v);
    // Unsatisfiable: no flightDistance in the domain satisfies both literals.
    auto cfg = space.initial();
    auto genes = space.genes(cfg);
    space.set(cfg, gene_named(genes, "mission"), true);
    const Gene& d = gene_named(genes, "mission.flightDistance");
    for (std::int64_t x = -10000; x <= 10000; ++x) {
        space.set(cfg, d, x);
        REQUIRE_FALSE(holds(v.expr, cfg));
    }
    for (std::size_t budget : {2000u, 400u, 101u}) {
        for (std::uint64_t seed : {1u, 2u, 3u}) {
            SearchOptions opt;
            opt.budget = budget;
            opt.rng_seed = seed;
            auto r = avm_solve(space, v, space.initial(), opt);
            CHECK(r.status == SearchStatus::ConflictSuspected);
            CHECK(static_cast<double>(r.iterations) >= budget / 2.0 - 1);
            CHECK(static_cast<double>(r.iterations) <= budget / 2.0 + 1);
        }
    }
}

TEST_CASE("random search on one boolean clause needs about two samples") {
    auto c = constraint(gcs_model(), "context GCS inv: self.operational = true");
    auto v = variant_of(c, "T");
    SearchSpace space(gcs_model(), v);
    double total = 0;
    const int runs = 400;
    for (int s = 0; s < runs; ++s) {
        SearchOptions opt;
        opt.rng_seed = static_cast<std::uint64_t>(s);
        auto r = random_solve(space, v, opt);
        REQUIRE(r.status == SearchStatus::Solved);
        total += static_cast<double>(r.iterations);
    }
    // Geometric(1/2): mean 2, standard error of the mean about 0.07.
    CHECK(total / runs == doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("random search succeeds less often than AVM on C1 TTF") {
    auto v = variant_of(gcs_constraint("C1"), "TTF");
    SearchSpace space(gcs_model(), v);
    int avm = 0, rs = 0;
    for (std::uint64_t s = 0; s < 100; ++s) {
        SearchOptions opt;
        opt.budget = 20;
        opt.rng_seed = 1000 + s;
        avm += avm_solve(space, v, space.initial(), opt).status == SearchStatus::Solved;
        rs += random_solve(space, v, opt).status == SearchStatus::Solved;
    }
    CHECK(rs < avm);
}
