#include <doctest.h>

#include <random>

#include "mcdc/cbr.hpp"
#include "mcdc/error.hpp"
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

ObjectConfiguration with_gene(const SearchSpace& space, ObjectConfiguration cfg, const std::string& name, Value v) {
    for (const auto& g : space.genes(cfg))
        if (g.name == name) {
            space.set(cfg, g, v);
            return cfg;
        }
    FAIL("no gene " << name);
    return cfg;
}

struct Solved {
    McdcVariant variant;
    ObjectConfiguration data;
};

// Solutions of corpus variants from several seeds.
const std::vector<Solved>& solved_pool() {
    static const std::vector<Solved> pool = [] {
        std::vector<Solved> out;
        for (const auto& c : ocl::parse(mcdc::testing::gcs_constraints_text(), gcs_model()))
            for (const auto& v : reformulate(c)) {
                SearchSpace space(gcs_model(), v);
                for (std::uint64_t s = 0; s < 3; ++s) {
                    std::mt19937_64 rng(s);
                    auto seed = space.initial();
                    space.sample(seed, rng);
                    SearchOptions opt;
                    opt.rng_seed = s;
                    auto r = avm_solve(space, v, seed, opt);
                    if (r.status == SearchStatus::Solved) out.push_back({v, r.cfg});
                }
            }
        return out;
    }();
    return pool;
}

}  // namespace

TEST_CASE("similarity of the C1 variants") {
    auto c = gcs_constraint("C1");
    auto p3 = normalized_clauses(variant_of(c, "TFF"));
    auto p4 = normalized_clauses(variant_of(c, "FTF"));
    REQUIRE(p3.size() == 3);
    CHECK(similarity(p4, p3) == 1);
    CHECK(similarity(p3, p3) == 3);
    auto ttf = normalized_clauses(variant_of(c, "TTF"));
    CHECK(similarity(ttf, p3) == 2);
    auto other = normalized_clauses(variant_of(gcs_constraint("C2"), "T"));
    CHECK(similarity(other, p3) == 0);
}

TEST_CASE("clause identity ignores how a constant is written") {
    auto model = gcs_model();
    auto a = normalized_clauses(variant_of(constraint(model, "context Mission inv: self.waypoints > self.MIN_WP_LIMIT"), "T"));
    auto b = normalized_clauses(variant_of(constraint(model, "context Mission inv: self.waypoints>10"), "T"));
    CHECK(similarity(a, b) == 1);
}

TEST_CASE("similarity is symmetric and bounded") {
    const auto& pool = solved_pool();
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    for (int i = 0; i < 500; ++i) {
        auto a = normalized_clauses(pool[pick(rng)].variant);
        auto b = normalized_clauses(pool[pick(rng)].variant);
        CHECK(similarity(a, b) == similarity(b, a));
        CHECK(similarity(a, b) <= std::min(a.size(), b.size()));
    }
}

TEST_CASE("store grows the repository and rejects unsolved data") {
    auto v = variant_of(gcs_constraint("C1"), "TTF");
    SearchSpace space(gcs_model(), v);
    Repository repo;
    auto bad = space.initial();
    CHECK_THROWS_AS(repo.store(v, bad), SemanticError);
    CHECK(repo.size() == 0);
    auto r = avm_solve(space, v, bad, {});
    REQUIRE(r.status == SearchStatus::Solved);
    repo.store(v, r.cfg);
    CHECK(repo.size() == 1);
    CHECK(repo.entries_for("C1").size() == 1);
    CHECK(repo.entries_for("C2").empty());
}

TEST_CASE("sequential solving stores one entry per solved variant") {
    auto c = gcs_constraint("C7");
    Repository repo;
    std::size_t solved = 0;
    for (const auto& v : reformulate(c)) {
        SearchSpace space(gcs_model(), v);
        auto seed = repo.select_seed(v, space.initial()).seed;
        auto r = avm_solve(space, v, seed, {});
        if (r.status == SearchStatus::Solved) {
            ++solved;
            repo.store(v, r.cfg);
        }
    }
    CHECK(solved == 3);
    CHECK(repo.size() == solved);
}

TEST_CASE("reused solution of x>15 seeds the search for x<=15") {
    auto c = constraint(gcs_model(), "context Mission inv: self.waypoints > 15");
    auto pos = variant_of(c, "T");
    auto neg = variant_of(c, "F");
    SearchSpace space(gcs_model(), neg);
    Repository repo;
    repo.store(pos, with_gene(space, space.initial(), "waypoints", std::int64_t{31}));
    auto random_cfg = with_gene(space, space.initial(), "waypoints", std::int64_t{5000});
    auto choice = repo.select_seed(neg, random_cfg);
    REQUIRE(choice.entry.has_value());
    CHECK(choice.similarity == 0);
    CHECK(std::get<std::int64_t>(choice.seed.objects.front().attrs.at("waypoints")) == 31);
    auto r = avm_solve(space, neg, choice.seed, {});
    REQUIRE(r.status == SearchStatus::Solved);
    CHECK(std::get<std::int64_t>(r.cfg.objects.front().attrs.at("waypoints")) <= 15);
    auto close = with_gene(space, space.initial(), "waypoints", std::int64_t{20});
    CHECK_FALSE(repo.select_seed(neg, close).entry.has_value());
}

TEST_CASE("empty repository returns the random configuration") {
    auto v = variant_of(gcs_constraint("C2"), "T");
    SearchSpace space(gcs_model(), v);
    auto cfg = space.initial();
    auto choice = Repository{}.select_seed(v, cfg);
    CHECK_FALSE(choice.entry.has_value());
    CHECK(choice.seed == cfg);
}

TEST_CASE("a stored solution of the target solves at iteration 1") {
    auto v = variant_of(gcs_constraint("C1"), "TTF");
    SearchSpace space(gcs_model(), v);
    auto r = avm_solve(space, v, space.initial(), {});
    Repository repo;
    repo.store(v, r.cfg);
    auto choice = repo.select_seed(v, space.initial());
    REQUIRE(choice.entry == std::optional<std::size_t>{0});
    CHECK(choice.similarity == 3);
    auto again = avm_solve(space, v, choice.seed, {});
    CHECK(again.status == SearchStatus::Solved);
    CHECK(again.iterations == 1);
}

TEST_CASE("seed selection follows the most similar, fittest, earliest entry") {
    const auto& pool = solved_pool();
    REQUIRE(pool.size() > 20);
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    std::size_t reused = 0;
    for (int state = 0; state < 1000; ++state) {
        Repository repo;
        std::vector<const Solved*> stored;
        std::size_t n = std::uniform_int_distribution<std::size_t>(0, 8)(rng);
        for (std::size_t i = 0; i < n; ++i) {
            const Solved& s = pool[pick(rng)];
            repo.store(s.variant, s.data);
            stored.push_back(&s);
        }
        const McdcVariant& target = pool[pick(rng)].variant;
        SearchSpace space(gcs_model(), target);
        auto random_cfg = space.initial();
        space.sample(random_cfg, rng);
        auto choice = repo.select_seed(target, random_cfg);

        // Independent oracle over the stored list.
        double f_random = evaluate(target.expr, random_cfg).value;
        auto tc = normalized_clauses(target);
        long best = -1;
        std::size_t best_sim = 0;
        for (std::size_t i = 0; i < stored.size(); ++i) {
            if (stored[i]->variant.context != target.context) continue;
            std::size_t sim = similarity(tc, normalized_clauses(stored[i]->variant));
            if (best < 0 || sim > best_sim) {
                best = static_cast<long>(i);
                best_sim = sim;
            }
        }
        long winner = -1;
        double f_stored = 0.0;
        for (std::size_t i = 0; best >= 0 && i < stored.size(); ++i) {
            if (stored[i]->variant.context != target.context) continue;
            if (similarity(tc, normalized_clauses(stored[i]->variant)) != best_sim) continue;
            double f = evaluate(target.expr, stored[i]->data).value;
            if (winner < 0 || f < f_stored) {
                winner = static_cast<long>(i);
                f_stored = f;
            }
        }
        double f_seed = evaluate(target.expr, choice.seed).value;
        CHECK(f_seed <= f_random);
        if (winner >= 0 && f_stored < f_random) {
            ++reused;
            REQUIRE(choice.entry.has_value());
            CHECK(*choice.entry == static_cast<std::size_t>(winner));
            CHECK(choice.seed == stored[static_cast<std::size_t>(winner)]->data);
            CHECK(f_seed < f_random);
        } else {
            CHECK_FALSE(choice.entry.has_value());
            CHECK(choice.seed == random_cfg);
        }
    }
    CHECK(reused > 100);
}

TEST_CASE("repository JSON round trip") {
    const auto& pool = solved_pool();
    Repository repo;
    for (std::size_t i = 0; i < pool.size(); i += 3) repo.store(pool[i].variant, pool[i].data);
    auto back = Repository::from_json(repo.to_json(), gcs_model());
    REQUIRE(back.size() == repo.size());
    for (std::size_t i = 0; i < repo.size(); ++i) {
        CHECK(back.entries()[i].predicate == repo.entries()[i].predicate);
        CHECK(back.entries()[i].data == repo.entries()[i].data);
        CHECK(back.entries()[i].params == repo.entries()[i].params);
    }
    auto path = std::filesystem::temp_directory_path() / "mcdc_repo_roundtrip.json";
    repo.save(path);
    CHECK(Repository::load(path, gcs_model()).to_json() == repo.to_json());
    std::filesystem::remove(path);
    CHECK_THROWS_AS(Repository::load("/nonexistent/repo.json", gcs_model()), IoError);
}
