#include <doctest.h>

#include <random>

#include "mcdc/fitness.hpp"
#include "test_support.hpp"

using namespace mcdc;
using namespace mcdc::ocl;
using mcdc::testing::gcs_model;

namespace {

ObjectConfiguration route_with(std::int64_t distance) {
    ObjectConfiguration cfg = instantiate_default(gcs_model(), "Route");
    cfg.objects[0].attrs["distance"] = distance;
    return cfg;
}

Expr route_expr(const std::string& text) {
    return parse_expression(text, gcs_model(), "Route", {{"minDist", AttrType::integer()}, {"maxDist", AttrType::integer()}});
}

ObjectConfiguration gcs_with(std::int64_t time, std::int64_t distance, bool mission_linked) {
    ObjectConfiguration cfg = instantiate_default(gcs_model(), "GCS");
    cfg.find("mission")->attrs["flightTime"] = time;
    cfg.find("mission")->attrs["flightDistance"] = distance;
    for (auto& l : cfg.links)
        if (l.role == "mission") l.to = mission_linked ? std::optional<std::string>("mission") : std::nullopt;
    return cfg;
}

// Mission with `alts.size()` waypoints.
ObjectConfiguration mission_with(const std::vector<std::pair<std::int64_t, bool>>& points, std::int64_t waypoints = 0) {
    ObjectConfiguration cfg = instantiate_default(gcs_model(), "Mission");
    cfg.objects[0].attrs["waypoints"] = waypoints;
    for (std::size_t i = 0; i < points.size(); ++i) {
        std::string id = "waypoint" + std::to_string(i + 1);
        cfg.objects.push_back({id, "Waypoint", {{"altitude", points[i].first}, {"visited", points[i].second}}});
        cfg.links.push_back({"points", cfg.objects[0].id, id});
    }
    return cfg;
}

}  // namespace

TEST_CASE("relational branch distances") {
    Expr gt = route_expr("self.distance>0");
    CHECK(evaluate(gt, route_with(0)).value == doctest::Approx(1.0));
    CHECK(evaluate(gt, route_with(-125)).value == doctest::Approx(126.0));
    CHECK(evaluate(gt, route_with(0)).value < evaluate(gt, route_with(-125)).value);
    // ranking over [-200, 200] matches distance to the satisfying region
    for (std::int64_t x = -200; x < 200; ++x) {
        double here = evaluate(gt, route_with(x)).value;
        double next = evaluate(gt, route_with(x + 1)).value;
        if (x < 0) CHECK(next < here);
        if (x >= 1) CHECK(here == 0.0);
    }
    Expr gt15 = route_expr("self.distance>15");
    Fitness f = evaluate(gt15, route_with(31));
    CHECK(f.solved);
    CHECK(f.value == 0.0);
    CHECK(evaluate(route_expr("true"), route_with(-7)).solved);
    CHECK(evaluate(route_expr("self.distance>=3"), route_with(1)).value == doctest::Approx(2.0));
    CHECK(evaluate(route_expr("self.distance<3"), route_with(5)).value == doctest::Approx(3.0));
    CHECK(evaluate(route_expr("self.distance<=3"), route_with(5)).value == doctest::Approx(2.0));
    CHECK(evaluate(route_expr("self.distance=3"), route_with(-5)).value == doctest::Approx(8.0));
    CHECK(evaluate(route_expr("self.distance<>3"), route_with(3)).value == doctest::Approx(kFailure));
}

TEST_CASE("relational guidance is monotone (property)") {
    std::mt19937_64 rng(3);
    const char* ops[] = {"<", "<=", ">", ">=", "="};
    for (int i = 0; i < 500; ++i) {
        std::int64_t c = std::uniform_int_distribution<std::int64_t>(-1000, 1000)(rng);
        std::string op = ops[i % 5];
        Expr e = route_expr("self.distance" + op + std::to_string(c));
        std::int64_t x = std::uniform_int_distribution<std::int64_t>(-3000, 3000)(rng);
        Fitness at = evaluate(e, route_with(x));
        if (at.solved) continue;
        std::int64_t closer = x < c ? x + 1 : x - 1;
        CHECK(evaluate(e, route_with(closer)).value < at.value);
    }
}

TEST_CASE("and sums normalized distances, or takes the minimum") {
    auto cfg = route_with(0);
    cfg.params = {{"minDist", std::int64_t{0}}, {"maxDist", std::int64_t{0}}};
    double a = evaluate(route_expr("self.distance>4"), cfg).value;  // 5
    double b = evaluate(route_expr("minDist>1"), cfg).value;        // 2
    CHECK(evaluate(route_expr("self.distance>4 and minDist>1"), cfg).value ==
          doctest::Approx(normalize(a) + normalize(b)));
    CHECK(evaluate(route_expr("self.distance>4 or minDist>1"), cfg).value == doctest::Approx(std::min(a, b)));
    CHECK(evaluate(route_expr("not (self.distance>4)"), cfg).solved);
    CHECK(evaluate(route_expr("self.distance>4 implies minDist>1"), cfg).solved);
    CHECK_FALSE(evaluate(route_expr("self.distance<4 xor minDist<1"), cfg).solved);
}

TEST_CASE("oclIsUndefined and undefined navigation") {
    const auto& m = gcs_model();
    Expr guard = parse_expression("self.mission.oclIsUndefined()=false", m, "GCS");
    CHECK(evaluate(guard, gcs_with(0, 0, true)).solved);
    CHECK(evaluate(guard, gcs_with(0, 0, false)).value == doctest::Approx(kFailure));
    Expr time = parse_expression("self.mission.flightTime<self.uav.MAX_TIME", m, "GCS");
    Fitness undefined = evaluate(time, gcs_with(0, 0, false));
    CHECK_FALSE(undefined.solved);
    CHECK(std::isfinite(undefined.value));
    CHECK(normalize(undefined.value) == doctest::Approx(1.0));
    CHECK_FALSE(holds(time, gcs_with(0, 0, false)));
    CHECK_FALSE(holds(negate_clause(time), gcs_with(0, 0, false)));
}

TEST_CASE("clause_truth_vector on C1") {
    auto clauses = extract_clauses(mcdc::testing::gcs_constraint("C1"));
    CHECK(combination_label(clause_truth_vector(clauses, gcs_with(8, 152, true))) == "TTF");
    CHECK(combination_label(clause_truth_vector(clauses, gcs_with(10, 149, true))) == "TFT");
    CHECK(combination_label(clause_truth_vector(clauses, gcs_with(10, 149, false))) == "FFF");
    auto single = extract_clauses(mcdc::testing::constraint(gcs_model(),
        "context Route::optimize(in minDist : Integer, in maxDist : Integer) pre: self.distance>0"));
    CHECK(combination_label(clause_truth_vector(single, route_with(0))) == "F");
}

TEST_CASE("collection distances") {
    const auto& m = gcs_model();
    auto e = [&](const std::string& t) { return parse_expression(t, m, "Mission"); };
    auto cfg = mission_with({{5, false}, {50, true}, {120, false}});
    CHECK(evaluate(e("self.points->exists(w | w.altitude>100)"), cfg).solved);
    CHECK_FALSE(evaluate(e("self.points->forAll(w | w.altitude>100)"), cfg).solved);
    CHECK(evaluate(e("self.points->one(w | w.visited)"), cfg).solved);
    CHECK_FALSE(evaluate(e("self.points->one(w | w.altitude>0)"), cfg).solved);
    CHECK(evaluate(e("self.points->select(w | w.altitude>10)->size()=2"), cfg).solved);
    CHECK(evaluate(e("self.points->reject(w | w.visited)->size()=2"), cfg).solved);
    CHECK(evaluate(e("self.points.altitude->includes(50)"), cfg).solved);
    CHECK(evaluate(e("self.points.altitude->includes(53)"), cfg).value == doctest::Approx(3.0));
    CHECK(evaluate(e("self.points.altitude->excludes(7)"), cfg).solved);
    CHECK(evaluate(e("self.points->notEmpty()"), cfg).solved);
    CHECK(evaluate(e("self.points->isEmpty()"), cfg).value == doctest::Approx(3.0));
    auto empty = mission_with({});
    CHECK(evaluate(e("self.points->forAll(w | w.altitude>100)"), empty).solved);
    CHECK_FALSE(evaluate(e("self.points->exists(w | w.altitude>100)"), empty).solved);
    // closer elements reduce the existential distance
    auto low = mission_with({{0, false}});
    auto high = mission_with({{90, false}});
    Expr ex = e("self.points->exists(w | w.altitude>100)");
    CHECK(evaluate(ex, high).value < evaluate(ex, low).value);
}

namespace {

// Random expressions over the GCS context, including collection clauses and
// navigations through the optional mission link.
struct Gen {
    std::mt19937_64 rng;
    explicit Gen(std::uint64_t s) : rng(s) {}
    int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }
    std::string small() { return std::to_string(pick(7) - 3); }
    std::string rel() {
        static const char* r[] = {"<", "<=", ">", ">=", "=", "<>"};
        return r[pick(6)];
    }
    std::string numeric() {
        static const char* atoms[] = {"self.mission.flightTime", "self.mission.waypoints", "self.mission.route.distance"};
        switch (pick(4)) {
            case 0: return small();
            case 1: return std::string(atoms[pick(3)]) + " + " + small();
            default: return atoms[pick(3)];
        }
    }
    std::string point_pred() {
        switch (pick(3)) {
            case 0: return "w.visited";
            case 1: return "w.altitude" + rel() + small();
            default: return "not (w.altitude" + rel() + small() + ")";
        }
    }
    std::string leaf() {
        const std::string pts = "self.mission.points";
        switch (pick(12)) {
            case 0: return "self.operational";
            case 1: return "self.mission.oclIsUndefined()";
            case 2: return "self.mission.oclIsUndefined()=" + std::string(pick(2) ? "true" : "false");
            case 3: return pts + "->forAll(w | " + point_pred() + ")";
            case 4: return pts + "->exists(w | " + point_pred() + ")";
            case 5: return pts + "->one(w | " + point_pred() + ")";
            case 6: return pts + "->select(w | " + point_pred() + ")->size()" + rel() + std::to_string(pick(4));
            case 7: return pts + "->reject(w | " + point_pred() + ")->" + (pick(2) ? "isEmpty()" : "notEmpty()");
            case 8: return pts + ".altitude->" + (pick(2) ? "includes(" : "excludes(") + small() + ")";
            case 9: return "self.uav.mode=" + std::string(pick(2) ? "#Idle" : "#Survey");
            default: return numeric() + rel() + numeric();
        }
    }
    std::string boolean(int depth) {
        if (depth == 0 || pick(3) == 0) return leaf();
        static const char* ops[] = {" and ", " or ", " xor ", " implies "};
        if (pick(5) == 0) return "not (" + boolean(depth - 1) + ")";
        return "(" + boolean(depth - 1) + ops[pick(4)] + boolean(depth - 1) + ")";
    }

    ObjectConfiguration config() {
        ObjectConfiguration cfg = instantiate_default(gcs_model(), "GCS");
        for (auto& o : cfg.objects)
            for (auto& [name, v] : o.attrs) {
                if (std::holds_alternative<std::int64_t>(v)) v = std::int64_t{pick(7) - 3};
                else if (std::holds_alternative<double>(v)) v = (pick(7) - 3) / 2.0;
                else if (std::holds_alternative<bool>(v)) v = pick(2) == 1;
                else if (name == "mode") v = std::string(pick(2) ? "Idle" : "Survey");
            }
        for (auto& l : cfg.links)
            if (l.role == "mission" && pick(4) == 0) l.to.reset();
            else if (l.role == "mission") l.to = "mission";
        int points = pick(4);
        for (int i = 0; i < points; ++i) {
            std::string id = "waypoint" + std::to_string(i + 1);
            cfg.objects.push_back({id, "Waypoint", {{"altitude", std::int64_t{pick(7) - 3}}, {"visited", pick(2) == 1}}});
            cfg.links.push_back({"points", "mission", id});
        }
        return cfg;
    }
};

}  // namespace

TEST_CASE("zero distance iff the reference interpreter says true (property)") {
    Gen g(11);
    int sat = 0, unsat = 0;
    for (int i = 0; i < 3000; ++i) {
        std::string text = g.boolean(3);
        Expr e = parse_expression(text, gcs_model(), "GCS");
        ObjectConfiguration cfg = g.config();
        CAPTURE(text);
        CAPTURE(configuration_to_json(cfg).dump());
        Fitness f = evaluate(e, cfg);
        CHECK(f.value >= 0.0);
        CHECK(std::isfinite(f.value));
        CHECK(f.solved == (f.value == 0.0));
        CHECK(f.solved == holds(e, cfg));
        (f.solved ? sat : unsat)++;
        Fitness negated = evaluate(Expr::negation(e), cfg);
        CHECK(negated.solved == holds(Expr::negation(e), cfg));
    }
    CHECK(sat > 300);
    CHECK(unsat > 300);
}

TEST_CASE("disjunction distance is zero iff an operand is zero (property)") {
    Gen g(12);
    for (int i = 0; i < 1000; ++i) {
        Expr a = parse_expression(g.leaf(), gcs_model(), "GCS");
        Expr b = parse_expression(g.leaf(), gcs_model(), "GCS");
        ObjectConfiguration cfg = g.config();
        bool some = evaluate(a, cfg).solved || evaluate(b, cfg).solved;
        CHECK(evaluate(Expr::boolean(BoolOp::Or, a, b), cfg).solved == some);
        bool both = evaluate(a, cfg).solved && evaluate(b, cfg).solved;
        CHECK(evaluate(Expr::boolean(BoolOp::And, a, b), cfg).solved == both);
    }
}
