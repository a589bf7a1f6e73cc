#include <doctest.h>

#include <fstream>
#include <random>

#include "mcdc/error.hpp"
#include "mcdc/model.hpp"
#include "test_support.hpp"

using namespace mcdc;
using mcdc::testing::gcs_model;

TEST_CASE("load_model reads the GCS excerpt") {
    const ClassModel& m = gcs_model();
    CHECK(m.classes().size() == 5);
    for (const char* name : {"GCS", "UAV", "Mission", "Route", "Waypoint"}) CHECK(m.find_class(name) != nullptr);
    const ClassDef* uav = m.find_class("UAV");
    REQUIRE(uav->find_constant("MAX_TIME"));
    CHECK(uav->find_constant("MAX_TIME")->value == Value{std::int64_t{10}});
    const AssociationDef* points = m.find_association("Mission", "points");
    REQUIRE(points);
    CHECK(points->multiplicity.is_collection());
    CHECK_FALSE(points->multiplicity.upper.has_value());
}

TEST_CASE("empty class list is a valid model") {
    ClassModel m = parse_model(R"({"classes": [], "associations": []})");
    CHECK(m.classes().empty());
    CHECK(parse_model("{}").classes().empty());
}

TEST_CASE("model semantic errors name the offending entity") {
    auto bad_assoc = R"({"classes":[{"name":"GCS"}],
        "associations":[{"source":"GCS","target":"Pilot","role":"pilot","lower":0,"upper":1}]})";
    try {
        parse_model(bad_assoc);
        FAIL("expected SemanticError");
    } catch (const SemanticError& e) {
        CHECK(std::string(e.what()).find("Pilot") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_model(R"({"classes":[{"name":"A"},{"name":"A"}]})"), SemanticError);
    CHECK_THROWS_AS(parse_model(R"({"classes":[{"name":"A","attributes":[
        {"name":"x","type":"Integer"},{"name":"x","type":"Real"}]}]})"),
                    SemanticError);
    CHECK_THROWS_AS(parse_model(R"({"classes":[{"name":"A","attributes":[{"name":"x","type":"Text"}]}]})"),
                    SemanticError);
    CHECK_THROWS_AS(parse_model(R"({"classes":[{"name":"A"}],
        "associations":[{"source":"A","target":"A","role":"r","lower":3,"upper":1}]})"),
                    SemanticError);
}

TEST_CASE("model parse errors carry line and column") {
    try {
        parse_model("{\n  \"classes\": [\n    {\"name\": }\n]}");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
        CHECK(e.column() > 1);
    }
}

TEST_CASE("instantiate_default") {
    const ClassModel& m = gcs_model();
    SUBCASE("GCS context") {
        ObjectConfiguration cfg = instantiate_default(m, "GCS");
        REQUIRE(cfg.objects.size() == 4);
        CHECK(cfg.find("gcs"));
        CHECK(cfg.find("uav"));
        CHECK(cfg.find("mission"));
        CHECK(cfg.find("route"));
        CHECK(cfg.find("mission")->attrs.at("flightTime") == Value{std::int64_t{0}});
        CHECK(cfg.find("uav")->attrs.at("mode") == Value{std::string("Idle")});
        CHECK(cfg.find("uav")->attrs.at("armed") == Value{false});
        // mission is optional: present as an object, link left undefined
        bool null_mission = false;
        for (const auto& l : cfg.links)
            if (l.role == "mission") null_mission = !l.to.has_value();
        CHECK(null_mission);
        CHECK_NOTHROW(validate_configuration(m, cfg));
    }
    SUBCASE("Route context") {
        ObjectConfiguration cfg = instantiate_default(m, "Route");
        REQUIRE(cfg.objects.size() == 1);
        CHECK(cfg.objects[0].id == "route");
        CHECK(cfg.links.empty());
    }
    SUBCASE("unknown context") { CHECK_THROWS_AS(instantiate_default(m, "Pilot"), SemanticError); }
}

TEST_CASE("validate_configuration rejects ill-typed values and bad links") {
    const ClassModel& m = gcs_model();
    ObjectConfiguration cfg = instantiate_default(m, "GCS");
    auto wrong = cfg;
    wrong.find("mission")->attrs["flightTime"] = 1.5;
    CHECK_THROWS_AS(validate_configuration(m, wrong), SemanticError);
    wrong = cfg;
    wrong.find("uav")->attrs["mode"] = std::string("Hover");
    CHECK_THROWS_AS(validate_configuration(m, wrong), SemanticError);
    wrong = cfg;
    wrong.links.push_back({"uav", "gcs", "mission"});
    CHECK_THROWS_AS(validate_configuration(m, wrong), SemanticError);
    wrong = cfg;
    for (auto& l : wrong.links)
        if (l.role == "uav") l.to.reset();
    CHECK_THROWS_AS(validate_configuration(m, wrong), SemanticError);
}

namespace {

// Random configurations over the GCS model for the round-trip property.
ObjectConfiguration random_configuration(std::mt19937_64& rng) {
    ObjectConfiguration cfg = instantiate_default(gcs_model(), "GCS");
    std::uniform_int_distribution<int> num(-10000, 10000);
    std::bernoulli_distribution coin;
    for (auto& o : cfg.objects) {
        for (auto& [name, v] : o.attrs) {
            if (std::holds_alternative<std::int64_t>(v)) v = std::int64_t{num(rng)};
            else if (std::holds_alternative<double>(v)) v = num(rng) / 100.0;
            else if (std::holds_alternative<bool>(v)) v = coin(rng);
        }
    }
    for (auto& l : cfg.links)
        if (l.role == "mission") l.to = coin(rng) ? std::optional<std::string>("mission") : std::nullopt;
    int points = std::uniform_int_distribution<int>(0, 3)(rng);
    for (int i = 0; i < points; ++i) {
        std::string id = "waypoint" + std::to_string(i + 1);
        cfg.objects.push_back({id, "Waypoint", {{"altitude", std::int64_t{num(rng)}}, {"visited", coin(rng)}}});
        cfg.links.push_back({"points", "mission", id});
    }
    if (coin(rng)) cfg.params["minDist"] = std::int64_t{num(rng)};
    return cfg;
}

}  // namespace

TEST_CASE("configuration JSON round-trips (property)") {
    std::mt19937_64 rng(7);
    auto dir = std::filesystem::temp_directory_path() / "mcdc_model_test";
    std::filesystem::create_directories(dir);
    for (int i = 0; i < 100; ++i) {
        ObjectConfiguration cfg = random_configuration(rng);
        validate_configuration(gcs_model(), cfg);
        auto path = dir / "cfg.json";
        save_configuration(cfg, path);
        CHECK(load_configuration(path) == cfg);
    }
}

TEST_CASE("null link survives as JSON null") {
    ObjectConfiguration cfg = instantiate_default(gcs_model(), "GCS");
    nlohmann::json j = configuration_to_json(cfg);
    bool saw_null = false;
    for (const auto& l : j["links"])
        if (l["role"] == "mission") saw_null = l["to"].is_null();
    CHECK(saw_null);
    CHECK(configuration_from_json(j) == cfg);
}

TEST_CASE("save_configuration reports unwritable paths") {
    ObjectConfiguration cfg = instantiate_default(gcs_model(), "Route");
    CHECK_THROWS_AS(save_configuration(cfg, "/nonexistent-dir/for/sure/cfg.json"), IoError);
}
