#include <doctest.h>

#include "frog/run_config.hpp"

using namespace frog;

TEST_CASE("defaults validate") {
    RunConfig c;
    c.validate();
    CHECK(c.frog_config().horizon == c.horizon);
}

TEST_CASE("parse sections and comments") {
    const RunConfig c = parse_run_config(R"({
  // model
  "model": {"eta": 0.02, "x2_0": {"kind": "triangular"}, "sampler": "space"},
  "solver": {"dx": 0.002},
  "sampling": {"seed": 9, "replicas": 3, "rectangles": [{"x1": 0.1, "x2": 0.4, "s": 0.2}]},
  "output": {"run_id": "abc"}
})");
    CHECK(c.eta == 0.02);
    CHECK(c.x2_0.kind == "triangular");
    CHECK(c.solver.dx == 0.002);
    CHECK(c.seed == 9);
    CHECK(c.rectangles.size() == 1);
    CHECK(c.run_id == "abc");
    const GridDensity tri = c.x2_0.build(0.01);
    CHECK(tri.total_mass() == doctest::Approx(1.0));
    CHECK(c.x2_0.sup() == doctest::Approx(2.0));
}

TEST_CASE("errors carry the offending line") {
    const std::string bad_eta = "{\n  \"model\": {\n    \"eta\": 0.0333\n  }\n}\n";
    try {
        parse_run_config(bad_eta);
        FAIL("expected an error");
    } catch (const ConfigError& e) {
        CHECK(e.line() == 3);
    }
    try {
        parse_run_config("{\n  \"solver\": {\n    \"dx\": \"fine\"\n  }\n}");
        FAIL("expected an error");
    } catch (const ConfigError& e) {
        CHECK(e.line() == 3);
    }
    try {
        parse_run_config("{\n  \"model\": {\n    \"eta\": 0.1,,\n  }\n}");
        FAIL("expected an error");
    } catch (const ConfigError& e) {
        CHECK(e.line() == 3);
    }
    CHECK_THROWS_AS(parse_run_config("{\"bogus\": {}}"), ConfigError);
    CHECK_THROWS_AS(parse_run_config("{\"sampling\": {\"replicas\": 0}}"), ConfigError);
    CHECK_THROWS_AS(parse_run_config("{\"model\": {\"horizon\": -1}}"), ConfigError);
}

TEST_CASE("small parsers") {
    const Rectangle r = parse_rectangle("0.1,0.5,0.2");
    CHECK(r.x2 == 0.5);
    CHECK(std::isinf(r.r_max));
    CHECK(parse_rectangle("0.1,0.5,0.2,3").r_max == 3.0);
    CHECK_THROWS(parse_rectangle("0.1,0.5"));
    CHECK(parse_list("0.1, 0.05,0.02") == std::vector<double>{0.1, 0.05, 0.02});
    CHECK(fnv1a_hex("") == "cbf29ce484222325");
    CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
}

TEST_CASE("config json echo round trips") {
    RunConfig c;
    c.seed = 77;
    const RunConfig back = parse_run_config(c.to_json().dump());
    CHECK(back.seed == 77);
    CHECK(back.to_json() == c.to_json());
}
