#include <doctest.h>

#include <cmath>

#include "frog/measures.hpp"

using namespace frog;

TEST_CASE("atomic measure merges and drops atoms") {
    AtomicMeasure m({{0.3, 1.0}, {0.1, 2.0}, {0.3, 0.5}, {0.2, 0.0}});
    REQUIRE(m.size() == 2);
    CHECK(m[0].position == 0.1);
    CHECK(m[1].mass == 1.5);
    CHECK(m.total_mass() == 3.5);
}

TEST_CASE("interval closure conventions") {
    AtomicMeasure m({{0.0, 1.0}, {1.0, 2.0}});
    CHECK(m.mass_in(0.0, 1.0) == 2.0);
    CHECK(m.mass_in(0.0, 1.0, IntervalClosure::Closed) == 3.0);
    CHECK(m.mass_in(0.0, 1.0, IntervalClosure::Open) == 0.0);
    CHECK(m.mass_in(0.0, 1.0, IntervalClosure::RightOpen) == 1.0);
    CHECK_THROWS_AS(m.mass_in(1.0, 0.0), std::invalid_argument);
}

TEST_CASE("grid density masses") {
    const GridDensity u = GridDensity::uniform(0.0, 1.0, 0.01, 2.0);
    CHECK(u.total_mass() == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(u.mass_in(0.25, 0.5) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(u.mass_in(0.255, 0.26) == doctest::Approx(0.01).epsilon(1e-12));
    CHECK(u.sup_density() == doctest::Approx(2.0));
    // cell averages of 2x are exact
    const GridDensity t = GridDensity::from_function(0.0, 1.0, 0.1, [](double x) { return 2.0 * x; });
    CHECK(t.mass_in(0.0, 0.5) == doctest::Approx(0.25).epsilon(1e-13));
    CHECK(t.values()[3] == doctest::Approx(0.7).epsilon(1e-13));
}

TEST_CASE("rebinning keeps mass") {
    const GridDensity t = GridDensity::from_function(0.0, 1.0, 0.01, [](double x) { return 2.0 * x; });
    const GridDensity r = t.rebinned(-0.5, 0.005, 400);
    CHECK(r.total_mass() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.mass_in(0.2, 0.6) == doctest::Approx(0.32).epsilon(1e-12));
}

TEST_CASE("discretize_initial lumps blocks onto the right end") {
    const GridDensity t = GridDensity::from_function(0.0, 1.0, 0.001, [](double x) { return 2.0 * x; });
    for (double eta : {0.1, 0.05, 0.02}) {
        const AtomicMeasure piles = discretize_initial(t, eta);
        REQUIRE(piles.size() == pile_count(eta));
        for (std::size_t i = 0; i < piles.size(); ++i) {
            const double a = static_cast<double>(i) * eta;
            const double b = static_cast<double>(i + 1) * eta;
            CHECK(piles[i].position == b);
            CHECK(piles[i].mass == doctest::Approx(b * b - a * a).epsilon(1e-10));
        }
        CHECK(piles.total_mass() == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK(pile_count(0.1) == 10);
    CHECK(pile_count(0.3) == 4);
}

TEST_CASE("discretize_initial rejects mass outside [0,1]") {
    CHECK_THROWS(discretize_initial(GridDensity::uniform(-0.5, 1.0, 0.01, 1.0), 0.1));
}

TEST_CASE("json round trip") {
    AtomicMeasure m({{0.1, 0.25}, {0.7, 1.0 / 3.0}});
    nlohmann::json j = m;
    CHECK(j.get<AtomicMeasure>() == m);
    HybridMeasure h{GridDensity::uniform(0.0, 1.0, 0.1, 1.0), m};
    nlohmann::json k = h;
    CHECK(k.get<HybridMeasure>() == h);
}
