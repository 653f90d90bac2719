#include <doctest.h>

#include <cmath>
#include <random>

#include <boost/math/tools/roots.hpp>

#include "frog/frog_sim.hpp"
#include "frog/heat_engine.hpp"
#include "frog/rng.hpp"

using namespace frog;

namespace {

// Unit atom in the cell [c - dx/2, c + dx/2].
GridDensity atom_cell(double left, double dx, std::size_t cells, std::size_t k) {
    std::vector<double> v(cells, 0.0);
    v[k] = 1.0 / dx;
    return GridDensity(left, dx, v);
}

// Survival of a Brownian path from x0 below z up to t: the endpoint is exact and the
// bridge crossing probability exp(-2 (z - x0)(z - x_t)/t) is exact too.
double survival_mc(double x0, double z, double t, std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    std::normal_distribution<double> g;
    double alive = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double xt = x0 + std::sqrt(t) * g(rng);
        if (xt >= z) continue;
        alive += 1.0 - std::exp(-2.0 * (z - x0) * (z - xt) / t);
    }
    return alive / static_cast<double>(n);
}

}  // namespace

TEST_CASE("analytic survival matches the normal cdf identity") {
    CHECK(survival_mass_analytic(-1.0, 0.0, 1.0) == doctest::Approx(std::erf(1.0 / std::sqrt(2.0))).epsilon(1e-14));
    CHECK(survival_mass_analytic(0.0, 0.0, 1.0) == 0.0);
    CHECK(normal_cdf(0.0) == 0.5);
    CHECK_THROWS_AS(survival_mass_analytic(1.0, 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("Brownian bridge Monte Carlo agrees with the analytic survival") {
    const std::size_t n = 1000000;
    for (double t : {0.1, 1.0}) {
        const double x0 = -std::sqrt(t);
        const double mc = survival_mc(x0, 0.0, t, n, 11);
        const double exact = survival_mass_analytic(x0, 0.0, t);
        CHECK(std::abs(mc - exact) < 4.0 * 0.5 / std::sqrt(static_cast<double>(n)));
    }
}

TEST_CASE("engine survival vs analytic and Monte Carlo") {
    const double dx = 1e-3;
    const double t = 0.1;
    const std::size_t k = 300;  // atom at 0.3005 left of the barrier
    const double d = (static_cast<double>(k) + 0.5) * dx;
    const std::size_t cells = 4000;
    const double left = -static_cast<double>(cells) * dx;
    HeatEngine engine(SolverConfig{dx, t / 4000.0, 0.0, 1.0, "implicit-euler"});
    KilledHeatState s = engine.make_state(atom_cell(left, dx, cells, cells - 1 - k), left, 0.0, 0.0);
    for (int i = 0; i < 4000; ++i) engine.advance(s, t / 4000.0);
    const double exact = survival_mass_analytic(-d, 0.0, t);
    CHECK(std::abs(s.u.total_mass() - exact) < 1e-4);
    CHECK(std::abs(s.u.total_mass() - survival_mc(-d, 0.0, t, 1000000, 5)) < 2e-3);
    CHECK(std::abs(s.u.total_mass() + s.killed_cum - 1.0) < 1e-12);
}

TEST_CASE("trial_killed does not mutate and equals the step's increment") {
    HeatEngine engine(SolverConfig{0.01, 1e-3});
    KilledHeatState s = engine.make_state(GridDensity::uniform(-1.0, 0.0, 0.01, 1.0), -1.0, 0.5, 0.0);
    const double before = s.killed_cum;
    const double trial = engine.trial_killed(s, 1e-3);
    CHECK(s.killed_cum == before);
    engine.advance(s, 1e-3);
    CHECK(s.killed_cum - before == doctest::Approx(trial).epsilon(1e-14));
    CHECK(trial > 0.0);
}

TEST_CASE("positivity and reflecting wall") {
    HeatEngine engine(SolverConfig{0.01, 0.5});
    KilledHeatState s = engine.make_state(atom_cell(-1.0, 0.01, 100, 0), -1.0, 0.0, kNoBarrier);
    for (int i = 0; i < 20; ++i) engine.advance(s, 0.5);
    CHECK(s.u.total_mass() == doctest::Approx(1.0).epsilon(1e-12));
    for (double v : s.u.density.values()) CHECK(v >= 0.0);
}

TEST_CASE("barrier checks") {
    HeatEngine engine(SolverConfig{0.01, 1e-3});
    CHECK_THROWS(engine.make_state(GridDensity::uniform(-1.0, 0.0, 0.01, 1.0), -1.0, 1.0, 0.005));
    CHECK_THROWS(engine.make_state(GridDensity::uniform(-1.0, 0.5, 0.01, 1.0), -1.0, 1.0, 0.0));
    CHECK_THROWS(SolverConfig{0.0, 1e-3}.validate());
}

TEST_CASE("single pile wake time vs root of the analytic killed mass") {
    // unit wake mass in one cell at distance d from a pile; the pile wakes when
    // the killed mass 1 - survival(t) reaches the threshold
    const double dx = 1e-3;
    const double pile = 0.05;
    const std::size_t cells = 3050;
    const double left = pile - static_cast<double>(cells) * dx;
    const std::size_t k = 200;
    const double center = pile - (static_cast<double>(k) + 0.5) * dx;
    const GridDensity x1 = atom_cell(left, dx, cells, cells - 1 - k);
    const AtomicMeasure piles({{pile, 0.2}});
    FrogConfig cfg;
    cfg.solver = SolverConfig{dx, 1e-4};
    cfg.horizon = 20.0;
    cfg.right_margin = 0.1;
    cfg.domain_left = left;
    for (double w : {0.3, 0.6}) {
        const std::vector<double> ws{w};
        const FrogRun run = simulate_space_driven(x1, piles, ws, cfg);
        REQUIRE(run.events.size() == 1);
        auto killed_gap = [&](double t) { return 1.0 - survival_mass_analytic(center, pile, t) - w; };
        boost::uintmax_t iters = 200;
        const auto root = boost::math::tools::toms748_solve(killed_gap, 1e-6, 100.0,
                                                            boost::math::tools::eps_tolerance<double>(40), iters);
        const double expect = 0.5 * (root.first + root.second);
        CHECK(run.events[0].time == doctest::Approx(expect).epsilon(5e-3));
        CHECK(run.events[0].v == doctest::Approx(w).epsilon(1e-6));
        CHECK(run.events[0].jump_size == doctest::Approx(0.2 + w).epsilon(1e-6));
    }
}
