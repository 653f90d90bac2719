#include <doctest.h>

#include <cmath>
#include <vector>

#include <boost/numeric/odeint.hpp>

#include "frog/one_colony.hpp"
#include "frog/rng.hpp"
#include "frog/stat_verify.hpp"

using namespace frog;

TEST_CASE("sample_W inverts the tail") {
    for (double x : {0.5, 1.0, 3.0}) {
        for (double u : {0.1, 0.5, 0.9}) {
            const double w = sample_W(x, u);
            CHECK(x / (x + w) == doctest::Approx(1.0 - u).epsilon(1e-14));
            CHECK(wake_threshold_cdf(x, w) == doctest::Approx(u).epsilon(1e-14));
        }
        CHECK(sample_W(x, 0.5) == doctest::Approx(x));
    }
    CHECK_THROWS_AS(sample_W(0.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(sample_W(1.0, 1.0), std::invalid_argument);
    CHECK(wake_threshold_cdf(1.0, -1.0) == 0.0);
}

TEST_CASE("immigration schedule") {
    ImmigrationSchedule th({0.0, 1.0, 2.0}, {1.0, 0.0, 2.0});
    CHECK(th.cumulative(0.5) == 0.5);
    CHECK(th.cumulative(1.5) == 1.0);
    CHECK(th.cumulative(3.0) == 3.0);
    CHECK(th.inverse(0.5) == 0.5);
    CHECK(th.inverse(1.0) == 1.0);
    CHECK(th.inverse(2.0) == 2.5);
    CHECK(th.rate(1.5) == 0.0);
    CHECK(ImmigrationSchedule({0.0}, {0.0}).inverse(1.0) == std::numeric_limits<double>::infinity());
    CHECK_THROWS(ImmigrationSchedule({0.5}, {1.0}));
}

TEST_CASE("MP1 path: linear growth then collapse") {
    const ColonyPath p = solve_mp1(1.0, 0.7, 5.0);
    CHECK(p.tau() == doctest::Approx(0.7));
    CHECK(p.at(0.5).x2 == doctest::Approx(1.5));
    CHECK(p.at(0.5).x1 == 0.0);
    CHECK(p.at(2.0).x2 == 0.0);
    CHECK(p.at(2.0).x1 == doctest::Approx(1.0 + 0.7 + 1.3));
    CHECK_THROWS_AS(p.at(6.0), std::out_of_range);
    const auto traj = p.trajectory(10);
    CHECK(traj.size() == 13);
}

TEST_CASE("MP2 with emigration vs a numerical ODE solve") {
    using namespace boost::numeric::odeint;
    const ImmigrationSchedule theta({0.0, 1.5}, {2.0, 0.5});
    const double c = 1.0;
    const double w = 1.0;
    const ColonyPath p = solve_mp2(0.0, 0.4, theta, c, w, 6.0);
    CHECK(p.tau() == doctest::Approx(0.5));
    double x1 = 0.4 + 1.0;  // all mass wakes at tau
    runge_kutta_dopri5<double> stepper;
    double t = p.tau();
    for (double target : {1.0, 1.5, 3.0, 6.0}) {
        integrate_adaptive(make_controlled(1e-12, 1e-12, stepper),
                           [&](const double& x, double& dxdt, double s) { dxdt = theta.rate(s) - c * x; }, x1, t,
                           target, 1e-3);
        t = target;
        CHECK(p.at(target).x1 == doctest::Approx(x1).epsilon(1e-8));
    }
}

TEST_CASE("MP2 from a wake state never jumps") {
    const ColonyPath p = solve_mp2(2.0, 0.0, ImmigrationSchedule::constant_rate(1.0), 0.5, 0.0, 4.0);
    CHECK(p.tau() == 0.0);
    CHECK(p.at(4.0).x1 == doctest::Approx(2.0 * std::exp(-2.0) + 2.0 * (1.0 - std::exp(-2.0))));
    CHECK_THROWS(solve_mp2(1.0, 1.0, ImmigrationSchedule::constant_rate(1.0), 0.0, 1.0, 1.0));
}

TEST_CASE("MP1 ensemble is a martingale in x2") {
    std::vector<std::vector<double>> rows;
    const std::vector<double> ts{0.5, 2.0};
    for (std::size_t r = 0; r < 2000; ++r) {
        Rng rng(3, r);
        std::vector<double> row;
        for (const auto& s : solve_mp1(1.0, sample_W(1.0, rng.uniform()), 2.0).sample(ts)) row.push_back(s.x2);
        rows.push_back(row);
    }
    for (const auto& rep : martingale_drift(rows, 1.0)) CHECK(rep.pass);
}
