#include <doctest.h>

#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

#include "frog/discrete_mps.hpp"

using namespace frog;

TEST_CASE("nearest neighbour q-matrix") {
    const SiteSystem s = SiteSystem::nearest_neighbor(-1, 1, 1.0);
    REQUIRE(s.size() == 3);
    s.validate();
    for (Eigen::Index i = 0; i < 3; ++i) CHECK(std::abs(s.q.row(i).sum()) < 1e-15);
    CHECK(s.q(0, 1) == 1.0);
    CHECK(s.q(1, 0) == 1.0);
    CHECK(s.q(0, 2) == 0.0);
    SiteSystem bad = s;
    bad.q(0, 2) = -0.5;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("flow without dormant sites is the matrix exponential of the adjoint") {
    const SiteSystem s = SiteSystem::nearest_neighbor(0, 4, 0.7);
    MPSState st;
    st.x1 = Eigen::VectorXd::Zero(5);
    st.x1(1) = 1.0;
    st.x1(4) = 0.5;
    st.x2 = Eigen::VectorXd::Zero(5);
    const double t = 1.3;
    const MPSState out = flow_between_jumps(st, s, t);
    const Eigen::MatrixXd a = s.adjoint() * t;
    const Eigen::VectorXd exact = a.exp() * st.x1;
    CHECK((out.x1 - exact).cwiseAbs().maxCoeff() < 1e-9);
    CHECK(out.total_mass() == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(out.time == doctest::Approx(t));
}

TEST_CASE("dormant site collects its inflow") {
    // site -1 feeds site 0 at unit rate; x2(0) grows by 1 - e^-t
    const SiteSystem s = SiteSystem::nearest_neighbor(-1, 1, 1.0);
    MPSState st;
    st.x1 = Eigen::Vector3d(1.0, 0.0, 0.0);
    st.x2 = Eigen::Vector3d(0.0, 0.5, 0.0);
    const MPSState out = flow_between_jumps(st, s, 2.0);
    CHECK(out.x2(1) == doctest::Approx(0.5 + 1.0 - std::exp(-2.0)).epsilon(1e-9));
    CHECK(out.x1(1) == 0.0);
    CHECK(out.x1(2) == 0.0);
}

TEST_CASE("apply_jump and leftmost_dormant") {
    MPSState st;
    st.x1 = Eigen::Vector3d(0.2, 0.0, 0.0);
    st.x2 = Eigen::Vector3d(0.0, 0.5, 0.3);
    CHECK(leftmost_dormant(st) == 1);
    const MPSState j = apply_jump(st, 1);
    CHECK(j.x1(1) == 0.5);
    CHECK(j.x2(1) == 0.0);
    CHECK(leftmost_dormant(j) == 2);
    CHECK_THROWS_AS(apply_jump(j, 1), std::logic_error);
}

TEST_CASE("survival of a single dormant pile matches the threshold law") {
    const SiteSystem s = SiteSystem::nearest_neighbor(-1, 1, 1.0);
    MPSState st;
    st.x1 = Eigen::Vector3d(1.0, 0.0, 0.0);
    st.x2 = Eigen::Vector3d(0.0, 0.5, 0.0);
    const double h = 1.0;
    const std::size_t n = 4000;
    std::size_t none = 0;
    for (std::size_t r = 0; r < n; ++r) {
        Rng rng(9, r);
        const JumpDraw d = next_jump(st, s, rng, h);
        if (!d.site) ++none;
        else CHECK(*d.site == 1);
    }
    const double g = 1.0 - std::exp(-h);
    const double p = 0.5 / (0.5 + g);  // P[W > G(h)]
    const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(n));
    CHECK(std::abs(static_cast<double>(none) / static_cast<double>(n) - p) < 4.0 * se);
}

TEST_CASE("simulate_mps keeps mass and jumps at the leftmost dormant site") {
    const SiteSystem s = SiteSystem::nearest_neighbor(0, 5, 1.0);
    MPSState st;
    st.x1 = Eigen::VectorXd::Zero(6);
    st.x1(0) = 2.0;
    st.x2 = Eigen::VectorXd::Constant(6, 0.3);
    st.x2(0) = 0.0;
    const std::vector<double> cps{1.0, 3.0};
    for (std::uint64_t r = 0; r < 20; ++r) {
        Rng rng(1, r);
        const MPSRun run = simulate_mps(s, st, 3.0, rng, cps);
        CHECK(run.checkpoints.size() == 2);
        CHECK(run.max_mass_drift < 1e-9);
        for (const auto& e : run.events) CHECK(e.at_leftmost);
        for (std::size_t k = 1; k < run.events.size(); ++k) CHECK(run.events[k].t >= run.events[k - 1].t);
    }
}

TEST_CASE("simulate_mps input checks") {
    const SiteSystem s = SiteSystem::nearest_neighbor(0, 1, 1.0);
    MPSState st;
    st.x1 = Eigen::Vector2d(1.0, 0.0);
    st.x2 = Eigen::Vector2d(1.0, 0.5);  // site 0 holds both types
    Rng rng(1);
    CHECK_THROWS_AS(simulate_mps(s, st, 1.0, rng), std::invalid_argument);
}

TEST_CASE("site system json round trip") {
    const SiteSystem s = SiteSystem::nearest_neighbor(-2, 2, 0.5);
    nlohmann::json j = s;
    const SiteSystem back = j.get<SiteSystem>();
    CHECK(back.labels == s.labels);
    CHECK(back.q == s.q);
}
