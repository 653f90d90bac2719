#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "frog/space_ppp.hpp"
#include "frog/stat_verify.hpp"

using namespace frog;

namespace {

// W_i by brute force over all points of the block
BlockThresholds brute_W(const PointPattern& j, const GridDensity& mu, double eta) {
    const std::size_t n = pile_count(eta);
    BlockThresholds w{std::vector<double>(n, 0.0), std::vector<bool>(n, true)};
    for (std::size_t i = 0; i < n; ++i) {
        const double a = static_cast<double>(i) * eta;
        const double b = static_cast<double>(i + 1) * eta;
        double best = -1.0;
        for (const auto& p : j.points) {
            if (p.z > a && p.z <= b) best = std::max(best, p.r - mu.mass_in(a, p.z));
        }
        if (best >= j.r_min) {
            w.values[i] = best;
            w.censored[i] = false;
        }
    }
    return w;
}

}  // namespace

TEST_CASE("sample_J: sorted, truncated, Poisson count") {
    const GridDensity f = GridDensity::uniform(0.0, 1.0, 0.01, 1.0);
    std::vector<std::uint64_t> counts;
    for (std::uint64_t r = 0; r < 2000; ++r) {
        Rng rng(4, r);
        const PointPattern j = sample_J(f, 0.05, rng);
        counts.push_back(j.size());
        for (std::size_t k = 0; k < j.size(); ++k) {
            CHECK(j.points[k].r >= 0.05);
            CHECK(j.points[k].z >= 0.0);
            CHECK(j.points[k].z <= 1.0);
            if (k > 0) CHECK(j.points[k - 1].z <= j.points[k].z);
        }
    }
    CHECK(poisson_count_test(counts, 20.0, 0.001).pass);
}

TEST_CASE("build_W_from_J matches brute force") {
    const GridDensity mu = GridDensity::uniform(0.0, 1.0, 0.001, 1.0);
    for (std::uint64_t r = 0; r < 50; ++r) {
        Rng rng(6, r);
        const PointPattern j = sample_J(mu, 0.01, rng);
        for (double eta : {0.1, 0.05, 0.02}) {
            const BlockThresholds w = build_W_from_J(j, mu, eta);
            const BlockThresholds b = brute_W(j, mu, eta);
            REQUIRE(w.values.size() == b.values.size());
            for (std::size_t i = 0; i < w.values.size(); ++i) {
                CHECK(w.censored[i] == b.censored[i]);
                CHECK(w.values[i] == doctest::Approx(b.values[i]).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("ustar_from_J on a hand-made pattern") {
    const GridDensity mu = GridDensity::uniform(0.0, 1.0, 0.01, 1.0);
    PointPattern j;
    j.r_min = 0.01;
    j.points = {{0.1, 0.3}, {0.4, 0.95}, {0.6, 2.0}};
    // thresholds r must beat s + z
    CHECK(ustar_from_J(j, 0.5, mu) == doctest::Approx(0.4));
    CHECK(ustar_from_J(j, 0.1, mu) == doctest::Approx(0.1));
    CHECK(ustar_from_J(j, 1.5, mu) == doctest::Approx(1.0));
    CHECK_THROWS(ustar_from_J(j, 0.005, mu));
}

TEST_CASE("rectangle intensity and counting") {
    const GridDensity f = GridDensity::uniform(0.0, 1.0, 0.01, 1.0);
    const Rectangle c{0.2, 0.6, 0.5, 1.0};
    CHECK(c.intensity(f) == doctest::Approx(0.4 * (2.0 - 1.0)));
    CHECK(Rectangle{0.0, 1.0, 0.25}.intensity(f) == doctest::Approx(4.0));
    PointPattern p;
    p.points = {{0.2, 0.7}, {0.3, 0.5}, {0.6, 0.99}, {0.5, 1.0}, {0.4, 0.49}};
    CHECK(count_in(p, c) == 2);
}

TEST_CASE("lattice pattern skips censored blocks") {
    BlockThresholds w{{0.3, 0.0, 0.7}, {false, true, false}};
    const PointPattern p = lattice_pattern(w, 0.25);
    REQUIRE(p.size() == 2);
    CHECK(p.points[1].z == 0.75);
    CHECK(p.points[1].r == 0.7);
}

TEST_CASE("coupling counts agree for small eta") {
    const GridDensity f = GridDensity::uniform(0.0, 1.0, 0.001, 1.0);
    const std::vector<Rectangle> rects{{0.105, 0.555, 0.2}, {0.305, 0.905, 0.5}};
    const std::vector<double> etas{0.01, 0.005};
    Rng rng(8);
    const CouplingReport rep = coupling_convergence_report(f, 0.05, etas, rects, rng);
    CHECK(rep.rows.size() == 4);
    const std::vector<Rectangle> low{{0.1, 0.5, 0.05}};
    Rng rng2(8);
    CHECK_THROWS(coupling_convergence_report(f, 0.05, etas, low, rng2));
}
