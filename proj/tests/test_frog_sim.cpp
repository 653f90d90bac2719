#include <doctest.h>

#include <cmath>

#include "frog/frog_sim.hpp"
#include "frog/stat_verify.hpp"

using namespace frog;

namespace {

FrogConfig small_config() {
    FrogConfig cfg;
    cfg.solver = SolverConfig{0.01, 1e-3, 0.5, 1.2};
    cfg.horizon = 1000.0;
    cfg.right_margin = 0.1;
    cfg.snapshot_count = 8;
    return cfg;
}

// least initial mass found by topping up the carried wake mass pile by pile
double topped_up(const std::vector<double>& ws, const std::vector<double>& xs) {
    double need = ws[0];
    double m = ws[0];
    for (std::size_t i = 0; i < ws.size(); ++i) {
        if (m < ws[i]) {
            need += ws[i] - m;
            m = ws[i];
        }
        m += xs[i];
    }
    return need;
}

}  // namespace

TEST_CASE("wake_threshold examples") {
    CHECK(wake_threshold(std::vector<double>{1.0}, std::vector<double>{5.0}) == 1.0);
    CHECK(wake_threshold(std::vector<double>{1.0, 2.0}, std::vector<double>{0.5, 0.0}) == 1.5);
    CHECK(wake_threshold(std::vector<double>{3.0, 2.0, 4.0}, std::vector<double>{1.0, 0.25, 0.5}) == 3.0);
    const std::vector<double> ws{0.5, 2.0, 0.25, 5.0};
    const std::vector<double> xs{0.25, 0.5, 1.0, 0.125};
    CHECK(wake_threshold(ws, xs) == topped_up(ws, xs));
}

TEST_CASE("compute_ustar examples") {
    const AtomicMeasure piles({{0.25, 0.5}, {0.5, 0.5}, {0.75, 0.5}, {1.0, 0.5}});
    CHECK(compute_ustar(std::vector<double>{0.1, 0.1, 0.1, 0.1}, piles, 1.0) == 1.0);
    CHECK(compute_ustar(std::vector<double>{2.0, 0.1, 0.1, 0.1}, piles, 1.0) == 0.25);
    CHECK(compute_ustar(std::vector<double>{0.5, 1.5, 0.1, 0.1}, piles, 1.0) == 0.5);
    CHECK(compute_ustar(std::vector<double>{0.5, 1.4, 1.9, 2.6}, piles, 1.0) == 1.0);
    CHECK(compute_ustar(std::vector<double>{0.5, 1.4, 2.0, 2.6}, piles, 1.0) == 0.75);
    CHECK_THROWS(compute_ustar(std::vector<double>{0.5}, piles, 1.0));
}

TEST_CASE("space driven run wakes piles in order and stalls where compute_ustar says") {
    const GridDensity x1 = GridDensity::uniform(-0.5, 0.0, 0.01, 0.6);
    const AtomicMeasure piles({{0.1, 0.3}, {0.2, 0.2}, {0.3, 0.4}});
    const std::vector<double> ws{0.2, 0.5, 2.0};
    const FrogRun run = simulate_space_driven(x1, piles, ws, small_config());
    REQUIRE(run.events.size() == 2);
    CHECK(run.stalled);
    CHECK_FALSE(run.all_woke);
    CHECK(run.stall_position == compute_ustar(ws, piles, x1.total_mass()));
    CHECK(run.events[0].index == 0);
    CHECK(run.events[1].index == 1);
    CHECK(run.events[0].time < run.events[1].time);
    CHECK(run.events[0].v == doctest::Approx(0.2).epsilon(1e-8));
    CHECK(run.events[1].jump_size == doctest::Approx(0.7).epsilon(1e-8));
    CHECK(run.max_conservation_error < 1e-10);
    CHECK(run.pickups.size() == 2);
    CHECK(run.pickups[0].pickup == 0.2);
}

TEST_CASE("full wake-up ends with no barrier") {
    const GridDensity x1 = GridDensity::uniform(-0.5, 0.0, 0.01, 1.0);
    const AtomicMeasure piles({{0.1, 0.3}, {0.2, 0.2}});
    const std::vector<double> ws{0.1, 0.1};
    const FrogRun run = simulate_space_driven(x1, piles, ws, small_config());
    CHECK(run.all_woke);
    CHECK(run.events.size() == 2);
    CHECK(run.stall_position == 0.2);
    CHECK(run.final_state.y == 0.0);
    const PointPattern l = extract_L(run.events, piles);
    REQUIRE(l.size() == 2);
    CHECK(l.points[0].z == 0.1);
    CHECK(l.points[1].r == doctest::Approx(0.1).epsilon(1e-8));
}

TEST_CASE("hazard driven run conserves mass and respects pile order") {
    const GridDensity x1 = GridDensity::uniform(-0.5, 0.0, 0.01, 0.5);
    const AtomicMeasure piles = discretize_initial(GridDensity::uniform(0.0, 1.0, 0.01, 1.0), 0.1);
    FrogConfig cfg = small_config();
    cfg.horizon = 20.0;
    cfg.run_to_horizon = true;
    for (std::uint64_t r = 0; r < 10; ++r) {
        Rng rng(2, r);
        const FrogRun run = simulate_hazard_driven(x1, piles, rng, cfg);
        CHECK(run.max_conservation_error < 1e-9);
        for (std::size_t k = 0; k < run.events.size(); ++k) {
            CHECK(run.events[k].index == k);
            CHECK(run.events[k].site == piles[k].position);
        }
        for (const auto& p : run.pickups) CHECK(p.pickup <= 0.1 * (1.0 + 1e-12));
        CHECK(run.end_time == doctest::Approx(20.0));
    }
}

TEST_CASE("same inputs give identical runs") {
    const GridDensity x1 = GridDensity::uniform(-0.5, 0.0, 0.01, 0.5);
    const AtomicMeasure piles = discretize_initial(GridDensity::uniform(0.0, 1.0, 0.01, 1.0), 0.1);
    Rng a(5, 3);
    Rng b(5, 3);
    const FrogRun ra = simulate_hazard_driven(x1, piles, a, small_config());
    const FrogRun rb = simulate_hazard_driven(x1, piles, b, small_config());
    CHECK(ra.events == rb.events);
}

TEST_CASE("input validation") {
    const GridDensity x1 = GridDensity::uniform(-0.5, 0.2, 0.01, 0.5);
    const AtomicMeasure piles({{0.1, 0.3}});
    CHECK_THROWS(simulate_space_driven(x1, piles, std::vector<double>{1.0}, small_config()));
    const GridDensity ok = GridDensity::uniform(-0.5, 0.0, 0.01, 0.5);
    CHECK_THROWS(simulate_space_driven(ok, piles, std::vector<double>{1.0, 2.0}, small_config()));
    FrogConfig bad = small_config();
    bad.horizon = 0.0;
    CHECK_THROWS(bad.validate());
}

TEST_CASE("event_line is one parseable JSON object") {
    EventRecord e{0.125, 0.5, 0.75, 0.25, 3};
    const auto j = nlohmann::json::parse(event_line(e));
    CHECK(j.at("t").get<double>() == 0.125);
    CHECK(j.at("index").get<std::size_t>() == 3);
    CHECK(event_line(e).find('\n') == std::string::npos);
}

TEST_CASE("dormant mass y + untouched is a martingale and the barrier only moves right") {
    const GridDensity x1 = GridDensity::uniform(-0.5, 0.0, 0.01, 0.5);
    const AtomicMeasure piles = discretize_initial(GridDensity::uniform(0.0, 1.0, 0.01, 1.0), 0.1);
    FrogConfig cfg = small_config();
    cfg.solver = SolverConfig{0.01, 1e-3, 0.05, 1.1};
    cfg.horizon = 4.0;
    cfg.run_to_horizon = true;
    cfg.snapshot_count = 6;
    std::vector<std::vector<double>> rows;
    for (std::uint64_t r = 0; r < 3000; ++r) {
        Rng rng(12, r);
        const FrogRun run = simulate_hazard_driven(x1, piles, rng, cfg);
        // snapshots at the marks 0, 0.8, ..., 4 plus one after every wake-up
        std::vector<double> row;
        for (std::size_t k = 1; k < run.snapshots.size(); ++k) {
            const auto& s = run.snapshots[k];
            REQUIRE(s.interface >= run.snapshots[k - 1].interface);
            REQUIRE(s.interface <= piles[piles.size() - 1].position);
            const double mark = 0.8 * static_cast<double>(row.size() + 1);
            if (row.size() < 5 && s.time == cfg.horizon * static_cast<double>(row.size() + 1) / 5.0) {
                REQUIRE(s.time == doctest::Approx(mark));
                row.push_back(s.y + s.untouched);
            }
        }
        REQUIRE(row.size() == 5);
        for (std::size_t k = 1; k < run.pickups.size(); ++k) {
            const double step = run.pickups[k].position - run.pickups[k - 1].position;
            REQUIRE(step == doctest::Approx(0.1).epsilon(1e-12));
        }
        rows.push_back(std::move(row));
    }
    for (const auto& rep : martingale_drift(rows, 1.0)) CHECK(rep.pass);
}
