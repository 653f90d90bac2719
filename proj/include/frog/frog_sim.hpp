#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "frog/heat_engine.hpp"
#include "frog/measures.hpp"
#include "frog/point_pattern.hpp"
#include "frog/rng.hpp"

namespace frog {

struct FrogConfig {
    SolverConfig solver;
    double horizon = 1.0;
    /// Left end of the solver grid (a reflecting wall). NaN means the left
    /// end of the initial wake density.
    double domain_left = std::numeric_limits<double>::quiet_NaN();
    /// Room right of the last pile for the wake mass once every pile woke.
    double right_margin = 0.5;
    std::size_t snapshot_count = 64;
    bool store_profiles = false;
    /// Keep running the heat flow after a stall or after the last wake-up.
    bool run_to_horizon = false;

    void validate() const;
};

/// Simulator state: wake mass under killed heat flow plus the dormant side.
struct FrogState {
    KilledHeatState heat;
    AtomicMeasure piles;          ///< untouched piles right of the barrier
    double y = 0.0;               ///< mass of the pile at the barrier, x_i + absorbed
    std::size_t pile_index = 0;   ///< index of the pile at the barrier
    double interface = 0.0;       ///< current pile position (last pile once all woke)
    double time = 0.0;
};

struct EventRecord {
    double time = 0.0;
    double site = 0.0;
    double jump_size = 0.0;  ///< pile mass at wake-up, x_i + v
    double v = 0.0;          ///< wake mass absorbed by the pile
    std::size_t index = 0;   ///< pile index, 0-based

    bool operator==(const EventRecord&) const = default;
};

struct FrogSnapshot {
    double time = 0.0;
    double interface = 0.0;
    double x1_mass = 0.0;
    double y = 0.0;
    double untouched = 0.0;
    double conservation_error = 0.0;  ///< relative
    std::vector<double> profile;      ///< cell densities, only with store_profiles
};

/// Barrier advance: the pile at the new interface enters Y.
struct PickupRecord {
    double time = 0.0;
    double position = 0.0;
    double pickup = 0.0;    ///< mass of the newly reached pile
    double y_before = 0.0;  ///< pile mass that just woke
    double y_after = 0.0;
};

struct FrogRun {
    std::vector<EventRecord> events;
    std::vector<FrogSnapshot> snapshots;
    std::vector<PickupRecord> pickups;
    double stall_position = 0.0;  ///< first pile that can never wake, else the last pile
    bool stalled = false;
    bool all_woke = false;
    double max_conservation_error = 0.0;
    double end_time = 0.0;
    double profile_left = 0.0;
    double profile_dx = 0.0;
    FrogState final_state;
};

/// Runs the approximating process with pre-drawn wake thresholds, one per pile.
///
/// Pile i wakes once the mass absorbed at it reaches thresholds[i]. A pile is
/// declared unreachable, and the run stalls there, when its threshold is at
/// least the wake mass available to it (initial wake mass plus the piles
/// already woken); this is the same comparison compute_ustar makes.
FrogRun simulate_space_driven(const GridDensity& x1_0, const AtomicMeasure& piles,
                              std::span<const double> thresholds, const FrogConfig& cfg);

/// Same dynamics, with the wake time of each pile drawn from the hazard
/// boundary_flux / y: an Exp(1) clock per pile, fired when the integrated
/// hazard exceeds it.
FrogRun simulate_hazard_driven(const GridDensity& x1_0, const AtomicMeasure& piles, Rng& rng,
                               const FrogConfig& cfg);

/// Thresholds drawn as sample_W(x_i) from `rng`, one per pile.
std::vector<double> sample_thresholds(const AtomicMeasure& piles, Rng& rng);

/// Space-indexed jump pattern {(site_i, jump_size_i - x_i)}.
PointPattern extract_L(std::span<const EventRecord> events, const AtomicMeasure& piles);

/// Position of the first pile i with thresholds[i] >= initial_x1_mass + sum_{j<i} x_j,
/// or of the last pile if there is none.
double compute_ustar(std::span<const double> thresholds, const AtomicMeasure& piles,
                     double initial_x1_mass);

/// Least initial wake mass that wakes every pile: max_i (ws[i] - sum_{j<i} xs[j]).
double wake_threshold(std::span<const double> ws, std::span<const double> xs);

/// One JSON object per event; doubles round-trip exactly.
std::string event_line(const EventRecord& e);

}  // namespace frog
