#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "frog/rng.hpp"

namespace frog {

/// Finite site space with the q-matrix A of the underlying Markov chain.
/// The wake mass moves by the adjoint A* = A^T.
struct SiteSystem {
    std::vector<long> labels;
    Eigen::MatrixXd q;

    /// Nearest-neighbour walk on first..last jumping at `rate` to each side
    /// (reflected at the ends).
    static SiteSystem nearest_neighbor(long first, long last, double rate);

    std::size_t size() const { return labels.size(); }
    Eigen::MatrixXd adjoint() const { return q.transpose(); }
    /// Off-diagonals >= 0 and row sums 0 within 1e-12; throws std::invalid_argument.
    void validate() const;
};

struct MPSState {
    Eigen::VectorXd x1;
    Eigen::VectorXd x2;
    double time = 0.0;

    double total_mass() const { return x1.sum() + x2.sum(); }
};

/// Deterministic flow between jumps: dormant sites (x2 > 0) collect
/// (A* x1)(k) with x1(k) pinned at 0, all other sites move by x1' = A* x1.
/// Classical RK4 with step <= min(0.01, 0.1/||A||).
MPSState flow_between_jumps(const MPSState& state, const SiteSystem& sys, double dt);

struct JumpDraw {
    double tau = 0.0;                 ///< +inf when nothing wakes before the horizon
    std::optional<std::size_t> site;  ///< index into sys.labels
    MPSState pre_jump;                ///< flowed state at tau- (or at the horizon)
};

/// Samples the next wake-up: P[tau > t] = exp(-int H), H = sum_k (A* x1)(k)/x2(k)
/// over dormant k, integrated by the trapezoid rule along the RK4 steps and
/// localized by bisection; the site is drawn with probability H_k/H at tau-.
JumpDraw next_jump(const MPSState& state, const SiteSystem& sys, Rng& rng, double horizon);

/// The pile at k wakes as a whole. Throws std::logic_error if x2(k) == 0.
MPSState apply_jump(const MPSState& state, std::size_t k);

struct MPSEvent {
    double t = 0.0;
    long site = 0;
    double pile = 0.0;        ///< dormant mass at the jump
    bool at_leftmost = false; ///< site equals min{k : x2(k) > 0} at tau-
};

struct MPSRun {
    std::vector<MPSEvent> events;
    std::vector<MPSState> checkpoints;
    MPSState final_state;
    double max_mass_drift = 0.0;  ///< relative, over checkpoints and events
};

/// Alternates flow, next_jump and apply_jump up to the horizon. `checkpoints`
/// must be sorted; the state is recorded at each of them.
MPSRun simulate_mps(const SiteSystem& sys, const MPSState& initial, double horizon, Rng& rng,
                    std::span<const double> checkpoints = {});

/// Index of the leftmost dormant site (labels assumed increasing), or the
/// last index when nothing is dormant.
std::size_t leftmost_dormant(const MPSState& state);

void to_json(nlohmann::json& j, const SiteSystem& s);
void from_json(const nlohmann::json& j, SiteSystem& s);
std::string event_line(const MPSEvent& e);

}  // namespace frog
