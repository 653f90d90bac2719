#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "frog/measures.hpp"

namespace frog {

/// Discretization of the killed heat flow (generator (1/2) d^2/dx^2).
struct SolverConfig {
    double dx = 1e-3;
    double dt = 1e-4;
    /// Upper bound for the step when dt_growth > 1; 0 means "same as dt".
    double dt_max = 0.0;
    /// Geometric step growth between events (1 keeps the step fixed).
    double dt_growth = 1.0;
    std::string scheme = "implicit-euler";

    /// Throws std::invalid_argument on a bad configuration.
    void validate() const;
    double max_step() const { return dt_max > 0.0 ? dt_max : dt; }
};

inline constexpr double kNoBarrier = std::numeric_limits<double>::infinity();

/// Wake population evolving under heat flow with absorption at `barrier`.
///
/// The density grid's left end is reflecting; the barrier sits on a cell edge
/// and the cells right of it hold no mass. `killed_cum` accumulates the mass
/// absorbed at the barrier since the last reset.
struct KilledHeatState {
    HybridMeasure u;
    double barrier = kNoBarrier;
    double killed_cum = 0.0;
    double time = 0.0;
};

/// Implicit Euler, cell-centred finite volumes, Dirichlet value pinned to zero
/// at the barrier edge. Positivity preserving for every dt.
///
/// The killed increment of a step is the discrete mass balance, so
/// mass(u) + killed_cum is conserved up to rounding. An engine owns scratch
/// buffers and must not be shared between threads.
class HeatEngine {
  public:
    explicit HeatEngine(SolverConfig cfg);

    const SolverConfig& config() const { return cfg_; }

    /// Fresh state on the grid [left, right] holding `initial` (rebinned
    /// exactly). Throws if the barrier is off-grid or mass sits right of it.
    KilledHeatState make_state(const GridDensity& initial, double left, double right,
                               double barrier) const;

    KilledHeatState step(const KilledHeatState& state, double dt) const;
    void advance(KilledHeatState& state, double dt) const;

    /// Mass that one step of length dt would absorb, without touching state.
    double trial_killed(const KilledHeatState& state, double dt) const;

    /// Instantaneous absorption rate (1/2)|d_x^- u| at the barrier.
    double boundary_flux(const KilledHeatState& state) const;

    /// Moves the barrier right (or removes it with kNoBarrier).
    void move_barrier(KilledHeatState& state, double new_barrier) const;

    /// Index of the grid edge at position z; throws if z is not on an edge.
    std::size_t edge_index(const GridDensity& grid, double z) const;

  private:
    std::size_t active_cells(const KilledHeatState& state) const;
    /// Copies the active cells into work_ with pending atoms smeared in.
    std::size_t load(const KilledHeatState& state) const;
    void solve(std::size_t m, bool dirichlet, double dt) const;

    SolverConfig cfg_;
    mutable std::vector<double> work_;
    mutable std::vector<double> cprime_;
};

KilledHeatState reset_killed(KilledHeatState state);

/// Mass surviving at time t from a unit atom at x0 under absorption at z:
/// 2*Phi((z - x0)/sqrt(t)) - 1. Throws std::invalid_argument if x0 > z.
double survival_mass_analytic(double x0, double z, double t);

double normal_cdf(double x);

}  // namespace frog
