#include "frog/heat_engine.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace frog {

void SolverConfig::validate() const {
    if (!(dx > 0.0) || !std::isfinite(dx)) throw std::invalid_argument("solver.dx must be > 0");
    if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("solver.dt must be > 0");
    if (dt_max < 0.0) throw std::invalid_argument("solver.dt_max must be >= 0");
    if (dt_max > 0.0 && dt_max < dt) throw std::invalid_argument("solver.dt_max must be >= solver.dt");
    if (!(dt_growth >= 1.0)) throw std::invalid_argument("solver.dt_growth must be >= 1");
    if (scheme != "implicit-euler") {
        throw std::invalid_argument("solver.scheme: only \"implicit-euler\" is supported");
    }
}

HeatEngine::HeatEngine(SolverConfig cfg) : cfg_(std::move(cfg)) { cfg_.validate(); }

std::size_t HeatEngine::edge_index(const GridDensity& grid, double z) const {
    const double pos = (z - grid.left()) / grid.dx();
    const double idx = std::round(pos);
    if (std::abs(pos - idx) > 1e-6 || idx < 0.0 || idx > static_cast<double>(grid.size())) {
        throw std::invalid_argument("barrier position " + std::to_string(z) +
                                    " is not a grid cell edge (dx must divide pile spacing)");
    }
    return static_cast<std::size_t>(idx);
}

std::size_t HeatEngine::active_cells(const KilledHeatState& state) const {
    if (state.barrier == kNoBarrier) return state.u.density.size();
    return edge_index(state.u.density, state.barrier);
}

KilledHeatState HeatEngine::make_state(const GridDensity& initial, double left, double right,
                                       double barrier) const {
    const double cells = (right - left) / cfg_.dx;
    const auto n = static_cast<std::size_t>(std::llround(cells));
    if (n == 0 || std::abs(cells - static_cast<double>(n)) > 1e-6) {
        throw std::invalid_argument("solver grid [left, right] must be a whole number of cells of width dx");
    }
    KilledHeatState s;
    s.u.density = initial.rebinned(left, cfg_.dx, n);
    s.barrier = barrier;
    const double before = initial.total_mass();
    const double after = s.u.density.total_mass();
    if (std::abs(before - after) > 1e-12 * std::max(1.0, before)) {
        throw std::invalid_argument("initial density does not fit inside the solver grid");
    }
    if (barrier != kNoBarrier) {
        const std::size_t b = edge_index(s.u.density, barrier);
        const auto vals = s.u.density.values();
        for (std::size_t j = b; j < vals.size(); ++j) {
            if (vals[j] > 0.0) throw std::invalid_argument("initial density has mass right of the barrier");
        }
    }
    return s;
}

std::size_t HeatEngine::load(const KilledHeatState& state) const {
    const std::size_t m = active_cells(state);
    const auto vals = state.u.density.values();
    work_.assign(vals.begin(), vals.begin() + static_cast<std::ptrdiff_t>(m));
    const auto& grid = state.u.density;
    for (const auto& a : state.u.atoms.atoms()) {
        // (a, b] convention: an atom on an edge belongs to the cell on its left
        const double pos = (a.position - grid.left()) / grid.dx();
        auto j = static_cast<std::ptrdiff_t>(std::ceil(pos - 1e-9)) - 1;
        j = std::max<std::ptrdiff_t>(j, 0);
        if (static_cast<std::size_t>(j) >= m) {
            throw std::logic_error("heat state holds an atom right of the barrier");
        }
        work_[static_cast<std::size_t>(j)] += a.mass / grid.dx();
    }
    return m;
}

void HeatEngine::solve(std::size_t m, bool dirichlet, double dt) const {
    // (I - dt L) u1 = u0 with L the three-point Laplacian times 1/2,
    // reflecting at cell 0 and ghost value -u at the barrier edge.
    if (m == 0) return;
    const double r = 0.5 * dt / (cfg_.dx * cfg_.dx);
    cprime_.resize(m);
    auto diag = [&](std::size_t j) {
        double d = 1.0 + 2.0 * r;
        if (j == 0) d -= r;
        if (j == m - 1) d += dirichlet ? r : -r;
        return d;
    };
    // Thomas algorithm; sub- and super-diagonals are both -r.
    double denom = diag(0);
    cprime_[0] = -r / denom;
    work_[0] /= denom;
    for (std::size_t j = 1; j < m; ++j) {
        denom = diag(j) + r * cprime_[j - 1];
        cprime_[j] = -r / denom;
        work_[j] = (work_[j] + r * work_[j - 1]) / denom;
    }
    for (std::size_t j = m - 1; j-- > 0;) work_[j] -= cprime_[j] * work_[j + 1];
}

namespace {
double sum(const std::vector<double>& v, std::size_t m) {
    double s = 0.0;
    for (std::size_t j = 0; j < m; ++j) s += v[j];
    return s;
}
}  // namespace

double HeatEngine::trial_killed(const KilledHeatState& state, double dt) const {
    if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be > 0");
    const std::size_t m = load(state);
    const double before = sum(work_, m);
    solve(m, state.barrier != kNoBarrier, dt);
    const double after = sum(work_, m);
    return std::max(0.0, (before - after) * cfg_.dx);
}

void HeatEngine::advance(KilledHeatState& state, double dt) const {
    if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be > 0");
    const std::size_t m = load(state);
    const double before = sum(work_, m);
    solve(m, state.barrier != kNoBarrier, dt);
    const double after = sum(work_, m);
    std::copy(work_.begin(), work_.begin() + static_cast<std::ptrdiff_t>(m),
              state.u.density.data().begin());
    state.u.atoms = AtomicMeasure();
    state.killed_cum += std::max(0.0, (before - after) * cfg_.dx);
    state.time += dt;
}

KilledHeatState HeatEngine::step(const KilledHeatState& state, double dt) const {
    KilledHeatState next = state;
    advance(next, dt);
    return next;
}

double HeatEngine::boundary_flux(const KilledHeatState& state) const {
    if (state.barrier == kNoBarrier) return 0.0;
    const std::size_t m = load(state);
    if (m == 0) return 0.0;
    // (1/2) * (u_last - ghost)/dx with ghost = -u_last
    return work_[m - 1] / cfg_.dx;
}

void HeatEngine::move_barrier(KilledHeatState& state, double new_barrier) const {
    if (new_barrier != kNoBarrier) {
        if (state.barrier != kNoBarrier && new_barrier < state.barrier) {
            throw std::invalid_argument("move_barrier: the barrier only moves right");
        }
        edge_index(state.u.density, new_barrier);
    }
    state.barrier = new_barrier;
}

KilledHeatState reset_killed(KilledHeatState state) {
    state.killed_cum = 0.0;
    return state;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double survival_mass_analytic(double x0, double z, double t) {
    if (x0 > z) throw std::invalid_argument("survival_mass_analytic: need x0 <= z");
    if (t < 0.0) throw std::invalid_argument("survival_mass_analytic: need t >= 0");
    if (x0 == z) return t == 0.0 ? 1.0 : 0.0;
    if (t == 0.0) return 1.0;
    // 2*Phi(d) - 1 = erf(d / sqrt 2)
    return std::erf((z - x0) / std::sqrt(2.0 * t));
}

}  // namespace frog
