#include "frog/frog_sim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "frog/one_colony.hpp"

namespace frog {

void FrogConfig::validate() const {
    solver.validate();
    if (!(horizon > 0.0) || !std::isfinite(horizon)) throw std::invalid_argument("horizon must be > 0");
    if (!(right_margin >= 0.0)) throw std::invalid_argument("right_margin must be >= 0");
}

namespace {

constexpr double kBisectionTol = 1e-10;

// Wake rule of the threshold sampler.
struct ThresholdRule {
    std::span<const double> w;
    std::size_t i = 0;

    bool unreachable(std::size_t pile, double /*x*/, double available) {
        i = pile;
        return w[i] >= available;
    }
    bool crossed(double killed, double dk, double /*y*/) const { return killed + dk >= w[i]; }
    void commit(double /*dk*/, double /*y*/) {}
};

// Wake rule of the hazard sampler. The backward-Euler killed increment of a
// step of length h equals h times the boundary flux of the new state, so
// log1p(dk / y) is the integral of flux / y over the step when the absorbed
// mass grows linearly across it.
struct HazardRule {
    Rng& rng;
    double clock = 0.0;
    double acc = 0.0;

    bool unreachable(std::size_t /*pile*/, double x, double available) {
        clock = rng.exponential();
        acc = 0.0;
        // y can grow at most to x + available, i.e. the hazard integral stays below log1p(available/x)
        return clock >= std::log1p(available / x);
    }
    bool crossed(double /*killed*/, double dk, double y) const { return acc + std::log1p(dk / y) >= clock; }
    void commit(double dk, double y) { acc += std::log1p(dk / y); }
};

std::vector<double> smeared_profile(const KilledHeatState& s) {
    const auto& g = s.u.density;
    std::vector<double> out(g.values().begin(), g.values().end());
    for (const auto& a : s.u.atoms.atoms()) {
        auto j = static_cast<std::ptrdiff_t>(std::ceil((a.position - g.left()) / g.dx() - 1e-9)) - 1;
        j = std::clamp<std::ptrdiff_t>(j, 0, static_cast<std::ptrdiff_t>(out.size()) - 1);
        out[static_cast<std::size_t>(j)] += a.mass / g.dx();
    }
    return out;
}

template <class Rule>
FrogRun run(const GridDensity& x1_0, const AtomicMeasure& piles, Rule rule, const FrogConfig& cfg) {
    cfg.validate();
    const HeatEngine engine(cfg.solver);
    const double dx = cfg.solver.dx;
    const double left = std::isnan(cfg.domain_left) ? x1_0.left() : cfg.domain_left;
    const double last_pile = piles.empty() ? x1_0.right() : piles[piles.size() - 1].position;
    const double cells = std::ceil((last_pile + cfg.right_margin - left) / dx - 1e-9);
    const double right = left + std::max(cells, 1.0) * dx;

    FrogRun out;
    FrogState st;
    st.heat = engine.make_state(x1_0, left, right, piles.empty() ? kNoBarrier : piles[0].position);
    st.piles = piles.empty() ? AtomicMeasure() : piles.restricted_above(piles[0].position);
    st.interface = piles.empty() ? last_pile : piles[0].position;
    const double s = x1_0.total_mass();
    const double total0 = s + piles.total_mass();
    double untouched = piles.total_mass();
    double available = s;
    bool active = !piles.empty();
    out.all_woke = piles.empty();
    out.stall_position = last_pile;
    out.profile_left = left;
    out.profile_dx = dx;

    auto arrive = [&](std::size_t i) {
        const double x = piles[i].mass;
        st.pile_index = i;
        st.y = x;
        untouched -= x;
        if (rule.unreachable(i, x, available)) {
            out.stalled = true;
            out.stall_position = piles[i].position;
        }
    };
    if (active) arrive(0);

    auto snapshot = [&](double t) {
        FrogSnapshot snap;
        snap.time = t;
        snap.interface = st.interface;
        snap.x1_mass = st.heat.u.total_mass();
        snap.y = st.y;
        snap.untouched = std::max(untouched, 0.0);
        const double total = snap.x1_mass + snap.y + snap.untouched;
        snap.conservation_error = total0 > 0.0 ? std::abs(total - total0) / total0 : std::abs(total);
        out.max_conservation_error = std::max(out.max_conservation_error, snap.conservation_error);
        if (cfg.store_profiles) snap.profile = smeared_profile(st.heat);
        out.snapshots.push_back(std::move(snap));
    };

    std::vector<double> marks;
    if (cfg.snapshot_count == 1) marks.push_back(0.0);
    for (std::size_t k = 0; cfg.snapshot_count > 1 && k < cfg.snapshot_count; ++k) {
        marks.push_back(cfg.horizon * static_cast<double>(k) / static_cast<double>(cfg.snapshot_count - 1));
    }
    std::size_t next_mark = 0;
    const double time_eps = 1e-12 * cfg.horizon;
    auto take_due_snapshots = [&] {
        while (next_mark < marks.size() && marks[next_mark] <= st.heat.time + time_eps) {
            snapshot(marks[next_mark]);
            ++next_mark;
        }
    };
    take_due_snapshots();

    double dt = cfg.solver.dt;
    const double dt_cap = cfg.solver.max_step();
    while (st.heat.time < cfg.horizon - time_eps) {
        const bool pile_live = active && !out.stalled;
        if (!pile_live && !cfg.run_to_horizon) break;
        double h = std::min(dt, cfg.horizon - st.heat.time);
        if (next_mark < marks.size()) h = std::min(h, marks[next_mark] - st.heat.time);
        h = std::max(h, time_eps);

        if (pile_live || (active && out.stalled)) {
            const double killed = st.heat.killed_cum;
            if (pile_live) {
                const double dk = engine.trial_killed(st.heat, h);
                if (rule.crossed(killed, dk, st.y)) {
                    double lo = 0.0;
                    double hi = h;
                    while (hi - lo > kBisectionTol * h) {
                        const double mid = 0.5 * (lo + hi);
                        if (rule.crossed(killed, engine.trial_killed(st.heat, mid), st.y)) {
                            hi = mid;
                        } else {
                            lo = mid;
                        }
                    }
                    engine.advance(st.heat, hi);
                    const std::size_t i = st.pile_index;
                    const double v = st.heat.killed_cum;
                    EventRecord ev{st.heat.time, piles[i].position, piles[i].mass + v, v, i};
                    out.events.push_back(ev);
                    take_due_snapshots();
                    // the woken pile re-enters the wake population as an atom at its site
                    std::vector<Atom> atoms(st.heat.u.atoms.atoms().begin(), st.heat.u.atoms.atoms().end());
                    atoms.push_back({ev.site, ev.jump_size});
                    st.heat.u.atoms = AtomicMeasure(std::move(atoms));
                    st.heat = reset_killed(std::move(st.heat));
                    available += piles[i].mass;
                    const double y_before = ev.jump_size;
                    if (i + 1 < piles.size()) {
                        engine.move_barrier(st.heat, piles[i + 1].position);
                        st.interface = piles[i + 1].position;
                        st.piles = piles.restricted_above(piles[i + 1].position);
                        arrive(i + 1);
                        out.pickups.push_back({ev.time, piles[i + 1].position, piles[i + 1].mass, y_before, st.y});
                    } else {
                        engine.move_barrier(st.heat, kNoBarrier);
                        st.y = 0.0;
                        active = false;
                        out.all_woke = true;
                    }
                    snapshot(ev.time);
                    dt = cfg.solver.dt;
                    continue;
                }
            }
            engine.advance(st.heat, h);
            const double dk_actual = st.heat.killed_cum - killed;
            if (pile_live) rule.commit(dk_actual, st.y);
            st.y += dk_actual;
        } else {
            engine.advance(st.heat, h);
        }
        take_due_snapshots();
        dt = std::min(dt * cfg.solver.dt_growth, dt_cap);
    }
    st.time = st.heat.time;
    out.end_time = st.heat.time;
    out.final_state = std::move(st);
    return out;
}

void check_piles(const GridDensity& x1_0, const AtomicMeasure& piles) {
    if (!piles.empty() && x1_0.mass_in(piles[0].position, x1_0.right() + 1.0) > 0.0) {
        throw std::invalid_argument("initial wake mass must lie left of the first pile");
    }
}

}  // namespace

FrogRun simulate_space_driven(const GridDensity& x1_0, const AtomicMeasure& piles,
                              std::span<const double> thresholds, const FrogConfig& cfg) {
    if (thresholds.size() != piles.size()) {
        throw std::invalid_argument("simulate_space_driven: need one threshold per pile (" +
                                    std::to_string(piles.size()) + "), got " +
                                    std::to_string(thresholds.size()));
    }
    for (double w : thresholds) {
        if (!(w > 0.0)) throw std::invalid_argument("simulate_space_driven: thresholds must be > 0");
    }
    check_piles(x1_0, piles);
    return run(x1_0, piles, ThresholdRule{thresholds}, cfg);
}

FrogRun simulate_hazard_driven(const GridDensity& x1_0, const AtomicMeasure& piles, Rng& rng,
                               const FrogConfig& cfg) {
    check_piles(x1_0, piles);
    return run(x1_0, piles, HazardRule{rng}, cfg);
}

std::vector<double> sample_thresholds(const AtomicMeasure& piles, Rng& rng) {
    std::vector<double> w;
    w.reserve(piles.size());
    for (const auto& p : piles.atoms()) w.push_back(sample_W(p.mass, rng.uniform()));
    return w;
}

PointPattern extract_L(std::span<const EventRecord> events, const AtomicMeasure& piles) {
    PointPattern out;
    for (const auto& e : events) {
        const double x = piles.mass_in(e.site, e.site, IntervalClosure::Closed);
        out.points.push_back({e.site, e.jump_size - x});
    }
    std::stable_sort(out.points.begin(), out.points.end(),
                     [](const MarkedPoint& a, const MarkedPoint& b) { return a.z < b.z; });
    return out;
}

double compute_ustar(std::span<const double> thresholds, const AtomicMeasure& piles,
                     double initial_x1_mass) {
    if (thresholds.size() != piles.size()) {
        throw std::invalid_argument("compute_ustar: need one threshold per pile");
    }
    if (piles.empty()) throw std::invalid_argument("compute_ustar: no piles");
    double available = initial_x1_mass;
    for (std::size_t i = 0; i < piles.size(); ++i) {
        if (thresholds[i] >= available) return piles[i].position;
        available += piles[i].mass;
    }
    return piles[piles.size() - 1].position;
}

double wake_threshold(std::span<const double> ws, std::span<const double> xs) {
    if (ws.size() != xs.size()) throw std::invalid_argument("wake_threshold: length mismatch");
    if (ws.empty()) throw std::invalid_argument("wake_threshold: empty input");
    double best = -std::numeric_limits<double>::infinity();
    double before = 0.0;
    for (std::size_t i = 0; i < ws.size(); ++i) {
        if (!(ws[i] > 0.0) || xs[i] < 0.0) throw std::invalid_argument("wake_threshold: need ws > 0, xs >= 0");
        best = std::max(best, ws[i] - before);
        before += xs[i];
    }
    return best;
}

std::string event_line(const EventRecord& e) {
    nlohmann::json j{{"t", e.time}, {"site", e.site}, {"jump_size", e.jump_size}, {"v", e.v}, {"index", e.index}};
    return j.dump();
}

}  // namespace frog
