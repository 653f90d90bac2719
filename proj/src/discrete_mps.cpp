#include "frog/discrete_mps.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace frog {

namespace {

constexpr double kForcedJumpMass = 1e-14;
constexpr double kBisectionTol = 1e-10;

double max_step(const SiteSystem& sys) {
    const double norm = sys.q.cwiseAbs().rowwise().sum().maxCoeff();
    return norm > 0.0 ? std::min(0.01, 0.1 / norm) : 0.01;
}

struct Flow {
    Eigen::MatrixXd adj;
    Eigen::ArrayXd dormant;  // 1 where x2 > 0 at the start of the segment

    Flow(const SiteSystem& sys, const MPSState& s)
        : adj(sys.adjoint()), dormant((s.x2.array() > 0.0).cast<double>()) {}

    MPSState rk4(const MPSState& s, double h) const {
        // x1' = (1 - D) A* x1, x2' = D A* x1; x2 never feeds back.
        auto d1 = [&](const Eigen::VectorXd& x1) -> Eigen::VectorXd {
            return ((1.0 - dormant) * (adj * x1).array()).matrix();
        };
        const Eigen::VectorXd k1 = d1(s.x1);
        const Eigen::VectorXd k2 = d1(s.x1 + 0.5 * h * k1);
        const Eigen::VectorXd k3 = d1(s.x1 + 0.5 * h * k2);
        const Eigen::VectorXd k4 = d1(s.x1 + h * k3);
        MPSState out;
        out.x1 = s.x1 + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        // x2 gains D A* x1 integrated with the same stages
        const Eigen::VectorXd y1 = adj * s.x1;
        const Eigen::VectorXd y2 = adj * (s.x1 + 0.5 * h * k1);
        const Eigen::VectorXd y3 = adj * (s.x1 + 0.5 * h * k2);
        const Eigen::VectorXd y4 = adj * (s.x1 + h * k3);
        out.x2 = s.x2 + (dormant * (h / 6.0 * (y1 + 2.0 * y2 + 2.0 * y3 + y4)).array()).matrix();
        out.x1 = out.x1.cwiseMax(0.0);
        out.x2 = out.x2.cwiseMax(0.0);
        out.time = s.time + h;
        return out;
    }

    Eigen::VectorXd site_hazards(const MPSState& s) const {
        const Eigen::VectorXd inflow = adj * s.x1;
        Eigen::VectorXd h = Eigen::VectorXd::Zero(s.x2.size());
        for (Eigen::Index k = 0; k < s.x2.size(); ++k) {
            if (dormant[k] > 0.0 && s.x2[k] > 0.0) h[k] = std::max(0.0, inflow[k]) / s.x2[k];
        }
        return h;
    }
    double hazard(const MPSState& s) const { return site_hazards(s).sum(); }

    std::optional<std::size_t> forced_site(const MPSState& s) const {
        const Eigen::VectorXd inflow = adj * s.x1;
        for (Eigen::Index k = 0; k < s.x2.size(); ++k) {
            if (dormant[k] > 0.0 && s.x2[k] < kForcedJumpMass && inflow[k] > 0.0) {
                return static_cast<std::size_t>(k);
            }
        }
        return std::nullopt;
    }
};

std::size_t pick_site(const Eigen::VectorXd& hazards, double u) {
    const double total = hazards.sum();
    double acc = 0.0;
    std::size_t last_positive = 0;
    for (Eigen::Index k = 0; k < hazards.size(); ++k) {
        if (hazards[k] <= 0.0) continue;
        last_positive = static_cast<std::size_t>(k);
        acc += hazards[k];
        if (u * total < acc) return static_cast<std::size_t>(k);
    }
    return last_positive;
}

void check_state(const MPSState& s, const SiteSystem& sys) {
    if (s.x1.size() != static_cast<Eigen::Index>(sys.size()) ||
        s.x2.size() != static_cast<Eigen::Index>(sys.size())) {
        throw std::invalid_argument("MPS state size does not match the site system");
    }
    for (Eigen::Index k = 0; k < s.x1.size(); ++k) {
        if (s.x1[k] < 0.0 || s.x2[k] < 0.0) throw std::invalid_argument("MPS state must be nonnegative");
        if (s.x1[k] * s.x2[k] != 0.0) throw std::invalid_argument("MPS state must lie in E (x1*x2 == 0)");
    }
}

// Integrates the hazard from `state` until it exceeds `e` or `horizon` is
// reached; `on_time` is called at each mark in `marks` passed on the way.
JumpDraw run_to_jump(const MPSState& state, const SiteSystem& sys, double e, double u_site,
                     double horizon, std::span<const double> marks,
                     const std::function<void(const MPSState&)>& on_mark) {
    const Flow flow(sys, state);
    const double hmax = max_step(sys);
    MPSState cur = state;
    auto mark = std::lower_bound(marks.begin(), marks.end(), cur.time);
    auto emit_marks = [&](const MPSState& s) {
        while (mark != marks.end() && *mark <= s.time) {
            if (*mark == s.time) on_mark(s);
            ++mark;
        }
    };
    emit_marks(cur);
    if (auto k = flow.forced_site(cur)) return {cur.time, k, cur};
    const bool any_dormant = (flow.dormant > 0.0).any();
    double acc = 0.0;
    while (cur.time < horizon) {
        double h = std::min(hmax, horizon - cur.time);
        if (mark != marks.end()) h = std::min(h, *mark - cur.time);
        if (!any_dormant || cur.x1.sum() == 0.0) {
            // nothing can wake; just carry the flow to the marks and horizon
            MPSState nxt = flow.rk4(cur, h);
            if (mark != marks.end() && *mark - cur.time == h) nxt.time = *mark;
            cur = std::move(nxt);
            emit_marks(cur);
            continue;
        }
        const double h0 = flow.hazard(cur);
        MPSState nxt = flow.rk4(cur, h);
        if (mark != marks.end() && *mark - cur.time == h) nxt.time = *mark;
        const double inc = 0.5 * h * (h0 + flow.hazard(nxt));
        if (acc + inc >= e) {
            double lo = 0.0;
            double hi = h;
            MPSState at_hi = nxt;
            while (hi - lo > kBisectionTol) {
                const double mid = 0.5 * (lo + hi);
                MPSState trial = flow.rk4(cur, mid);
                if (acc + 0.5 * mid * (h0 + flow.hazard(trial)) >= e) {
                    hi = mid;
                    at_hi = std::move(trial);
                } else {
                    lo = mid;
                }
            }
            const Eigen::VectorXd hz = flow.site_hazards(at_hi);
            if (hz.sum() <= 0.0) {
                // trapezoid overshoot with H(tau-) == 0 cannot pick a site; keep flowing
                acc = e;
                cur = std::move(at_hi);
                continue;
            }
            return {at_hi.time, pick_site(hz, u_site), at_hi};
        }
        acc += inc;
        cur = std::move(nxt);
        emit_marks(cur);
        if (auto k = flow.forced_site(cur)) return {cur.time, k, cur};
    }
    return {std::numeric_limits<double>::infinity(), std::nullopt, cur};
}

}  // namespace

SiteSystem SiteSystem::nearest_neighbor(long first, long last, double rate) {
    if (last < first) throw std::invalid_argument("nearest_neighbor: need first <= last");
    SiteSystem s;
    const auto n = static_cast<Eigen::Index>(last - first + 1);
    for (long k = first; k <= last; ++k) s.labels.push_back(k);
    s.q = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (i > 0) s.q(i, i - 1) = rate;
        if (i + 1 < n) s.q(i, i + 1) = rate;
        s.q(i, i) = -s.q.row(i).sum();
    }
    return s;
}

void SiteSystem::validate() const {
    const auto n = static_cast<Eigen::Index>(labels.size());
    if (n == 0 || q.rows() != n || q.cols() != n) {
        throw std::invalid_argument("SiteSystem: q must be a square matrix matching the site labels");
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            if (i != j && q(i, j) < 0.0) throw std::invalid_argument("SiteSystem: off-diagonal rates must be >= 0");
        }
        if (std::abs(q.row(i).sum()) > 1e-12) throw std::invalid_argument("SiteSystem: rows of q must sum to 0");
    }
}

MPSState flow_between_jumps(const MPSState& state, const SiteSystem& sys, double dt) {
    if (dt < 0.0) throw std::invalid_argument("flow_between_jumps: dt must be >= 0");
    const Flow flow(sys, state);
    const double hmax = max_step(sys);
    MPSState cur = state;
    const double end = state.time + dt;
    while (cur.time < end) {
        const double h = std::min(hmax, end - cur.time);
        cur = flow.rk4(cur, h);
    }
    cur.time = end;
    return cur;
}

JumpDraw next_jump(const MPSState& state, const SiteSystem& sys, Rng& rng, double horizon) {
    if (!std::isfinite(horizon)) {
        if (state.x1.sum() == 0.0) {
            return {std::numeric_limits<double>::infinity(), std::nullopt, state};
        }
        throw std::invalid_argument("next_jump: horizon must be finite");
    }
    const double e = rng.exponential();
    const double u = rng.uniform();
    return run_to_jump(state, sys, e, u, horizon, {}, [](const MPSState&) {});
}

MPSState apply_jump(const MPSState& state, std::size_t k) {
    if (k >= static_cast<std::size_t>(state.x2.size()) || !(state.x2[static_cast<Eigen::Index>(k)] > 0.0)) {
        throw std::logic_error("apply_jump: site has no dormant mass");
    }
    MPSState out = state;
    const auto i = static_cast<Eigen::Index>(k);
    out.x1[i] = state.x2[i];
    out.x2[i] = 0.0;
    return out;
}

std::size_t leftmost_dormant(const MPSState& state) {
    for (Eigen::Index k = 0; k < state.x2.size(); ++k) {
        if (state.x2[k] > 0.0) return static_cast<std::size_t>(k);
    }
    return static_cast<std::size_t>(std::max<Eigen::Index>(state.x2.size() - 1, 0));
}

MPSRun simulate_mps(const SiteSystem& sys, const MPSState& initial, double horizon, Rng& rng,
                    std::span<const double> checkpoints) {
    sys.validate();
    check_state(initial, sys);
    if (!std::isfinite(horizon) || horizon < initial.time) {
        throw std::invalid_argument("simulate_mps: horizon must be finite and >= the start time");
    }
    if (!std::is_sorted(checkpoints.begin(), checkpoints.end())) {
        throw std::invalid_argument("simulate_mps: checkpoints must be sorted");
    }
    MPSRun run;
    const double mass0 = initial.total_mass();
    auto track = [&](const MPSState& s) {
        if (mass0 > 0.0) run.max_mass_drift = std::max(run.max_mass_drift, std::abs(s.total_mass() - mass0) / mass0);
    };
    auto record = [&](const MPSState& s) {
        run.checkpoints.push_back(s);
        track(s);
    };
    MPSState cur = initial;
    for (;;) {
        const double e = rng.exponential();
        const double u = rng.uniform();
        JumpDraw jump = run_to_jump(cur, sys, e, u, horizon, checkpoints, record);
        if (!jump.site) {
            cur = std::move(jump.pre_jump);
            break;
        }
        const std::size_t k = *jump.site;
        MPSEvent ev;
        ev.t = jump.tau;
        ev.site = sys.labels[k];
        ev.pile = jump.pre_jump.x2[static_cast<Eigen::Index>(k)];
        ev.at_leftmost = k == leftmost_dormant(jump.pre_jump);
        run.events.push_back(ev);
        cur = apply_jump(jump.pre_jump, k);
        track(cur);
    }
    run.final_state = std::move(cur);
    return run;
}

void to_json(nlohmann::json& j, const SiteSystem& s) {
    auto rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < s.q.rows(); ++i) {
        std::vector<double> row(static_cast<std::size_t>(s.q.cols()));
        for (Eigen::Index c = 0; c < s.q.cols(); ++c) row[static_cast<std::size_t>(c)] = s.q(i, c);
        rows.push_back(row);
    }
    j = nlohmann::json{{"sites", s.labels}, {"q", rows}};
}

void from_json(const nlohmann::json& j, SiteSystem& s) {
    s.labels = j.at("sites").get<std::vector<long>>();
    const auto rows = j.at("q").get<std::vector<std::vector<double>>>();
    const auto n = static_cast<Eigen::Index>(rows.size());
    s.q = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (static_cast<Eigen::Index>(rows[static_cast<std::size_t>(i)].size()) != n) {
            throw std::invalid_argument("q-matrix must be square");
        }
        for (Eigen::Index c = 0; c < n; ++c) s.q(i, c) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)];
    }
    s.validate();
}

std::string event_line(const MPSEvent& e) {
    nlohmann::json j{{"t", e.t}, {"site", e.site}, {"pile", e.pile}};
    return j.dump();
}

}  // namespace frog
