#include "frog/one_colony.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace frog {

double sample_W(double x, double u) {
    if (!(x > 0.0) || !std::isfinite(x)) throw std::invalid_argument("sample_W: x must be > 0");
    if (!(u > 0.0 && u < 1.0)) throw std::invalid_argument("sample_W: u must lie in (0, 1)");
    return x * u / (1.0 - u);
}

double wake_threshold_cdf(double x, double r) {
    if (r <= 0.0) return 0.0;
    return r / (x + r);
}

ImmigrationSchedule::ImmigrationSchedule(std::vector<double> breaks, std::vector<double> rates)
    : breaks_(std::move(breaks)), rates_(std::move(rates)) {
    if (breaks_.empty() || breaks_.size() != rates_.size() || breaks_.front() != 0.0) {
        throw std::invalid_argument("ImmigrationSchedule: need matching breaks/rates with breaks[0] == 0");
    }
    for (std::size_t k = 0; k < rates_.size(); ++k) {
        if (!(rates_[k] >= 0.0) || !std::isfinite(rates_[k])) {
            throw std::invalid_argument("ImmigrationSchedule: rates must be finite and >= 0");
        }
        if (k > 0 && !(breaks_[k] > breaks_[k - 1])) {
            throw std::invalid_argument("ImmigrationSchedule: breaks must increase strictly");
        }
    }
    cum_.resize(breaks_.size());
    cum_[0] = 0.0;
    for (std::size_t k = 1; k < breaks_.size(); ++k) {
        cum_[k] = cum_[k - 1] + rates_[k - 1] * (breaks_[k] - breaks_[k - 1]);
    }
}

ImmigrationSchedule ImmigrationSchedule::constant_rate(double rate) {
    return ImmigrationSchedule({0.0}, {rate});
}

namespace {
std::size_t segment(const std::vector<double>& breaks, double t) {
    auto it = std::upper_bound(breaks.begin(), breaks.end(), t);
    return static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, (it - breaks.begin()) - 1));
}
}  // namespace

double ImmigrationSchedule::cumulative(double t) const {
    if (t <= 0.0) return 0.0;
    const std::size_t k = segment(breaks_, t);
    return cum_[k] + rates_[k] * (t - breaks_[k]);
}

double ImmigrationSchedule::rate(double t) const { return rates_[segment(breaks_, std::max(t, 0.0))]; }

double ImmigrationSchedule::inverse(double w) const {
    if (w <= 0.0) return 0.0;
    for (std::size_t k = 0; k < breaks_.size(); ++k) {
        const bool last = k + 1 == breaks_.size();
        const double end_cum = last ? std::numeric_limits<double>::infinity() : cum_[k + 1];
        if (w <= end_cum) {
            if (rates_[k] == 0.0) {
                if (last) return std::numeric_limits<double>::infinity();
                continue;
            }
            return breaks_[k] + (w - cum_[k]) / rates_[k];
        }
    }
    return std::numeric_limits<double>::infinity();
}

double ImmigrationSchedule::discounted(double a, double b, double c, double T) const {
    if (!(b > a)) return 0.0;
    double total = 0.0;
    for (std::size_t k = segment(breaks_, a); k < breaks_.size(); ++k) {
        const double lo = std::max(a, breaks_[k]);
        const double hi = k + 1 < breaks_.size() ? std::min(b, breaks_[k + 1]) : b;
        if (hi > lo && rates_[k] > 0.0) {
            if (c == 0.0) {
                total += rates_[k] * (hi - lo);
            } else {
                total += rates_[k] * (std::exp(-c * (T - hi)) - std::exp(-c * (T - lo))) / c;
            }
        }
        if (k + 1 < breaks_.size() && breaks_[k + 1] >= b) break;
    }
    return total;
}

ColonyPath::ColonyPath(double x1_0, double x2_0, ImmigrationSchedule theta, double c, double tau,
                       double horizon)
    : x1_0_(x1_0), x2_0_(x2_0), theta_(std::move(theta)), c_(c), tau_(tau), horizon_(horizon) {
    x1_at_tau_ = std::isfinite(tau_) ? x1_0_ + x2_0_ + theta_.cumulative(tau_) : 0.0;
}

ColonyState ColonyPath::at(double t) const {
    if (t < 0.0 || t > horizon_) throw std::out_of_range("ColonyPath::at: t outside [0, horizon]");
    if (t < tau_) return {0.0, x2_0_ + theta_.cumulative(t), t};
    const double x1 = x1_at_tau_ * std::exp(-c_ * (t - tau_)) + theta_.discounted(tau_, t, c_, t);
    return {x1, 0.0, t};
}

std::vector<ColonyState> ColonyPath::sample(std::span<const double> times) const {
    std::vector<ColonyState> out;
    out.reserve(times.size());
    for (double t : times) out.push_back(at(t));
    return out;
}

std::vector<ColonyState> ColonyPath::trajectory(std::size_t n) const {
    std::vector<ColonyState> out;
    n = std::max<std::size_t>(n, 1);
    bool jump_done = !(tau_ > 0.0 && tau_ <= horizon_);
    for (std::size_t k = 0; k <= n; ++k) {
        const double t = horizon_ * static_cast<double>(k) / static_cast<double>(n);
        if (!jump_done && t >= tau_) {
            out.push_back({0.0, x2_0_ + theta_.cumulative(tau_), tau_});
            out.push_back(at(tau_));
            jump_done = true;
            if (t == tau_) continue;
        }
        out.push_back(at(t));
    }
    return out;
}

ColonyPath solve_mp2(double x1_0, double x2_0, const ImmigrationSchedule& theta, double c,
                     double w, double horizon) {
    if (x1_0 < 0.0 || x2_0 < 0.0 || c < 0.0 || horizon < 0.0) {
        throw std::invalid_argument("solve_mp2: inputs must be nonnegative");
    }
    if (x1_0 * x2_0 != 0.0) throw std::invalid_argument("solve_mp2: (x1_0, x2_0) must lie in E");
    double tau = 0.0;
    if (x2_0 > 0.0) {
        if (!(w > 0.0)) throw std::invalid_argument("solve_mp2: w must be > 0");
        tau = theta.inverse(w);
    }
    return ColonyPath(x1_0, x2_0, theta, c, tau, horizon);
}

ColonyPath solve_mp1(double x2_0, double w, double horizon) {
    if (!(x2_0 > 0.0)) throw std::invalid_argument("solve_mp1: x2_0 must be > 0");
    return solve_mp2(0.0, x2_0, ImmigrationSchedule::constant_rate(1.0), 0.0, w, horizon);
}

}  // namespace frog
