#pragma once

#include <limits>
#include <span>
#include <vector>

namespace frog {

/// Inverse-CDF draw of the wake threshold W(x): P[W > r] = x / (x + r).
/// Returns x*u/(1-u). Throws std::invalid_argument unless x > 0 and u in (0,1).
double sample_W(double x, double u);

/// CDF of W(x), r / (x + r) for r >= 0.
double wake_threshold_cdf(double x, double r);

/// Cumulative immigration t -> Theta((0, t]) with piecewise-constant rate.
///
/// Rate rates[k] applies on [breaks[k], breaks[k+1]); the last rate runs
/// forever. breaks[0] must be 0.
class ImmigrationSchedule {
  public:
    ImmigrationSchedule(std::vector<double> breaks, std::vector<double> rates);
    static ImmigrationSchedule constant_rate(double rate);

    double cumulative(double t) const;
    double rate(double t) const;
    /// inf{t >= 0 : cumulative(t) >= w}; +inf if the schedule never gets there.
    double inverse(double w) const;
    /// Integral of exp(-c (T - s)) Theta(ds) over (a, b].
    double discounted(double a, double b, double c, double T) const;

  private:
    std::vector<double> breaks_;
    std::vector<double> rates_;
    std::vector<double> cum_;  // cumulative at each break
};

struct ColonyState {
    double x1 = 0.0;
    double x2 = 0.0;
    double time = 0.0;
};

/// Closed-form path of the one-colony model given its wake threshold.
///
/// Before tau the dormant mass collects all immigration; at tau it wakes as a
/// whole and the wake mass then follows x1' = theta - c*x1.
class ColonyPath {
  public:
    ColonyPath(double x1_0, double x2_0, ImmigrationSchedule theta, double c, double tau,
               double horizon);

    double tau() const { return tau_; }
    double horizon() const { return horizon_; }
    /// Throws std::out_of_range for t outside [0, horizon].
    ColonyState at(double t) const;
    std::vector<ColonyState> sample(std::span<const double> times) const;
    /// n+1 equally spaced states on [0, horizon] plus the two sides of the jump.
    std::vector<ColonyState> trajectory(std::size_t n) const;

  private:
    double x1_0_;
    double x2_0_;
    ImmigrationSchedule theta_;
    double c_;
    double tau_;
    double horizon_;
    double x1_at_tau_;
};

/// One colony with immigration theta, emigration rate c and realized wake
/// threshold w (a sample_W output for the stochastic model). (x1_0, x2_0)
/// must lie in E, i.e. x1_0 * x2_0 == 0.
ColonyPath solve_mp2(double x1_0, double x2_0, const ImmigrationSchedule& theta, double c,
                     double w, double horizon);

/// Unit-rate immigration and no emigration; x2 grows with slope one until it
/// collapses at tau = w.
ColonyPath solve_mp1(double x2_0, double w, double horizon);

}  // namespace frog
