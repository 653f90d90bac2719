#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include <json.hpp>

namespace frog {

/// Which ends of an interval [a, b] are included when measuring it.
enum class IntervalClosure {
    LeftOpen,   ///< (a, b]  -- the convention used throughout the simulator
    Closed,     ///< [a, b]
    Open,       ///< (a, b)
    RightOpen,  ///< [a, b)
};

struct Atom {
    double position = 0.0;
    double mass = 0.0;

    bool operator==(const Atom&) const = default;
};

/// Finite purely atomic measure on the line.
///
/// Atoms are kept sorted by strictly increasing position. Construction merges
/// atoms sharing a position and drops atoms of zero mass, so two measures
/// that are equal as measures compare equal as values.
class AtomicMeasure {
  public:
    AtomicMeasure() = default;
    explicit AtomicMeasure(std::vector<Atom> atoms);

    std::span<const Atom> atoms() const { return atoms_; }
    std::size_t size() const { return atoms_.size(); }
    bool empty() const { return atoms_.empty(); }
    const Atom& operator[](std::size_t i) const { return atoms_[i]; }

    double total_mass() const;
    double mass_in(double a, double b,
                   IntervalClosure closure = IntervalClosure::LeftOpen) const;

    /// Atoms strictly right of z.
    AtomicMeasure restricted_above(double z) const;

    bool operator==(const AtomicMeasure&) const = default;

  private:
    std::vector<Atom> atoms_;
};

/// Piecewise-constant density on a uniform grid.
///
/// Cell j covers [left + j*dx, left + (j+1)*dx] and carries density
/// values[j]; its mass is values[j]*dx.
class GridDensity {
  public:
    GridDensity() = default;
    GridDensity(double left, double dx, std::vector<double> values);

    /// Density with the exact cell averages of f on [left, right]; right - left
    /// must be a whole number of cells. Cell averages use 3-point
    /// Gauss-Legendre, exact for polynomials up to degree five.
    static GridDensity from_function(double left, double right, double dx,
                                     const std::function<double(double)>& f);
    /// Constant density carrying `mass` on [left, right].
    static GridDensity uniform(double left, double right, double dx, double mass);

    double left() const { return left_; }
    double dx() const { return dx_; }
    double right() const { return left_ + dx_ * static_cast<double>(values_.size()); }
    std::size_t size() const { return values_.size(); }
    std::span<const double> values() const { return values_; }
    /// Writable view for in-place solvers; the caller keeps values >= 0.
    std::span<double> data() { return values_; }
    double cell_left(std::size_t j) const { return left_ + dx_ * static_cast<double>(j); }

    double total_mass() const;
    /// Mass of the interval; the closure is irrelevant for a density but kept
    /// for a uniform interface with AtomicMeasure.
    double mass_in(double a, double b,
                   IntervalClosure closure = IntervalClosure::LeftOpen) const;
    double sup_density() const;

    /// Exact rebinning onto another uniform grid covering [left, left + n*new_dx].
    /// Mass outside the target range is dropped.
    GridDensity rebinned(double left, double new_dx, std::size_t n) const;

    bool operator==(const GridDensity&) const = default;

  private:
    double left_ = 0.0;
    double dx_ = 1.0;
    std::vector<double> values_;
};

/// Density part plus atoms; the simulator's wake population between events.
struct HybridMeasure {
    GridDensity density;
    AtomicMeasure atoms;

    double total_mass() const { return density.total_mass() + atoms.total_mass(); }
    double mass_in(double a, double b,
                   IntervalClosure closure = IntervalClosure::LeftOpen) const {
        return density.mass_in(a, b, closure) + atoms.mass_in(a, b, closure);
    }
    bool operator==(const HybridMeasure&) const = default;
};

inline double total_mass(const AtomicMeasure& m) { return m.total_mass(); }
inline double total_mass(const GridDensity& m) { return m.total_mass(); }
inline double total_mass(const HybridMeasure& m) { return m.total_mass(); }

/// Mass of the interval between a and b under the given convention.
/// Throws std::invalid_argument if a > b.
template <class Measure>
double measure_of_interval(const Measure& m, double a, double b,
                           IntervalClosure closure = IntervalClosure::LeftOpen) {
    return m.mass_in(a, b, closure);
}

/// Lumps x2 into atoms at i*eta, i = 1..ceil(1/eta), each carrying the mass of
/// ((i-1)*eta, i*eta]. x2 must be supported in [0, 1].
AtomicMeasure discretize_initial(const GridDensity& x2, double eta);

/// Number of piles ceil(1/eta), guarded against eta values like 0.1 whose
/// reciprocal is not exactly representable.
std::size_t pile_count(double eta);

// JSON: {"atoms":[[z,m],...]}, {"left":..,"dx":..,"values":[..]},
// {"density":{...},"atoms":[[z,m],...]}.
void to_json(nlohmann::json& j, const AtomicMeasure& m);
void from_json(const nlohmann::json& j, AtomicMeasure& m);
void to_json(nlohmann::json& j, const GridDensity& m);
void from_json(const nlohmann::json& j, GridDensity& m);
void to_json(nlohmann::json& j, const HybridMeasure& m);
void from_json(const nlohmann::json& j, HybridMeasure& m);

}  // namespace frog
