#pragma once

#include <limits>
#include <span>
#include <vector>

#include "frog/measures.hpp"
#include "frog/point_pattern.hpp"
#include "frog/rng.hpp"

namespace frog {

/// Poisson process with intensity f(z)dz x r^-2 dr restricted to r >= r_min:
/// Poisson(mass(f)/r_min) points, z ~ f normalized, r = r_min/U.
PointPattern sample_J(const GridDensity& f, double r_min, Rng& rng);

struct BlockThresholds {
    std::vector<double> values;
    /// True where no point of the block cleared r_min; the value is then 0 and
    /// only known to lie below r_min.
    std::vector<bool> censored;
};

/// W_i = sup over points in ((i-1)eta, i*eta] of r_j - mu([(i-1)eta, z_j)),
/// i = 1..ceil(1/eta).
BlockThresholds build_W_from_J(const PointPattern& j, const GridDensity& mu, double eta);

/// First z with r > s + mu([0, z)), scanning in z order; the right end of
/// mu's support if no point qualifies. Throws unless s > j.r_min.
double ustar_from_J(const PointPattern& j, double s, const GridDensity& mu);

/// (x1, x2] x [s, r_max).
struct Rectangle {
    double x1 = 0.0;
    double x2 = 0.0;
    double s = 0.0;
    double r_max = std::numeric_limits<double>::infinity();

    bool contains(const MarkedPoint& p) const { return p.z > x1 && p.z <= x2 && p.r >= s && p.r < r_max; }
    /// Integral of f(z) r^-2 over the rectangle.
    double intensity(const GridDensity& f) const;
};

std::size_t count_in(const PointPattern& p, const Rectangle& c);

/// The lattice pattern {(i*eta, W_i)} over the uncensored blocks.
PointPattern lattice_pattern(const BlockThresholds& w, double eta);

struct CouplingRow {
    double eta = 0.0;
    std::size_t rectangle = 0;
    std::size_t count_j = 0;
    std::size_t count_eta = 0;
};

struct CouplingReport {
    std::vector<CouplingRow> rows;
    bool all_equal() const;
};

/// Counts J(C) and J^eta(C) on one shared pattern for every eta and rectangle.
/// Throws if a rectangle reaches below 2 * r_min.
CouplingReport coupling_convergence_report(const PointPattern& j, const GridDensity& f,
                                           std::span<const double> etas,
                                           std::span<const Rectangle> rectangles);

/// As above on a freshly sampled J.
CouplingReport coupling_convergence_report(const GridDensity& f, double r_min,
                                           std::span<const double> etas,
                                           std::span<const Rectangle> rectangles, Rng& rng);

}  // namespace frog
