#include "frog/space_ppp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace frog {

PointPattern sample_J(const GridDensity& f, double r_min, Rng& rng) {
    if (!(r_min > 0.0) || !std::isfinite(r_min)) throw std::invalid_argument("sample_J: r_min must be > 0");
    PointPattern out;
    out.r_min = r_min;
    const double mass = f.total_mass();
    if (!(mass > 0.0)) return out;
    const auto vals = f.values();
    std::vector<double> cum(vals.size());
    double acc = 0.0;
    for (std::size_t k = 0; k < vals.size(); ++k) {
        acc += vals[k] * f.dx();
        cum[k] = acc;
    }
    const std::uint64_t n = rng.poisson(mass / r_min);
    out.points.reserve(n);
    for (std::uint64_t k = 0; k < n; ++k) {
        const double target = rng.uniform() * acc;
        auto it = std::upper_bound(cum.begin(), cum.end(), target);
        const auto cell = static_cast<std::size_t>(std::min<std::ptrdiff_t>(
            it - cum.begin(), static_cast<std::ptrdiff_t>(cum.size()) - 1));
        const double z = f.cell_left(cell) + rng.uniform() * f.dx();
        const double r = r_min / rng.uniform();
        out.points.push_back({z, r});
    }
    std::sort(out.points.begin(), out.points.end(),
              [](const MarkedPoint& a, const MarkedPoint& b) { return a.z < b.z; });
    return out;
}

BlockThresholds build_W_from_J(const PointPattern& j, const GridDensity& mu, double eta) {
    if (!(eta > 0.0)) throw std::invalid_argument("build_W_from_J: eta must be > 0");
    const std::size_t n = pile_count(eta);
    std::vector<double> best(n, -std::numeric_limits<double>::infinity());
    for (const auto& p : j.points) {
        if (!(p.z > 0.0)) continue;
        auto i = static_cast<std::size_t>(std::ceil(p.z / eta));
        // (a, b] blocks: repair rounding in z/eta
        while (i > 1 && static_cast<double>(i - 1) * eta >= p.z) --i;
        while (static_cast<double>(i) * eta < p.z) ++i;
        if (i == 0 || i > n) continue;
        const double lo = static_cast<double>(i - 1) * eta;
        const double cand = p.r - mu.mass_in(lo, p.z, IntervalClosure::RightOpen);
        best[i - 1] = std::max(best[i - 1], cand);
    }
    BlockThresholds out;
    out.values.resize(n, 0.0);
    out.censored.resize(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        // anything below r_min may be beaten by a point the truncation dropped
        if (!(best[i] >= j.r_min) || !(best[i] > 0.0)) {
            out.censored[i] = true;
        } else {
            out.values[i] = best[i];
        }
    }
    return out;
}

double ustar_from_J(const PointPattern& j, double s, const GridDensity& mu) {
    if (!(s > j.r_min)) {
        throw std::invalid_argument("ustar_from_J: need s > r_min, otherwise censored points could trigger");
    }
    for (const auto& p : j.points) {
        const double lo = std::min(0.0, p.z);
        if (p.r > s + mu.mass_in(lo, p.z, IntervalClosure::RightOpen)) return p.z;
    }
    const auto vals = mu.values();
    for (std::size_t k = vals.size(); k-- > 0;) {
        if (vals[k] > 0.0) return mu.cell_left(k) + mu.dx();
    }
    return mu.left();
}

double Rectangle::intensity(const GridDensity& f) const {
    const double spatial = f.mass_in(x1, x2);
    const double marks = 1.0 / s - (std::isfinite(r_max) ? 1.0 / r_max : 0.0);
    return spatial * marks;
}

std::size_t count_in(const PointPattern& p, const Rectangle& c) {
    return static_cast<std::size_t>(
        std::count_if(p.points.begin(), p.points.end(), [&](const MarkedPoint& q) { return c.contains(q); }));
}

PointPattern lattice_pattern(const BlockThresholds& w, double eta) {
    PointPattern out;
    for (std::size_t i = 0; i < w.values.size(); ++i) {
        if (!w.censored[i]) out.points.push_back({static_cast<double>(i + 1) * eta, w.values[i]});
    }
    return out;
}

bool CouplingReport::all_equal() const {
    return std::all_of(rows.begin(), rows.end(), [](const CouplingRow& r) { return r.count_j == r.count_eta; });
}

CouplingReport coupling_convergence_report(const PointPattern& j, const GridDensity& f,
                                           std::span<const double> etas,
                                           std::span<const Rectangle> rectangles) {
    for (const auto& c : rectangles) {
        if (c.s < 2.0 * j.r_min) {
            throw std::invalid_argument("coupling_convergence_report: rectangle reaches into the censoring band (s < 2 r_min)");
        }
        if (!(c.x2 > c.x1) || !(c.r_max > c.s)) throw std::invalid_argument("coupling_convergence_report: empty rectangle");
    }
    CouplingReport out;
    for (double eta : etas) {
        const PointPattern lattice = lattice_pattern(build_W_from_J(j, f, eta), eta);
        for (std::size_t k = 0; k < rectangles.size(); ++k) {
            out.rows.push_back({eta, k, count_in(j, rectangles[k]), count_in(lattice, rectangles[k])});
        }
    }
    return out;
}

CouplingReport coupling_convergence_report(const GridDensity& f, double r_min,
                                           std::span<const double> etas,
                                           std::span<const Rectangle> rectangles, Rng& rng) {
    return coupling_convergence_report(sample_J(f, r_min, rng), f, etas, rectangles);
}

}  // namespace frog
