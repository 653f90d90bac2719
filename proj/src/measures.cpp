#include "frog/measures.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace frog {

namespace {

bool contains(double x, double a, double b, IntervalClosure closure) {
    switch (closure) {
        case IntervalClosure::LeftOpen: return x > a && x <= b;
        case IntervalClosure::Closed: return x >= a && x <= b;
        case IntervalClosure::Open: return x > a && x < b;
        case IntervalClosure::RightOpen: return x >= a && x < b;
    }
    return false;
}

void check_interval(double a, double b) {
    if (!(a <= b)) {
        throw std::invalid_argument("measure_of_interval: need a <= b, got a=" +
                                    std::to_string(a) + " b=" + std::to_string(b));
    }
}

}  // namespace

AtomicMeasure::AtomicMeasure(std::vector<Atom> atoms) {
    for (const auto& a : atoms) {
        if (!std::isfinite(a.position) || !std::isfinite(a.mass) || a.mass < 0.0) {
            throw std::invalid_argument("AtomicMeasure: atoms need finite position and mass >= 0");
        }
    }
    std::stable_sort(atoms.begin(), atoms.end(),
                     [](const Atom& l, const Atom& r) { return l.position < r.position; });
    for (const auto& a : atoms) {
        if (a.mass == 0.0) continue;
        if (!atoms_.empty() && atoms_.back().position == a.position) {
            atoms_.back().mass += a.mass;
        } else {
            atoms_.push_back(a);
        }
    }
}

double AtomicMeasure::total_mass() const {
    double s = 0.0;
    for (const auto& a : atoms_) s += a.mass;
    return s;
}

double AtomicMeasure::mass_in(double a, double b, IntervalClosure closure) const {
    check_interval(a, b);
    double s = 0.0;
    auto it = std::lower_bound(atoms_.begin(), atoms_.end(), a,
                               [](const Atom& at, double v) { return at.position < v; });
    for (; it != atoms_.end() && it->position <= b; ++it) {
        if (contains(it->position, a, b, closure)) s += it->mass;
    }
    return s;
}

AtomicMeasure AtomicMeasure::restricted_above(double z) const {
    AtomicMeasure out;
    for (const auto& a : atoms_) {
        if (a.position > z) out.atoms_.push_back(a);
    }
    return out;
}

GridDensity::GridDensity(double left, double dx, std::vector<double> values)
    : left_(left), dx_(dx), values_(std::move(values)) {
    if (!std::isfinite(left) || !(dx > 0.0) || !std::isfinite(dx)) {
        throw std::invalid_argument("GridDensity: need finite left and dx > 0");
    }
    for (double v : values_) {
        if (!std::isfinite(v) || v < 0.0) {
            throw std::invalid_argument("GridDensity: density values must be finite and >= 0");
        }
    }
}

GridDensity GridDensity::from_function(double left, double right, double dx,
                                       const std::function<double(double)>& f) {
    if (!(right > left) || !(dx > 0.0)) {
        throw std::invalid_argument("GridDensity::from_function: need right > left and dx > 0");
    }
    const double cells = (right - left) / dx;
    const auto n = static_cast<std::size_t>(std::llround(cells));
    if (n == 0 || std::abs(cells - static_cast<double>(n)) > 1e-6) {
        throw std::invalid_argument("GridDensity::from_function: [left, right] must hold a whole number of cells");
    }
    static constexpr std::array<double, 3> nodes{-0.7745966692414834, 0.0, 0.7745966692414834};
    static constexpr std::array<double, 3> weights{5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
    std::vector<double> values(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double mid = left + (static_cast<double>(j) + 0.5) * dx;
        double avg = 0.0;
        for (std::size_t q = 0; q < 3; ++q) avg += weights[q] * f(mid + 0.5 * dx * nodes[q]);
        values[j] = std::max(0.0, 0.5 * avg);
    }
    return GridDensity(left, dx, std::move(values));
}

GridDensity GridDensity::uniform(double left, double right, double dx, double mass) {
    if (mass < 0.0) throw std::invalid_argument("GridDensity::uniform: mass must be >= 0");
    const double value = mass / (right - left);
    return from_function(left, right, dx, [value](double) { return value; });
}

double GridDensity::total_mass() const {
    double s = 0.0;
    for (double v : values_) s += v;
    return s * dx_;
}

double GridDensity::mass_in(double a, double b, IntervalClosure) const {
    check_interval(a, b);
    if (values_.empty()) return 0.0;
    const double lo = std::max(a, left_);
    const double hi = std::min(b, right());
    if (!(hi > lo)) return 0.0;
    const auto n = static_cast<std::ptrdiff_t>(values_.size());
    auto first = static_cast<std::ptrdiff_t>(std::floor((lo - left_) / dx_));
    auto last = static_cast<std::ptrdiff_t>(std::ceil((hi - left_) / dx_));
    first = std::clamp<std::ptrdiff_t>(first, 0, n - 1);
    last = std::clamp<std::ptrdiff_t>(last, first + 1, n);
    double s = 0.0;
    for (std::ptrdiff_t j = first; j < last; ++j) {
        const double cl = cell_left(static_cast<std::size_t>(j));
        const double cr = cell_left(static_cast<std::size_t>(j + 1));
        const double overlap = std::min(hi, cr) - std::max(lo, cl);
        if (overlap > 0.0) s += values_[static_cast<std::size_t>(j)] * std::min(overlap, dx_);
    }
    return s;
}

double GridDensity::sup_density() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, v);
    return m;
}

GridDensity GridDensity::rebinned(double left, double new_dx, std::size_t n) const {
    std::vector<double> out(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        const double a = left + new_dx * static_cast<double>(j);
        const double b = left + new_dx * static_cast<double>(j + 1);
        out[j] = mass_in(a, b) / new_dx;
    }
    return GridDensity(left, new_dx, std::move(out));
}

std::size_t pile_count(double eta) {
    if (!(eta > 0.0)) throw std::invalid_argument("eta must be > 0");
    return static_cast<std::size_t>(std::ceil(1.0 / eta - 1e-9));
}

AtomicMeasure discretize_initial(const GridDensity& x2, double eta) {
    if (!(eta > 0.0) || !std::isfinite(eta)) {
        throw std::invalid_argument("discretize_initial: eta must be > 0");
    }
    const std::size_t n = pile_count(eta);
    const double total = x2.total_mass();
    std::vector<Atom> atoms;
    atoms.reserve(n);
    double covered = 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
        const double hi = static_cast<double>(i) * eta;
        const double lo = static_cast<double>(i - 1) * eta;
        const double m = x2.mass_in(lo, hi);
        covered += m;
        atoms.push_back({hi, m});
    }
    if (std::abs(covered - total) > 1e-12 * std::max(1.0, total)) {
        throw std::invalid_argument("discretize_initial: x2 must be supported in [0, 1]");
    }
    return AtomicMeasure(std::move(atoms));
}

void to_json(nlohmann::json& j, const AtomicMeasure& m) {
    auto arr = nlohmann::json::array();
    for (const auto& a : m.atoms()) arr.push_back({a.position, a.mass});
    j = nlohmann::json{{"atoms", std::move(arr)}};
}

void from_json(const nlohmann::json& j, AtomicMeasure& m) {
    std::vector<Atom> atoms;
    for (const auto& a : j.at("atoms")) atoms.push_back({a.at(0).get<double>(), a.at(1).get<double>()});
    m = AtomicMeasure(std::move(atoms));
}

void to_json(nlohmann::json& j, const GridDensity& m) {
    j = nlohmann::json{{"left", m.left()},
                       {"dx", m.dx()},
                       {"values", std::vector<double>(m.values().begin(), m.values().end())}};
}

void from_json(const nlohmann::json& j, GridDensity& m) {
    m = GridDensity(j.at("left").get<double>(), j.at("dx").get<double>(),
                    j.at("values").get<std::vector<double>>());
}

void to_json(nlohmann::json& j, const HybridMeasure& m) {
    nlohmann::json atoms = m.atoms;
    j = nlohmann::json{{"density", m.density}, {"atoms", atoms.at("atoms")}};
}

void from_json(const nlohmann::json& j, HybridMeasure& m) {
    m.density = j.at("density").get<GridDensity>();
    m.atoms = nlohmann::json{{"atoms", j.at("atoms")}}.get<AtomicMeasure>();
}

}  // namespace frog
