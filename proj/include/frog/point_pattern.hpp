#pragma once

#include <vector>

#include <json.hpp>

namespace frog {

/// A point of a space-indexed pattern: location z and mark r.
struct MarkedPoint {
    double z = 0.0;
    double r = 0.0;

    bool operator==(const MarkedPoint&) const = default;
};

/// Finite marked point pattern, sorted by z. r_min is the truncation level it
/// was sampled at (0 for patterns read off a simulation).
struct PointPattern {
    std::vector<MarkedPoint> points;
    double r_min = 0.0;

    std::size_t size() const { return points.size(); }
    bool empty() const { return points.empty(); }
};

inline void to_json(nlohmann::json& j, const MarkedPoint& p) { j = nlohmann::json::array({p.z, p.r}); }
inline void from_json(const nlohmann::json& j, MarkedPoint& p) {
    p.z = j.at(0).get<double>();
    p.r = j.at(1).get<double>();
}

}  // namespace frog
