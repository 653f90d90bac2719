#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "frog/frog_sim.hpp"
#include "frog/measures.hpp"
#include "frog/space_ppp.hpp"

namespace frog {

/// Invalid configuration; `line` is 1-based, 0 when no line is known.
class ConfigError : public std::invalid_argument {
  public:
    ConfigError(const std::string& what, std::size_t line)
        : std::invalid_argument(line > 0 ? "config line " + std::to_string(line) + ": " + what : what),
          line_(line) {}
    std::size_t line() const { return line_; }

  private:
    std::size_t line_;
};

/// Named density spec: "uniform" (left/right/mass), "triangular" (2x on
/// [0,1], scaled by mass) or "custom-grid" (left/dx/values).
struct DensitySpec {
    std::string kind = "uniform";
    double left = 0.0;
    double right = 1.0;
    double mass = 1.0;
    GridDensity grid;

    GridDensity build(double dx) const;
    /// Supremum of the density.
    double sup() const;
};

struct RunConfig {
    // model
    DensitySpec x1_0{"uniform", -0.5, 0.0, 0.5, {}};
    DensitySpec x2_0{"uniform", 0.0, 1.0, 1.0, {}};
    double eta = 0.05;
    std::vector<double> etas{0.1, 0.05, 0.02};
    double horizon = 10.0;
    std::string sampler = "hazard";  ///< "hazard" or "space"
    // solver
    SolverConfig solver{0.001, 1e-4, 0.05, 1.05, "implicit-euler"};
    double domain_left = std::numeric_limits<double>::quiet_NaN();
    double right_margin = 0.5;
    // sampling
    std::uint64_t seed = 1;
    std::size_t replicas = 1;
    unsigned threads = 0;
    double r_min = 1e-4;
    std::vector<Rectangle> rectangles{{0.2, 0.6, 0.05}, {0.5, 1.0, 0.1}};
    // output
    std::string out_dir = "out";
    std::string run_id;
    std::size_t snapshot_count = 64;
    bool profiles = true;
    // subcommand sections, kept raw
    nlohmann::json mp0 = nlohmann::json::object();
    nlohmann::json mps = nlohmann::json::object();

    /// Checks the standing assumptions (dx divides eta, horizon > 0, ...).
    void validate() const;
    FrogConfig frog_config() const;
    nlohmann::json to_json() const;
};

/// Parses the JSON config text; errors carry the line of the offending key.
RunConfig parse_run_config(const std::string& text);
RunConfig load_run_config(const std::string& path);

/// 64-bit FNV-1a of the string, as 16 hex digits.
std::string fnv1a_hex(const std::string& s);

/// "x1,x2,s" or "x1,x2,s,r_max".
Rectangle parse_rectangle(const std::string& text);
std::vector<double> parse_list(const std::string& text);

}  // namespace frog
