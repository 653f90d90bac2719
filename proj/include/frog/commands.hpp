#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "frog/frog_sim.hpp"
#include "frog/run_config.hpp"

namespace frog {

/// Initial condition of a frog run: wake density and the eta-discretized piles.
struct FrogSetup {
    GridDensity x1_0;
    AtomicMeasure piles;
};
FrogSetup make_setup(const RunConfig& cfg, double eta);

/// One replica of the configured sampler. The random stream is
/// (cfg.seed, stream), so the result does not depend on scheduling.
FrogRun run_replica(const RunConfig& cfg, double eta, std::uint64_t stream);

std::string events_jsonl(const FrogRun& run);
/// time,x,density at cell centres for every stored profile.
std::string snapshots_csv(const FrogRun& run);
/// time,interface,x1_mass,y,untouched,conservation_error
std::string trajectory_csv(const FrogRun& run);

/// Subcommands. Each writes its outputs and manifest.json into run_dir and
/// returns a JSON summary.
nlohmann::json command_mp0(const RunConfig& cfg, const std::filesystem::path& run_dir);
nlohmann::json command_mps(const RunConfig& cfg, const std::filesystem::path& run_dir);
nlohmann::json command_simulate(const RunConfig& cfg, const std::filesystem::path& run_dir);
nlohmann::json command_sweep(const RunConfig& cfg, const std::filesystem::path& run_dir);
nlohmann::json command_ppp(const RunConfig& cfg, const std::filesystem::path& run_dir);

void write_text(const std::filesystem::path& path, const std::string& text);
void write_manifest(const std::filesystem::path& run_dir, const std::string& subcommand,
                    const RunConfig& cfg, const nlohmann::json& summary,
                    const std::vector<std::string>& outputs);

/// Version string captured at configure time (git describe).
std::string build_version();

}  // namespace frog
