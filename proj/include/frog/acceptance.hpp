#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "frog/stat_verify.hpp"

namespace frog {

struct AcceptanceOptions {
    std::uint64_t seed = 20240611;
    unsigned threads = 0;
    /// Where the determinism check writes its runs; empty means a temp dir.
    std::filesystem::path scratch_dir;
};

struct CriterionResult {
    int id = 0;
    std::string title;
    bool pass = false;
    std::vector<TestReport> reports;
    nlohmann::json detail = nlohmann::json::object();
    double seconds = 0.0;
};

void to_json(nlohmann::json& j, const CriterionResult& r);

/// Ids of the acceptance battery, 1..13.
std::vector<int> criterion_ids();
std::string criterion_title(int id);

/// Runs one criterion at full scale. Throws std::invalid_argument on an unknown id.
CriterionResult run_criterion(int id, const AcceptanceOptions& opts);

/// "PASS  C07  <title>  <short detail>"
std::string summary_line(const CriterionResult& r);

}  // namespace frog
