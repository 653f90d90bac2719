// Acceptance battery: one PASS/FAIL line per criterion.
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "frog/acceptance.hpp"

int main(int argc, char** argv) {
    CLI::App app{"frog acceptance battery"};
    std::vector<int> ids;
    frog::AcceptanceOptions opts;
    std::string json_out;
    app.add_option("--criterion", ids, "criteria to run (default: all)");
    app.add_option("--seed", opts.seed);
    app.add_option("--threads", opts.threads);
    app.add_option("--json", json_out, "also print the full report as JSON");
    CLI11_PARSE(app, argc, argv);
    if (ids.empty()) ids = frog::criterion_ids();
    bool ok = true;
    for (int id : ids) {
        const frog::CriterionResult r = frog::run_criterion(id, opts);
        std::cout << frog::summary_line(r) << std::endl;
        if (!r.pass || !json_out.empty()) std::cout << nlohmann::json(r).dump(2) << std::endl;
        ok = ok && r.pass;
    }
    return ok ? 0 : 1;
}
