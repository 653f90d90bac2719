#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "frog/acceptance.hpp"
#include "frog/commands.hpp"
#include "frog/frog_sim.hpp"
#include "frog/one_colony.hpp"
#include "frog/space_ppp.hpp"
#include "frog/stat_verify.hpp"

namespace py = pybind11;
using namespace frog;

namespace {

GridDensity density(double left, double right, double dx, double mass) {
    return GridDensity::uniform(left, right, dx, mass);
}

AtomicMeasure atoms(const std::vector<std::pair<double, double>>& xs) {
    std::vector<Atom> a;
    for (const auto& [z, m] : xs) a.push_back({z, m});
    return AtomicMeasure(a);
}

py::dict run_dict(const FrogRun& run) {
    py::list events;
    for (const auto& e : run.events) {
        py::dict d;
        d["t"] = e.time;
        d["site"] = e.site;
        d["jump_size"] = e.jump_size;
        d["v"] = e.v;
        d["index"] = e.index;
        events.append(d);
    }
    py::dict out;
    out["events"] = events;
    out["stall_position"] = run.stall_position;
    out["stalled"] = run.stalled;
    out["all_woke"] = run.all_woke;
    out["end_time"] = run.end_time;
    out["max_conservation_error"] = run.max_conservation_error;
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "frog model simulator core";
    m.attr("__version__") = build_version();

    m.def("sample_W", &sample_W, py::arg("x"), py::arg("u"));
    m.def("wake_threshold_cdf", &wake_threshold_cdf, py::arg("x"), py::arg("r"));
    m.def("wake_threshold",
          [](const std::vector<double>& ws, const std::vector<double>& xs) { return wake_threshold(ws, xs); });
    m.def("compute_ustar",
          [](const std::vector<double>& ws, const std::vector<std::pair<double, double>>& piles, double s) {
              return compute_ustar(ws, atoms(piles), s);
          });
    m.def("survival_mass_analytic", &survival_mass_analytic, py::arg("x0"), py::arg("z"), py::arg("t"));

    m.def("discretize_uniform",
          [](double eta, double mass) {
              std::vector<std::pair<double, double>> out;
              const AtomicMeasure piles = discretize_initial(GridDensity::uniform(0.0, 1.0, 1e-3, mass), eta);
              for (const auto& a : piles.atoms()) {
                  out.emplace_back(a.position, a.mass);
              }
              return out;
          },
          py::arg("eta"), py::arg("mass") = 1.0);

    m.def("simulate",
          [](const std::vector<std::pair<double, double>>& piles, double x1_mass, double x1_left,
             const std::vector<double>& thresholds, std::uint64_t seed, std::uint64_t stream, double dx,
             double horizon) {
              const GridDensity x1 = density(x1_left, 0.0, dx, x1_mass);
              FrogConfig cfg;
              cfg.solver = SolverConfig{dx, 1e-3, 0.5, 1.2};
              cfg.horizon = horizon;
              cfg.right_margin = 0.1;
              cfg.snapshot_count = 0;
              const AtomicMeasure p = atoms(piles);
              py::gil_scoped_release release;
              FrogRun run;
              if (thresholds.empty()) {
                  Rng rng(seed, stream);
                  run = simulate_hazard_driven(x1, p, rng, cfg);
              } else {
                  run = simulate_space_driven(x1, p, thresholds, cfg);
              }
              py::gil_scoped_acquire acquire;
              return run_dict(run);
          },
          py::arg("piles"), py::arg("x1_mass") = 0.5, py::arg("x1_left") = -0.5,
          py::arg("thresholds") = std::vector<double>{}, py::arg("seed") = 1, py::arg("stream") = 0,
          py::arg("dx") = 0.01, py::arg("horizon") = 100.0);

    m.def("sample_J",
          [](double r_min, std::uint64_t seed, std::uint64_t stream) {
              Rng rng(seed, stream);
              std::vector<std::pair<double, double>> out;
              const PointPattern j = sample_J(GridDensity::uniform(0.0, 1.0, 1e-3, 1.0), r_min, rng);
              for (const auto& p : j.points) {
                  out.emplace_back(p.z, p.r);
              }
              return out;
          },
          py::arg("r_min"), py::arg("seed") = 1, py::arg("stream") = 0);

    m.def("ks_one_sample_uniform", [](const std::vector<double>& xs) {
        const TestReport r = ks_one_sample(xs, [](double x) { return std::clamp(x, 0.0, 1.0); });
        return py::make_tuple(r.statistic, r.p_value);
    });

    m.def("criterion_ids", &criterion_ids);
    m.def("criterion_title", &criterion_title);
    m.def("run_criterion",
          [](int id, std::uint64_t seed, unsigned threads) {
              AcceptanceOptions opts;
              opts.seed = seed;
              opts.threads = threads;
              CriterionResult r;
              {
                  py::gil_scoped_release release;
                  r = run_criterion(id, opts);
              }
              return nlohmann::json(r).dump();
          },
          py::arg("id"), py::arg("seed") = 20240611, py::arg("threads") = 0);
}
