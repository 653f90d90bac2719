#include "frog/commands.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <Eigen/Core>
#include <boost/version.hpp>

#include "frog/discrete_mps.hpp"
#include "frog/one_colony.hpp"
#include "frog/parallel.hpp"
#include "frog/stat_verify.hpp"

#ifndef FROG_VERSION
#define FROG_VERSION "unknown"
#endif

namespace fs = std::filesystem;

namespace frog {

namespace {

std::string num(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string eta_label(double eta) { return "eta-" + num(eta); }

}  // namespace

std::string build_version() { return FROG_VERSION; }

void write_text(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

void write_manifest(const fs::path& run_dir, const std::string& subcommand, const RunConfig& cfg,
                    const nlohmann::json& summary, const std::vector<std::string>& outputs) {
    const nlohmann::json config = cfg.to_json();
    nlohmann::json m{
        {"subcommand", subcommand},
        {"seed", cfg.seed},
        {"config", config},
        {"config_hash", fnv1a_hex(config.dump())},
        {"version", build_version()},
        {"libraries",
         {{"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                        std::to_string(EIGEN_MINOR_VERSION)},
          {"boost", BOOST_LIB_VERSION},
          {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                std::to_string(NLOHMANN_JSON_VERSION_PATCH)}}},
        {"outputs", outputs},
        {"summary", summary},
    };
    write_text(run_dir / "manifest.json", m.dump(2) + "\n");
}

FrogSetup make_setup(const RunConfig& cfg, double eta) {
    FrogSetup s;
    s.x1_0 = cfg.x1_0.build(cfg.solver.dx);
    const GridDensity x2 = cfg.x2_0.build(std::min(cfg.solver.dx, eta));
    s.piles = discretize_initial(x2, eta);
    return s;
}

FrogRun run_replica(const RunConfig& cfg, double eta, std::uint64_t stream) {
    const FrogSetup setup = make_setup(cfg, eta);
    Rng rng(cfg.seed, stream);
    FrogConfig fc = cfg.frog_config();
    if (cfg.sampler == "space") {
        const auto w = sample_thresholds(setup.piles, rng);
        return simulate_space_driven(setup.x1_0, setup.piles, w, fc);
    }
    return simulate_hazard_driven(setup.x1_0, setup.piles, rng, fc);
}

std::string events_jsonl(const FrogRun& run) {
    std::string out;
    for (const auto& e : run.events) out += event_line(e) + "\n";
    return out;
}

std::string snapshots_csv(const FrogRun& run) {
    std::ostringstream os;
    os << "time,x,density\n";
    for (const auto& s : run.snapshots) {
        for (std::size_t j = 0; j < s.profile.size(); ++j) {
            const double x = run.profile_left + (static_cast<double>(j) + 0.5) * run.profile_dx;
            os << num(s.time) << ',' << num(x) << ',' << num(s.profile[j]) << '\n';
        }
    }
    return os.str();
}

std::string trajectory_csv(const FrogRun& run) {
    std::ostringstream os;
    os << "time,interface,x1_mass,y,untouched,conservation_error\n";
    for (const auto& s : run.snapshots) {
        os << num(s.time) << ',' << num(s.interface) << ',' << num(s.x1_mass) << ',' << num(s.y) << ','
           << num(s.untouched) << ',' << num(s.conservation_error) << '\n';
    }
    return os.str();
}

nlohmann::json command_simulate(const RunConfig& cfg, const fs::path& run_dir) {
    const FrogSetup setup = make_setup(cfg, cfg.eta);
    const FrogRun run = run_replica(cfg, cfg.eta, 0);
    std::vector<std::string> outputs{"events.jsonl", "trajectory.csv", "l_pattern.jsonl"};
    write_text(run_dir / "events.jsonl", events_jsonl(run));
    write_text(run_dir / "trajectory.csv", trajectory_csv(run));
    std::string pattern;
    for (const auto& p : extract_L(run.events, setup.piles).points) pattern += nlohmann::json(p).dump() + "\n";
    write_text(run_dir / "l_pattern.jsonl", pattern);
    if (cfg.profiles) {
        write_text(run_dir / "snapshots.csv", snapshots_csv(run));
        outputs.push_back("snapshots.csv");
    }
    nlohmann::json summary{{"eta", cfg.eta},
                           {"sampler", cfg.sampler},
                           {"piles", setup.piles.size()},
                           {"events", run.events.size()},
                           {"stall_position", run.stall_position},
                           {"stalled", run.stalled},
                           {"all_woke", run.all_woke},
                           {"end_time", run.end_time},
                           {"max_conservation_error", run.max_conservation_error}};
    write_manifest(run_dir, "simulate", cfg, summary, outputs);
    return summary;
}

nlohmann::json command_sweep(const RunConfig& cfg, const fs::path& run_dir) {
    RunConfig quiet = cfg;
    quiet.profiles = false;
    struct Job {
        std::size_t eta_index;
        std::size_t replica;
    };
    std::vector<Job> jobs;
    for (std::size_t e = 0; e < cfg.etas.size(); ++e) {
        for (std::size_t r = 0; r < cfg.replicas; ++r) jobs.push_back({e, r});
    }
    const auto runs = parallel_map(jobs.size(), cfg.threads, [&](std::size_t k) {
        const Job& job = jobs[k];
        return run_replica(quiet, cfg.etas[job.eta_index], (static_cast<std::uint64_t>(job.eta_index) << 32) | job.replica);
    });
    std::ostringstream agg;
    agg << "eta,replica,events,stall_position,stalled,all_woke,end_time,max_conservation_error\n";
    for (std::size_t k = 0; k < jobs.size(); ++k) {
        const Job& job = jobs[k];
        const FrogRun& run = runs[k];
        const double eta = cfg.etas[job.eta_index];
        const fs::path dir = run_dir / "runs" / eta_label(eta) / ("rep-" + std::to_string(job.replica));
        write_text(dir / "events.jsonl", events_jsonl(run));
        RunConfig one = quiet;
        one.eta = eta;
        one.replicas = 1;
        nlohmann::json summary{{"eta", eta},
                               {"replica", job.replica},
                               {"stream", (static_cast<std::uint64_t>(job.eta_index) << 32) | job.replica},
                               {"events", run.events.size()},
                               {"stall_position", run.stall_position},
                               {"stalled", run.stalled},
                               {"all_woke", run.all_woke}};
        write_manifest(dir, "simulate", one, summary, {"events.jsonl"});
        agg << num(eta) << ',' << job.replica << ',' << run.events.size() << ',' << num(run.stall_position) << ','
            << (run.stalled ? 1 : 0) << ',' << (run.all_woke ? 1 : 0) << ',' << num(run.end_time) << ','
            << num(run.max_conservation_error) << '\n';
    }
    write_text(run_dir / "aggregate.csv", agg.str());
    nlohmann::json summary{{"etas", cfg.etas}, {"replicas", cfg.replicas}, {"runs", jobs.size()}};
    write_manifest(run_dir, "sweep", cfg, summary, {"aggregate.csv", "runs/"});
    return summary;
}

nlohmann::json command_mp0(const RunConfig& cfg, const fs::path& run_dir) {
    const auto& m = cfg.mp0;
    const double x1_0 = m.value("x1_0", 0.0);
    const double x2_0 = m.value("x2_0", 1.0);
    const double c = m.value("c", 0.0);
    const double horizon = m.value("horizon", cfg.horizon);
    const auto points = m.value("trajectory_points", std::size_t{200});
    const auto checkpoints = m.value("checkpoints", std::vector<double>{0.5, 1.0, 2.0, 5.0});
    ImmigrationSchedule theta = ImmigrationSchedule::constant_rate(1.0);
    if (m.contains("theta")) {
        theta = ImmigrationSchedule(m.at("theta").at("breaks").get<std::vector<double>>(),
                                    m.at("theta").at("rates").get<std::vector<double>>());
    }
    for (double t : checkpoints) {
        if (t < 0.0 || t > horizon) throw std::invalid_argument("mp0.checkpoints must lie in [0, horizon]");
    }
    auto path_for = [&](std::size_t replica) {
        Rng rng(cfg.seed, replica);
        const double w = m.contains("w") ? m.at("w").get<double>()
                                         : (x2_0 > 0.0 ? sample_W(x2_0, rng.uniform()) : 1.0);
        return solve_mp2(x1_0, x2_0, theta, c, w, horizon);
    };
    const ColonyPath first = path_for(0);
    std::ostringstream traj;
    traj << "time,x1,x2\n";
    for (const auto& s : first.trajectory(points)) traj << num(s.time) << ',' << num(s.x1) << ',' << num(s.x2) << '\n';
    write_text(run_dir / "trajectory.csv", traj.str());
    std::vector<std::string> outputs{"trajectory.csv"};
    nlohmann::json summary{{"tau", first.tau()}, {"replicas", cfg.replicas}};
    if (cfg.replicas >= 2) {
        const auto rows = parallel_map(cfg.replicas, cfg.threads, [&](std::size_t r) {
            std::vector<double> row;
            for (const auto& s : path_for(r).sample(checkpoints)) row.push_back(s.x2);
            return row;
        });
        const auto reports = martingale_drift(rows, x2_0, 3.0, "mp0_x2_martingale");
        bool pass = true;
        for (const auto& r : reports) pass = pass && r.pass;
        write_text(run_dir / "reports" / "martingale.json", nlohmann::json(reports).dump(2) + "\n");
        outputs.push_back("reports/martingale.json");
        summary["martingale_pass"] = pass;
    }
    write_manifest(run_dir, "mp0", cfg, summary, outputs);
    return summary;
}

nlohmann::json command_mps(const RunConfig& cfg, const fs::path& run_dir) {
    const auto& m = cfg.mps;
    SiteSystem sys;
    if (m.contains("q")) {
        sys = m.at("q").get<SiteSystem>();
    } else {
        const auto nn = m.value("nearest_neighbor", nlohmann::json{{"first", -1}, {"last", 1}, {"rate", 1.0}});
        sys = SiteSystem::nearest_neighbor(nn.at("first").get<long>(), nn.at("last").get<long>(),
                                           nn.at("rate").get<double>());
    }
    const auto n = static_cast<Eigen::Index>(sys.size());
    auto vec = [&](const char* key, std::vector<double> fallback) {
        auto v = m.value(key, fallback);
        if (static_cast<Eigen::Index>(v.size()) != n) {
            throw std::invalid_argument(std::string("mps.") + key + " must have one entry per site");
        }
        return Eigen::VectorXd(Eigen::Map<Eigen::VectorXd>(v.data(), n));
    };
    std::vector<double> d1(static_cast<std::size_t>(n), 0.0);
    std::vector<double> d2(static_cast<std::size_t>(n), 0.0);
    if (n > 0) d1[0] = 1.0;
    if (n > 0) d2[static_cast<std::size_t>(n - 1)] = 1.0;
    MPSState init;
    init.x1 = vec("x1", d1);
    init.x2 = vec("x2", d2);
    const double horizon = m.value("horizon", cfg.horizon);
    const auto checkpoints = m.value("checkpoints", std::vector<double>{0.5, 1.0, 2.0, 5.0});
    const auto runs = parallel_map(cfg.replicas, cfg.threads, [&](std::size_t r) {
        Rng rng(cfg.seed, r);
        return simulate_mps(sys, init, horizon, rng, checkpoints);
    });
    std::string events;
    for (const auto& e : runs[0].events) events += event_line(e) + "\n";
    write_text(run_dir / "events.jsonl", events);
    std::ostringstream traj;
    traj << "time,site,x1,x2\n";
    for (const auto& s : runs[0].checkpoints) {
        for (Eigen::Index k = 0; k < n; ++k) {
            traj << num(s.time) << ',' << sys.labels[static_cast<std::size_t>(k)] << ',' << num(s.x1[k]) << ','
                 << num(s.x2[k]) << '\n';
        }
    }
    write_text(run_dir / "trajectory.csv", traj.str());
    std::size_t jumps = 0;
    std::size_t leftmost = 0;
    double drift = 0.0;
    for (const auto& r : runs) {
        for (const auto& e : r.events) {
            ++jumps;
            leftmost += e.at_leftmost ? 1 : 0;
        }
        drift = std::max(drift, r.max_mass_drift);
    }
    std::vector<std::string> outputs{"events.jsonl", "trajectory.csv"};
    nlohmann::json summary{{"replicas", cfg.replicas},
                           {"jumps", jumps},
                           {"jumps_at_leftmost", leftmost},
                           {"max_mass_drift", drift}};
    if (cfg.replicas >= 2) {
        nlohmann::json reports = nlohmann::json::array();
        bool pass = true;
        for (Eigen::Index k = 0; k < n; ++k) {
            std::vector<std::vector<double>> rows;
            for (const auto& r : runs) {
                std::vector<double> row;
                for (const auto& s : r.checkpoints) row.push_back(s.x2[k]);
                rows.push_back(row);
            }
            for (const auto& rep : martingale_drift(rows, init.x2[k], 3.0,
                                                    "x2_site_" + std::to_string(sys.labels[static_cast<std::size_t>(k)]))) {
                pass = pass && rep.pass;
                reports.push_back(rep);
            }
        }
        write_text(run_dir / "reports" / "martingale.json", reports.dump(2) + "\n");
        outputs.push_back("reports/martingale.json");
        summary["martingale_pass"] = pass;
    }
    write_manifest(run_dir, "mps", cfg, summary, outputs);
    return summary;
}

nlohmann::json command_ppp(const RunConfig& cfg, const fs::path& run_dir) {
    const GridDensity f = cfg.x2_0.build(cfg.solver.dx);
    Rng rng(cfg.seed, 0);
    const PointPattern j = sample_J(f, cfg.r_min, rng);
    std::string pattern;
    for (const auto& p : j.points) pattern += nlohmann::json(p).dump() + "\n";
    write_text(run_dir / "pattern.jsonl", pattern);
    std::ostringstream w;
    w << "eta,i,site,w,censored\n";
    for (double eta : cfg.etas) {
        const auto b = build_W_from_J(j, f, eta);
        for (std::size_t i = 0; i < b.values.size(); ++i) {
            w << num(eta) << ',' << i + 1 << ',' << num(static_cast<double>(i + 1) * eta) << ',' << num(b.values[i])
              << ',' << (b.censored[i] ? 1 : 0) << '\n';
        }
    }
    write_text(run_dir / "thresholds.csv", w.str());
    const auto report = coupling_convergence_report(j, f, cfg.etas, cfg.rectangles);
    std::ostringstream cc;
    cc << "eta,rectangle,x1,x2,s,r_max,count_j,count_eta\n";
    for (const auto& row : report.rows) {
        const auto& c = cfg.rectangles[row.rectangle];
        cc << num(row.eta) << ',' << row.rectangle << ',' << num(c.x1) << ',' << num(c.x2) << ',' << num(c.s) << ','
           << num(c.r_max) << ',' << row.count_j << ',' << row.count_eta << '\n';
    }
    write_text(run_dir / "coupling.csv", cc.str());
    const double s = cfg.x1_0.mass;
    nlohmann::json summary{{"points", j.size()}, {"r_min", j.r_min}, {"coupling_all_equal", report.all_equal()}};
    if (s > cfg.r_min) summary["ustar"] = ustar_from_J(j, s, f);
    write_manifest(run_dir, "ppp", cfg, summary, {"pattern.jsonl", "thresholds.csv", "coupling.csv"});
    return summary;
}

}  // namespace frog
