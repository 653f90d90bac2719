#include "frog/run_config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace frog {

namespace {

std::size_t line_at_offset(const std::string& text, std::size_t offset) {
    offset = std::min(offset, text.size());
    return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

std::size_t line_of_key(const std::string& text, const std::string& key) {
    const auto pos = text.find("\"" + key + "\"");
    return pos == std::string::npos ? 0 : line_at_offset(text, pos);
}

bool divides(double dx, double length) {
    const double q = length / dx;
    return std::abs(q - std::round(q)) <= 1e-6 * std::max(1.0, std::abs(q));
}

DensitySpec parse_density(const nlohmann::json& j) {
    DensitySpec d;
    d.kind = j.value("kind", std::string("uniform"));
    if (d.kind == "uniform") {
        d.left = j.value("left", 0.0);
        d.right = j.value("right", 1.0);
        d.mass = j.value("mass", 1.0);
    } else if (d.kind == "triangular") {
        d.left = 0.0;
        d.right = 1.0;
        d.mass = j.value("mass", 1.0);
    } else if (d.kind == "custom-grid") {
        d.grid = j.get<GridDensity>();
        d.left = d.grid.left();
        d.right = d.grid.right();
        d.mass = d.grid.total_mass();
    } else {
        throw std::invalid_argument("unknown density kind \"" + d.kind +
                                    "\" (expected uniform, triangular or custom-grid)");
    }
    return d;
}

nlohmann::json density_json(const DensitySpec& d) {
    if (d.kind == "custom-grid") {
        nlohmann::json j = d.grid;
        j["kind"] = d.kind;
        return j;
    }
    if (d.kind == "triangular") return {{"kind", d.kind}, {"mass", d.mass}};
    return {{"kind", d.kind}, {"left", d.left}, {"right", d.right}, {"mass", d.mass}};
}

}  // namespace

GridDensity DensitySpec::build(double dx) const {
    if (kind == "uniform") return GridDensity::uniform(left, right, dx, mass);
    if (kind == "triangular") {
        const double m = mass;
        return GridDensity::from_function(0.0, 1.0, dx, [m](double x) { return 2.0 * m * x; });
    }
    return grid;
}

double DensitySpec::sup() const {
    if (kind == "uniform") return mass / (right - left);
    if (kind == "triangular") return 2.0 * mass;
    return grid.sup_density();
}

void RunConfig::validate() const {
    solver.validate();
    if (!(horizon > 0.0)) throw std::invalid_argument("model.horizon must be > 0");
    if (replicas < 1) throw std::invalid_argument("sampling.replicas must be >= 1");
    if (!(r_min > 0.0)) throw std::invalid_argument("sampling.r_min must be > 0");
    if (sampler != "hazard" && sampler != "space") {
        throw std::invalid_argument("model.sampler must be \"hazard\" or \"space\"");
    }
    if (x2_0.left < 0.0 || x2_0.right > 1.0 + 1e-12) {
        throw std::invalid_argument("model.x2_0 must be supported in [0, 1]");
    }
    if (x1_0.right > 1e-12) throw std::invalid_argument("model.x1_0 must be supported in (-inf, 0]");
    if (!(x1_0.right > x1_0.left) || !(x2_0.right > x2_0.left)) {
        throw std::invalid_argument("model densities need left < right");
    }
    auto check_eta = [&](double e, const char* key) {
        if (!(e > 0.0) || e > 1.0) throw std::invalid_argument(std::string(key) + " must lie in (0, 1]");
        if (!divides(solver.dx, e)) {
            throw std::invalid_argument(std::string(key) + " = " + std::to_string(e) +
                                        " is not a multiple of solver.dx = " + std::to_string(solver.dx));
        }
    };
    check_eta(eta, "model.eta");
    for (double e : etas) check_eta(e, "model.etas");
    const double left = std::isnan(domain_left) ? x1_0.left : domain_left;
    if (!divides(solver.dx, left)) throw std::invalid_argument("solver.domain_left must be a multiple of solver.dx");
    if (left > x1_0.left + 1e-12) throw std::invalid_argument("solver.domain_left must not cut off model.x1_0");
    if (x1_0.kind != "custom-grid" && !divides(solver.dx, x1_0.left)) {
        throw std::invalid_argument("model.x1_0.left must be a multiple of solver.dx");
    }
    for (const auto& c : rectangles) {
        if (!(c.x2 > c.x1) || !(c.s > 0.0) || !(c.r_max > c.s)) {
            throw std::invalid_argument("sampling.rectangles need x1 < x2 and 0 < s < r_max");
        }
    }
}

FrogConfig RunConfig::frog_config() const {
    FrogConfig f;
    f.solver = solver;
    f.horizon = horizon;
    f.domain_left = domain_left;
    f.right_margin = right_margin;
    f.snapshot_count = snapshot_count;
    f.store_profiles = profiles;
    return f;
}

nlohmann::json RunConfig::to_json() const {
    nlohmann::json rects = nlohmann::json::array();
    for (const auto& c : rectangles) {
        nlohmann::json r{{"x1", c.x1}, {"x2", c.x2}, {"s", c.s}};
        if (std::isfinite(c.r_max)) r["r_max"] = c.r_max;
        rects.push_back(r);
    }
    nlohmann::json solver_j{{"dx", solver.dx},       {"dt", solver.dt},         {"dt_max", solver.dt_max},
                            {"dt_growth", solver.dt_growth}, {"scheme", solver.scheme},
                            {"right_margin", right_margin}};
    if (!std::isnan(domain_left)) solver_j["domain_left"] = domain_left;
    return {
        {"model",
         {{"x1_0", density_json(x1_0)},
          {"x2_0", density_json(x2_0)},
          {"eta", eta},
          {"etas", etas},
          {"horizon", horizon},
          {"sampler", sampler}}},
        {"solver", solver_j},
        {"sampling",
         {{"seed", seed}, {"replicas", replicas}, {"threads", threads}, {"r_min", r_min}, {"rectangles", rects}}},
        {"output", {{"out_dir", out_dir}, {"run_id", run_id}, {"snapshot_count", snapshot_count}, {"profiles", profiles}}},
        {"mp0", mp0},
        {"mps", mps},
    };
}

RunConfig parse_run_config(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text, nullptr, true, /*ignore_comments=*/true);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(e.what(), line_at_offset(text, e.byte > 0 ? e.byte - 1 : 0));
    }
    if (!j.is_object()) throw ConfigError("top level must be a JSON object", 1);
    RunConfig c;
    std::string key;  // last key read, for line anchoring
    auto anchor = [&](const std::string& k) { key = k; };
    try {
        for (const auto& [section, body] : j.items()) {
            static const std::vector<std::string> known{"model", "solver", "sampling", "output", "mp0", "mps"};
            if (std::find(known.begin(), known.end(), section) == known.end()) {
                anchor(section);
                throw std::invalid_argument("unknown section \"" + section + "\"");
            }
        }
        if (j.contains("model")) {
            const auto& m = j.at("model");
            if (m.contains("x1_0")) { anchor("x1_0"); c.x1_0 = parse_density(m.at("x1_0")); }
            if (m.contains("x2_0")) { anchor("x2_0"); c.x2_0 = parse_density(m.at("x2_0")); }
            if (m.contains("eta")) { anchor("eta"); c.eta = m.at("eta").get<double>(); }
            if (m.contains("etas")) { anchor("etas"); c.etas = m.at("etas").get<std::vector<double>>(); }
            if (m.contains("horizon")) { anchor("horizon"); c.horizon = m.at("horizon").get<double>(); }
            if (m.contains("sampler")) { anchor("sampler"); c.sampler = m.at("sampler").get<std::string>(); }
        }
        if (j.contains("solver")) {
            const auto& s = j.at("solver");
            if (s.contains("dx")) { anchor("dx"); c.solver.dx = s.at("dx").get<double>(); }
            if (s.contains("dt")) { anchor("dt"); c.solver.dt = s.at("dt").get<double>(); }
            if (s.contains("dt_max")) { anchor("dt_max"); c.solver.dt_max = s.at("dt_max").get<double>(); }
            if (s.contains("dt_growth")) { anchor("dt_growth"); c.solver.dt_growth = s.at("dt_growth").get<double>(); }
            if (s.contains("scheme")) { anchor("scheme"); c.solver.scheme = s.at("scheme").get<std::string>(); }
            if (s.contains("domain_left")) { anchor("domain_left"); c.domain_left = s.at("domain_left").get<double>(); }
            if (s.contains("right_margin")) { anchor("right_margin"); c.right_margin = s.at("right_margin").get<double>(); }
        }
        if (j.contains("sampling")) {
            const auto& s = j.at("sampling");
            if (s.contains("seed")) { anchor("seed"); c.seed = s.at("seed").get<std::uint64_t>(); }
            if (s.contains("replicas")) { anchor("replicas"); c.replicas = s.at("replicas").get<std::size_t>(); }
            if (s.contains("threads")) { anchor("threads"); c.threads = s.at("threads").get<unsigned>(); }
            if (s.contains("r_min")) { anchor("r_min"); c.r_min = s.at("r_min").get<double>(); }
            if (s.contains("rectangles")) {
                anchor("rectangles");
                c.rectangles.clear();
                for (const auto& r : s.at("rectangles")) {
                    Rectangle rect{r.at("x1").get<double>(), r.at("x2").get<double>(), r.at("s").get<double>()};
                    if (r.contains("r_max")) rect.r_max = r.at("r_max").get<double>();
                    c.rectangles.push_back(rect);
                }
            }
        }
        if (j.contains("output")) {
            const auto& o = j.at("output");
            if (o.contains("out_dir")) { anchor("out_dir"); c.out_dir = o.at("out_dir").get<std::string>(); }
            if (o.contains("run_id")) { anchor("run_id"); c.run_id = o.at("run_id").get<std::string>(); }
            if (o.contains("snapshot_count")) { anchor("snapshot_count"); c.snapshot_count = o.at("snapshot_count").get<std::size_t>(); }
            if (o.contains("profiles")) { anchor("profiles"); c.profiles = o.at("profiles").get<bool>(); }
        }
        if (j.contains("mp0")) c.mp0 = j.at("mp0");
        if (j.contains("mps")) c.mps = j.at("mps");
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(e.what(), key.empty() ? 0 : line_of_key(text, key));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what(), key.empty() ? 0 : line_of_key(text, key));
    }
    try {
        c.validate();
    } catch (const std::invalid_argument& e) {
        // "section.key ..." messages point at the key's line
        const std::string msg = e.what();
        std::string k;
        const auto dot = msg.find('.');
        if (dot != std::string::npos) {
            const auto end = msg.find_first_of(" =", dot);
            k = msg.substr(dot + 1, end == std::string::npos ? std::string::npos : end - dot - 1);
            const auto dot2 = k.find('.');
            if (dot2 != std::string::npos) k = k.substr(dot2 + 1);
        }
        throw ConfigError(msg, k.empty() ? 0 : line_of_key(text, k));
    }
    return c;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path, 0);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_run_config(ss.str());
}

std::string fnv1a_hex(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != item.size()) throw std::invalid_argument("not a number: \"" + item + "\"");
        out.push_back(v);
    }
    return out;
}

Rectangle parse_rectangle(const std::string& text) {
    const auto v = parse_list(text);
    if (v.size() != 3 && v.size() != 4) {
        throw std::invalid_argument("rectangle must be \"x1,x2,s\" or \"x1,x2,s,r_max\", got \"" + text + "\"");
    }
    Rectangle r{v[0], v[1], v[2]};
    if (v.size() == 4) r.r_max = v[3];
    return r;
}

}  // namespace frog
