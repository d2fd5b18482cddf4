// Copyright 2026 the smecorr authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "smecorr/analytic.hpp"
#include "smecorr/errors.hpp"
#include "smecorr/estimator.hpp"
#include "smecorr/model.hpp"
#include "smecorr/trajectories.hpp"

using nlohmann::json;
using namespace smecorr;

namespace {

[[noreturn]] void fail_usage(const std::string& msg) { throw Error("cli", msg); }

double parse_double(const std::string& s, const std::string& what) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        fail_usage("cannot parse " + what + " from '" + s + "'");
    }
}

// det@time
SharpPoint parse_sharp(const std::string& s) {
    const auto at = s.rfind('@');
    if (at == std::string::npos || at == 0) fail_usage("sharp leg must look like det@time: " + s);
    return {s.substr(0, at), parse_double(s.substr(at + 1), "sharp time")};
}

// det:start,end
WindowFilter parse_window(const std::string& s) {
    const auto colon = s.find(':');
    const auto comma = s.find(',', colon == std::string::npos ? 0 : colon);
    if (colon == std::string::npos || comma == std::string::npos || colon == 0)
        fail_usage("window must look like det:start,end: " + s);
    const std::string det = s.substr(0, colon);
    const double a = parse_double(s.substr(colon + 1, comma - colon - 1), "window start");
    const double b = parse_double(s.substr(comma + 1), "window end");
    return WindowFilter::rect(det, a, b);
}

// w1;w2;... (windows of one request)
std::vector<WindowFilter> parse_request(const std::string& s) {
    std::vector<WindowFilter> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        const auto semi = s.find(';', start);
        const std::string part =
            s.substr(start, semi == std::string::npos ? std::string::npos : semi - start);
        if (!part.empty()) out.push_back(parse_window(part));
        if (semi == std::string::npos) break;
        start = semi + 1;
    }
    if (out.empty()) fail_usage("request has no windows: '" + s + "'");
    return out;
}

TimeGrid parse_grid(const std::string& s) {
    const auto comma = s.find(',');
    if (comma == std::string::npos) fail_usage("grid must look like dt,T: " + s);
    const double dt = parse_double(s.substr(0, comma), "grid dt");
    const double horizon = parse_double(s.substr(comma + 1), "grid horizon");
    if (!(dt > 0.0) || !(horizon > 0.0)) fail_usage("grid requires dt > 0 and T > 0");
    const long n = std::lround(horizon / dt);
    if (n < 1) fail_usage("grid horizon shorter than one step");
    return {0.0, dt, static_cast<std::size_t>(n)};
}

int workers_fallback(int workers) {
    if (workers > 0) return workers;
    if (const char* env = std::getenv("SME_CORRELATE_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    return 0;  // auto
}

std::ofstream open_out(const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cli", "cannot open output file '" + path + "'");
    return f;
}

// --config FILE loads defaults before the real parse, so explicit flags win
json preload_config(int argc, char** argv) {
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::string(argv[i]) == "--config") {
            std::ifstream f(argv[i + 1]);
            if (!f) throw Error("cli", std::string("cannot open config file ") + argv[i + 1]);
            json j;
            try {
                f >> j;
            } catch (const std::exception& e) {
                throw Error("cli", std::string("config is not valid JSON: ") + e.what());
            }
            return j;
        }
    }
    return json::object();
}

template <typename T>
void from_config(const json& cfg, const char* key, T& value) {
    if (cfg.contains(key)) value = cfg[key].get<T>();
}

struct CorrelateConfig {
    std::string model_path;
    std::vector<std::string> sharp;
    std::vector<std::string> window;
    double horizon = 0.0;  // 0 = last window end
    bool quadrature = false;
    double quad_tol = 1e-8;
    double krylov_tol = 1e-10;
    std::string out = "-";

    json to_json() const {
        return json{{"model", model_path},      {"sharp", sharp},
                    {"window", window},         {"horizon", horizon},
                    {"quadrature", quadrature}, {"quad_tol", quad_tol},
                    {"krylov_tol", krylov_tol}, {"out", out}};
    }
    void load(const json& j) {
        from_config(j, "model", model_path);
        from_config(j, "sharp", sharp);
        from_config(j, "window", window);
        from_config(j, "horizon", horizon);
        from_config(j, "quadrature", quadrature);
        from_config(j, "quad_tol", quad_tol);
        from_config(j, "krylov_tol", krylov_tol);
        from_config(j, "out", out);
    }
};

struct SimulateConfig {
    std::string model_path;
    std::string grid;
    std::uint64_t seed = 0;
    std::size_t n_traj = 1;
    std::string scheme = "kraus";
    std::string out = "records";
    double bin_dt = 0.0;

    json to_json() const {
        return json{{"model", model_path}, {"grid", grid},     {"seed", seed},
                    {"n_traj", n_traj},    {"scheme", scheme}, {"out", out},
                    {"bin_dt", bin_dt}};
    }
    void load(const json& j) {
        from_config(j, "model", model_path);
        from_config(j, "grid", grid);
        from_config(j, "seed", seed);
        from_config(j, "n_traj", n_traj);
        from_config(j, "scheme", scheme);
        from_config(j, "out", out);
        from_config(j, "bin_dt", bin_dt);
    }
};

struct CompareConfig {
    std::string model_path;
    std::string grid;
    std::uint64_t seed = 0;
    std::size_t n_traj = 10000;
    std::string scheme = "kraus";
    std::vector<std::string> requests;
    double z_threshold = 5.0;
    int workers = 0;
    std::string out = "-";
    double corrupt_eta = 1.0;

    json to_json() const {
        return json{{"model", model_path},        {"grid", grid},
                    {"seed", seed},               {"n_traj", n_traj},
                    {"scheme", scheme},           {"request", requests},
                    {"z_threshold", z_threshold}, {"workers", workers},
                    {"out", out},                 {"corrupt_eta", corrupt_eta}};
    }
    void load(const json& j) {
        from_config(j, "model", model_path);
        from_config(j, "grid", grid);
        from_config(j, "seed", seed);
        from_config(j, "n_traj", n_traj);
        from_config(j, "scheme", scheme);
        from_config(j, "request", requests);
        from_config(j, "z_threshold", z_threshold);
        from_config(j, "workers", workers);
        from_config(j, "out", out);
        from_config(j, "corrupt_eta", corrupt_eta);
    }
};

int run_correlate(const CorrelateConfig& cfg) {
    if (cfg.model_path.empty()) fail_usage("--model is required");
    if (cfg.sharp.empty() == cfg.window.empty())
        fail_usage("give either --sharp legs or --window legs (not both, not neither)");
    const LoadedModel lm = load_model_file(cfg.model_path);

    AnalyticOptions opts;
    opts.krylov.tol = cfg.krylov_tol;
    opts.quad_tol = cfg.quad_tol;

    CorrelationResult result;
    std::string id;
    if (!cfg.sharp.empty()) {
        std::vector<SharpPoint> pts;
        for (const std::string& s : cfg.sharp) {
            pts.push_back(parse_sharp(s));
            id += (id.empty() ? "" : ";") + s;
        }
        result = sharp_correlation(lm.model, lm.rho0, pts, opts);
    } else {
        std::vector<WindowFilter> ws;
        double t_end = 0.0;
        for (const std::string& s : cfg.window) {
            ws.push_back(parse_window(s));
            t_end = std::max(t_end, ws.back().support_end());
            id += (id.empty() ? "" : ";") + s;
        }
        const double horizon = cfg.horizon > 0.0 ? cfg.horizon : t_end;
        result = cfg.quadrature
                     ? quadrature_correlation(lm.model, lm.rho0, ws, cfg.quad_tol, opts)
                     : filtered_correlation(lm.model, lm.rho0, ws, horizon, opts);
    }

    char row[512];
    std::snprintf(row, sizeof row, "\"%s\",%s,%.15g,%d,%zu,%g\n", id.c_str(),
                  to_string(result.method).c_str(), result.value, result.order,
                  result.segments_or_steps, result.tolerance);
    const std::string header = "request,method,value,order,work,tolerance\n";
    if (cfg.out == "-") {
        std::cout << header << row;
    } else {
        auto f = open_out(cfg.out);
        f << header << row;
    }
    std::fprintf(stderr, "correlate: %s = %.12g (%s)\n", id.c_str(), result.value,
                 to_string(result.method).c_str());
    return 0;
}

int run_simulate(const SimulateConfig& cfg) {
    if (cfg.model_path.empty()) fail_usage("--model is required");
    if (cfg.grid.empty()) fail_usage("--grid dt,T is required");
    if (cfg.n_traj < 1) fail_usage("--n-traj must be >= 1");
    const LoadedModel lm = load_model_file(cfg.model_path);
    const TimeGrid grid = parse_grid(cfg.grid);

    SimulateOptions opts;
    opts.scheme = scheme_from_string(cfg.scheme);

    std::filesystem::create_directories(cfg.out);
    bool warned = false;
    for (std::size_t i = 0; i < cfg.n_traj; ++i) {
        const Trajectory traj = simulate(lm.model, lm.rho0, grid, cfg.seed, i, opts);
        char name[64];
        std::snprintf(name, sizeof name, "record_%05zu.csv", i);
        {
            auto f = open_out((std::filesystem::path(cfg.out) / name).string());
            write_record_csv(f, traj.record);
        }
        if (!traj.warnings.empty() && !warned) {
            std::fprintf(stderr, "simulate: warning: %s\n", traj.warnings[0].c_str());
            warned = true;
        }
        if (cfg.bin_dt > 0.0) {
            const BinnedRecord binned = bin_record(traj.record, cfg.bin_dt);
            std::snprintf(name, sizeof name, "record_%05zu_binned.csv", i);
            auto fb = open_out((std::filesystem::path(cfg.out) / name).string());
            fb << "bin,time,detector_label,value\n";
            char buf[64];
            for (std::size_t b = 0; b < binned.bins[0].size(); ++b)
                for (std::size_t d = 0; d < binned.labels.size(); ++d) {
                    std::snprintf(buf, sizeof buf, "%.17g", b * binned.bin_dt);
                    fb << b << ',' << buf << ',' << binned.labels[d] << ',';
                    std::snprintf(buf, sizeof buf, "%.17g", binned.bins[d][b]);
                    fb << buf << '\n';
                }
        }
    }
    std::fprintf(stderr, "simulate: wrote %zu record file(s) to %s (seed %llu, scheme %s)\n",
                 cfg.n_traj, cfg.out.c_str(), static_cast<unsigned long long>(cfg.seed),
                 cfg.scheme.c_str());
    return 0;
}

int run_compare(const CompareConfig& cfg) {
    if (cfg.model_path.empty()) fail_usage("--model is required");
    if (cfg.grid.empty()) fail_usage("--grid dt,T is required");
    if (cfg.requests.empty()) fail_usage("at least one --request is required");
    if (cfg.n_traj < 2) fail_usage("--n-traj must be >= 2");
    const LoadedModel lm = load_model_file(cfg.model_path);

    EnsembleSpec spec{lm.model,
                      lm.rho0,
                      parse_grid(cfg.grid),
                      cfg.n_traj,
                      cfg.seed,
                      scheme_from_string(cfg.scheme),
                      workers_fallback(cfg.workers)};
    std::vector<ComparisonRequest> reqs;
    for (const std::string& r : cfg.requests) reqs.push_back({r, parse_request(r)});

    ComparisonOptions opts;
    opts.z_threshold = cfg.z_threshold;
    opts.analytic.eta_scale = cfg.corrupt_eta;

    const ComparisonReport report = run_comparison(spec, reqs, opts);
    if (cfg.out == "-") {
        std::cout << report.to_json() << "\n";
    } else {
        auto f = open_out(cfg.out);
        f << report.to_json() << "\n";
    }
    report.print_table(std::cerr);
    return report.all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Correlation functions of continuously monitored quantum systems"};
    app.require_subcommand(1);

    json cfg_json;
    try {
        cfg_json = preload_config(argc, argv);
    } catch (const Error& e) {
        std::cerr << json{{"error", {{"module", e.module()}, {"message", e.what()}}}}.dump()
                  << "\n";
        return 2;
    }
    std::string config_path;  // consumed by the preload; registered so CLI11 accepts it

    bool dump_config = false;

    CorrelateConfig ccfg;
    ccfg.load(cfg_json);
    CLI::App* correlate = app.add_subcommand("correlate", "Compute analytic correlations");
    correlate->add_option("--model", ccfg.model_path, "model JSON file");
    correlate->add_option("--sharp", ccfg.sharp, "sharp leg det@time (repeatable)");
    correlate->add_option("--window", ccfg.window, "window leg det:start,end (repeatable)");
    correlate->add_option("--horizon", ccfg.horizon, "integration horizon (default: last window)");
    correlate->add_flag("--quadrature", ccfg.quadrature,
                        "use the nested-quadrature oracle (two rectangular windows)");
    correlate->add_option("--tol", ccfg.quad_tol, "quadrature tolerance");
    correlate->add_option("--krylov-tol", ccfg.krylov_tol, "Krylov propagation tolerance");
    correlate->add_option("--out", ccfg.out, "CSV output path, - for stdout");
    correlate->add_option("--config", config_path, "JSON config with the same keys");
    correlate->add_flag("--dump-config", dump_config, "print the effective config and exit");

    SimulateConfig scfg;
    scfg.load(cfg_json);
    CLI::App* simulate_cmd = app.add_subcommand("simulate", "Sample stochastic trajectories");
    simulate_cmd->add_option("--model", scfg.model_path, "model JSON file");
    simulate_cmd->add_option("--grid", scfg.grid, "time grid dt,T");
    simulate_cmd->add_option("--seed", scfg.seed, "master seed");
    simulate_cmd->add_option("--n-traj", scfg.n_traj, "number of trajectories");
    simulate_cmd->add_option("--scheme", scfg.scheme, "kraus or euler");
    simulate_cmd->add_option("--out", scfg.out, "output directory for record CSVs");
    simulate_cmd->add_option("--bin-dt", scfg.bin_dt, "also write records binned at this width");
    simulate_cmd->add_option("--config", config_path, "JSON config with the same keys");
    simulate_cmd->add_flag("--dump-config", dump_config, "print the effective config and exit");

    CompareConfig mcfg;
    mcfg.load(cfg_json);
    CLI::App* compare = app.add_subcommand("compare", "Monte Carlo vs analytic comparison");
    compare->add_option("--model", mcfg.model_path, "model JSON file");
    compare->add_option("--grid", mcfg.grid, "time grid dt,T");
    compare->add_option("--seed", mcfg.seed, "master seed");
    compare->add_option("--n-traj", mcfg.n_traj, "ensemble size");
    compare->add_option("--scheme", mcfg.scheme, "kraus or euler");
    compare->add_option("--request", mcfg.requests,
                        "windows of one request, e.g. d0:0,1;d0:0.5,1.5 (repeatable)");
    compare->add_option("--z-threshold", mcfg.z_threshold, "pass when |z| <= threshold");
    compare->add_option("--workers", mcfg.workers,
                        "worker threads (default: SME_CORRELATE_THREADS or all cores)");
    compare->add_option("--out", mcfg.out, "JSON report path, - for stdout");
    compare->add_option("--config", config_path, "JSON config with the same keys");
    compare->add_flag("--dump-config", dump_config, "print the effective config and exit");
    compare
        ->add_option("--test-corrupt-eta", mcfg.corrupt_eta,
                     "scale analytic-side efficiencies (consistency-test hook)")
        ->group("");  // hidden

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (correlate->parsed()) {
            if (dump_config) {
                std::cout << ccfg.to_json().dump(2) << "\n";
                return 0;
            }
            return run_correlate(ccfg);
        }
        if (simulate_cmd->parsed()) {
            if (dump_config) {
                std::cout << scfg.to_json().dump(2) << "\n";
                return 0;
            }
            return run_simulate(scfg);
        }
        if (compare->parsed()) {
            if (dump_config) {
                std::cout << mcfg.to_json().dump(2) << "\n";
                return 0;
            }
            return run_compare(mcfg);
        }
    } catch (const Error& e) {
        std::cerr << json{{"error", {{"module", e.module()}, {"message", e.what()}}}}.dump()
                  << "\n";
        return e.module() == "cli" ? 2 : 1;
    } catch (const std::exception& e) {
        std::cerr << json{{"error", {{"module", "internal"}, {"message", e.what()}}}}.dump()
                  << "\n";
        return 1;
    }
    return 2;
}
