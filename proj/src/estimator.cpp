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

#include "smecorr/estimator.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <mutex>
#include <ostream>
#include <thread>

#include <json.hpp>

#include "smecorr/accum.hpp"
#include "smecorr/errors.hpp"

namespace smecorr {

BinnedRecord bin_record(const MeasurementRecord& rec, double bin_dt) {
    const double dt = rec.grid.dt;
    if (bin_dt < dt) throw Error("estimator", "bin width must be >= the grid dt");
    const double ratio = bin_dt / dt;
    const long m = std::lround(ratio);
    if (m < 1 || std::abs(ratio - static_cast<double>(m)) > 1e-9)
        throw Error("estimator", "bin width must be an integer multiple of the grid dt");
    const std::size_t per_bin = static_cast<std::size_t>(m);
    const std::size_t n_bins = rec.grid.n_steps / per_bin;

    BinnedRecord out;
    out.bin_dt = bin_dt;
    out.labels = rec.labels;
    out.dropped_steps = rec.grid.n_steps - n_bins * per_bin;
    out.bins.assign(rec.labels.size(), std::vector<double>(n_bins, 0.0));
    for (std::size_t d = 0; d < rec.labels.size(); ++d)
        for (std::size_t b = 0; b < n_bins; ++b) {
            double acc = 0.0;
            for (std::size_t k = 0; k < per_bin; ++k) acc += rec.increments[d][b * per_bin + k];
            out.bins[d][b] = acc;
        }
    return out;
}

namespace {

// one leg of one request, resolved against the simulation grid
struct ResolvedLeg {
    std::size_t det = 0;
    bool rect = false;
    std::size_t begin = 0, end = 0;     // rect: half-open step range
    std::vector<double> weights;        // sampled: weight per step (possibly empty range)
    double snap_distance = 0.0;
};

ResolvedLeg resolve_leg(const QuantumModel& model, const TimeGrid& g, const WindowFilter& w) {
    ResolvedLeg leg;
    leg.det = model.detector_index(w.detector);
    if (const auto* r = std::get_if<WindowFilter::Rect>(&w.shape)) {
        leg.rect = true;
        auto snap = [&](double t) {
            long k = std::lround((t - g.t0) / g.dt);
            return static_cast<std::size_t>(std::clamp(k, 0l, static_cast<long>(g.n_steps)));
        };
        leg.begin = snap(r->start);
        leg.end = snap(r->end);
        leg.snap_distance = std::max(std::abs(r->start - g.time(leg.begin)),
                                     std::abs(r->end - g.time(leg.end)));
        return leg;
    }
    leg.weights.resize(g.n_steps, 0.0);
    for (std::size_t k = 0; k < g.n_steps; ++k) leg.weights[k] = w.value(g.time(k));
    return leg;
}

double leg_integral(const ResolvedLeg& leg, const MeasurementRecord& rec) {
    const std::vector<double>& dy = rec.increments[leg.det];
    double acc = 0.0;
    if (leg.rect) {
        for (std::size_t k = leg.begin; k < leg.end; ++k) acc += dy[k];
    } else {
        for (std::size_t k = 0; k < dy.size(); ++k)
            if (leg.weights[k] != 0.0) acc += leg.weights[k] * dy[k];
    }
    return acc;
}

}  // namespace

ComparisonReport run_comparison(const EnsembleSpec& spec,
                                const std::vector<ComparisonRequest>& requests,
                                const ComparisonOptions& opts) {
    require_valid(spec.model);
    require_valid(spec.grid);
    if (spec.n_traj < 2) throw Error("estimator", "ensemble needs n_traj >= 2");
    if (requests.empty()) throw Error("estimator", "no comparison requests given");

    const double t_end = spec.grid.end_time();
    for (const auto& req : requests) {
        if (req.windows.empty())
            throw Error("estimator", "request '" + req.id + "' has no windows");
        for (const WindowFilter& w : req.windows)
            if (w.support_end() > t_end + 1e-12)
                throw Error("estimator", "request '" + req.id +
                                             "' extends beyond the simulation grid");
    }

    ComparisonReport report;
    report.z_threshold = opts.z_threshold;
    report.n_traj = spec.n_traj;
    report.master_seed = spec.master_seed;
    report.scheme = to_string(spec.scheme);

    // analytic side first: a request that cannot be computed fails before
    // any trajectory time is spent
    std::vector<CorrelationResult> analytic;
    analytic.reserve(requests.size());
    for (const auto& req : requests) {
        try {
            analytic.push_back(
                filtered_correlation(spec.model, spec.rho0, req.windows, t_end, opts.analytic));
        } catch (const Error& e) {
            throw Error(e.module(), "request '" + req.id + "': " + e.what());
        }
    }

    // resolve every leg once; workers only touch plain arrays
    std::vector<std::vector<ResolvedLeg>> legs(requests.size());
    for (std::size_t r = 0; r < requests.size(); ++r)
        for (const WindowFilter& w : requests[r].windows)
            legs[r].push_back(resolve_leg(spec.model, spec.grid, w));

    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const unsigned n_workers =
        spec.workers > 0 ? static_cast<unsigned>(spec.workers)
                         : std::min<unsigned>(hw, static_cast<unsigned>(spec.n_traj));

    struct Partial {
        std::vector<CompensatedSum> sum, sum_sq;
        std::vector<std::string> warnings;
    };
    std::vector<Partial> partials(n_workers);
    std::atomic<std::size_t> next{0};
    std::mutex fail_mutex;
    std::string failure;

    SimulateOptions sim = opts.sim;
    sim.scheme = spec.scheme;
    sim.snapshot_stride = 0;

    auto worker = [&](unsigned wi) {
        Partial& p = partials[wi];
        p.sum.resize(requests.size());
        p.sum_sq.resize(requests.size());
        try {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= spec.n_traj) break;
                const Trajectory traj =
                    simulate(spec.model, spec.rho0, spec.grid, spec.master_seed, i, sim);
                for (const std::string& w : traj.warnings)
                    if (p.warnings.empty()) p.warnings.push_back(w);
                for (std::size_t r = 0; r < requests.size(); ++r) {
                    double prod = 1.0;
                    for (const ResolvedLeg& leg : legs[r]) prod *= leg_integral(leg, traj.record);
                    p.sum[r].add(prod);
                    p.sum_sq[r].add(prod * prod);
                }
            }
        } catch (const std::exception& e) {
            std::lock_guard<std::mutex> lock(fail_mutex);
            if (failure.empty()) failure = e.what();
        }
    };

    if (n_workers == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_workers);
        for (unsigned wi = 0; wi < n_workers; ++wi) pool.emplace_back(worker, wi);
        for (std::thread& th : pool) th.join();
    }
    if (!failure.empty()) throw Error("estimator", "trajectory worker failed: " + failure);

    for (const Partial& p : partials)
        for (const std::string& w : p.warnings)
            if (report.warnings.empty()) report.warnings.push_back(w);

    report.all_pass = true;
    const double n = static_cast<double>(spec.n_traj);
    for (std::size_t r = 0; r < requests.size(); ++r) {
        CompensatedSum sum, sum_sq;
        for (const Partial& p : partials) {
            sum.merge(p.sum[r]);
            sum_sq.merge(p.sum_sq[r]);
        }
        RequestResult res;
        res.id = requests[r].id;
        res.analytic = analytic[r].value;
        res.method = analytic[r].method;
        res.estimate = sum.value() / n;
        const double var =
            std::max(0.0, (sum_sq.value() - n * res.estimate * res.estimate) / (n - 1.0));
        res.stderror = std::sqrt(var / n);
        for (const ResolvedLeg& leg : legs[r])
            res.max_snap_distance = std::max(res.max_snap_distance, leg.snap_distance);
        if (res.stderror > 0.0) {
            res.z = (res.estimate - res.analytic) / res.stderror;
            res.pass = std::abs(res.z) <= opts.z_threshold;
        } else {
            const bool equal = res.estimate == res.analytic;
            res.z = equal ? 0.0 : std::numeric_limits<double>::infinity();
            res.pass = equal;
        }
        report.all_pass = report.all_pass && res.pass;
        report.results.push_back(std::move(res));
    }
    return report;
}

std::string ComparisonReport::to_json() const {
    nlohmann::json j;
    j["z_threshold"] = z_threshold;
    j["all_pass"] = all_pass;
    j["n_traj"] = n_traj;
    j["master_seed"] = master_seed;
    j["scheme"] = scheme;
    j["warnings"] = warnings;
    j["results"] = nlohmann::json::array();
    for (const RequestResult& r : results) {
        nlohmann::json e;
        e["id"] = r.id;
        e["analytic"] = r.analytic;
        e["method"] = to_string(r.method);
        e["estimate"] = r.estimate;
        e["stderr"] = r.stderror;
        e["z"] = std::isfinite(r.z) ? nlohmann::json(r.z) : nlohmann::json("inf");
        e["pass"] = r.pass;
        e["max_snap_distance"] = r.max_snap_distance;
        j["results"].push_back(std::move(e));
    }
    return j.dump(2);
}

void ComparisonReport::print_table(std::ostream& os) const {
    char line[256];
    std::snprintf(line, sizeof line, "%-24s %14s %14s %12s %8s  %s\n", "request", "analytic",
                  "estimate", "stderr", "z", "pass");
    os << line;
    for (const RequestResult& r : results) {
        std::snprintf(line, sizeof line, "%-24s %14.8g %14.8g %12.4g %8.2f  %s\n", r.id.c_str(),
                      r.analytic, r.estimate, r.stderror, r.z, r.pass ? "yes" : "NO");
        os << line;
    }
    std::snprintf(line, sizeof line, "all_pass=%s (|z| <= %g, n_traj=%zu, scheme=%s)\n",
                  all_pass ? "yes" : "NO", z_threshold, n_traj, scheme.c_str());
    os << line;
}

}  // namespace smecorr
