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

#ifndef SMECORR_ESTIMATOR_HPP
#define SMECORR_ESTIMATOR_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "smecorr/analytic.hpp"
#include "smecorr/model.hpp"
#include "smecorr/trajectories.hpp"

namespace smecorr {

struct EnsembleSpec {
    QuantumModel model;
    DensityMatrix rho0;
    TimeGrid grid;
    std::size_t n_traj = 0;
    std::uint64_t master_seed = 0;
    Scheme scheme = Scheme::KrausMap;
    int workers = 0;  // 0 = hardware concurrency
};

struct BinnedRecord {
    double bin_dt = 0.0;
    std::vector<std::string> labels;
    std::vector<std::vector<double>> bins;  // [detector][bin]
    std::size_t dropped_steps = 0;          // grid tail not covering a full bin
};

/// I_k = sum of the increments falling in bin k; bin_dt must be an integer
/// multiple of the grid dt (a trailing partial bin is dropped and counted).
BinnedRecord bin_record(const MeasurementRecord& rec, double bin_dt);

struct ComparisonRequest {
    std::string id;
    std::vector<WindowFilter> windows;
};

struct RequestResult {
    std::string id;
    double analytic = 0.0;
    CorrMethod method = CorrMethod::OdePiecewise;
    double estimate = 0.0;
    double stderror = 0.0;
    double z = 0.0;
    bool pass = false;
    double max_snap_distance = 0.0;
};

struct ComparisonReport {
    std::vector<RequestResult> results;
    double z_threshold = 5.0;
    bool all_pass = false;
    std::size_t n_traj = 0;
    std::uint64_t master_seed = 0;
    std::string scheme;
    std::vector<std::string> warnings;

    std::string to_json() const;
    void print_table(std::ostream& os) const;
};

struct ComparisonOptions {
    double z_threshold = 5.0;
    AnalyticOptions analytic;
    SimulateOptions sim;
};

/// Runs the Monte Carlo ensemble once, evaluates every request empirically
/// (sample mean and standard error of the window-integral products) and
/// analytically (filtered_correlation), and reports z-scores. Trajectories
/// are distributed over a worker pool; per-worker partial sums are merged
/// with compensated accumulators, so the report does not depend on worker
/// scheduling.
ComparisonReport run_comparison(const EnsembleSpec& spec,
                                const std::vector<ComparisonRequest>& requests,
                                const ComparisonOptions& opts = {});

}  // namespace smecorr

#endif
