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

#ifndef SMECORR_TRAJECTORIES_HPP
#define SMECORR_TRAJECTORIES_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "smecorr/krylov.hpp"
#include "smecorr/model.hpp"

namespace smecorr {

struct TimeGrid {
    double t0 = 0.0;
    double dt = 0.0;
    std::size_t n_steps = 0;

    double time(std::size_t k) const { return t0 + dt * static_cast<double>(k); }
    double end_time() const { return t0 + dt * static_cast<double>(n_steps); }
};

void require_valid(const TimeGrid& g);

/// Per-detector signal increments dY over the grid: one value per step.
/// Jump detectors record exactly 0 or 1; diffusive detectors record reals.
struct MeasurementRecord {
    TimeGrid grid;
    std::vector<std::string> labels;
    std::vector<std::vector<double>> increments;  // [detector][step]
};

struct Trajectory {
    TimeGrid grid;
    MeasurementRecord record;
    /// When snapshot_stride > 0: states at steps 0, stride, 2*stride, ...
    /// (clipped and renormalized, so each satisfies the DensityMatrix
    /// invariants).
    std::vector<DensityMatrix> snapshots;
    std::size_t snapshot_stride = 0;
    std::uint64_t master_seed = 0;
    std::uint64_t index = 0;
    std::vector<std::string> warnings;
};

enum class Scheme { KrausMap, EulerIto };

Scheme scheme_from_string(const std::string& s);
std::string to_string(Scheme s);

struct SimulateOptions {
    Scheme scheme = Scheme::KrausMap;
    std::size_t snapshot_stride = 0;       // 0 = keep no states
    double negative_eig_tol = 1e-6;        // abort below -tol, clip above
    double jump_prob_cap = 0.1;            // warn when a per-step click probability exceeds this
    std::size_t invariant_check_stride = 1000;
};

/// One conditioned trajectory. Identical inputs reproduce identical output
/// bit for bit: every random draw is addressed by (seed, index, step,
/// detector), never by call order.
Trajectory simulate(const QuantumModel& m, const DensityMatrix& rho0, const TimeGrid& grid,
                    std::uint64_t master_seed, std::uint64_t trajectory_index,
                    const SimulateOptions& opts = {});

/// rho_bar(t) = exp(t L)(rho0) via the Krylov action.
DensityMatrix unconditioned_evolve(const QuantumModel& m, const DensityMatrix& rho0, double t,
                                   const KrylovOptions& kopts = {});

/// CSV columns: step,time,detector_label,increment
void write_record_csv(std::ostream& os, const MeasurementRecord& rec);

}  // namespace smecorr

#endif
