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

#ifndef SMECORR_ANALYTIC_HPP
#define SMECORR_ANALYTIC_HPP

#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "smecorr/krylov.hpp"
#include "smecorr/model.hpp"
#include "smecorr/superop.hpp"
#include "smecorr/trajectories.hpp"

namespace smecorr {

/// One leg of a sharp correlation: which detector, at which time.
struct SharpPoint {
    std::string detector;
    double time = 0.0;
};

/// One leg of a filtered correlation: a test function attached to a detector.
struct WindowFilter {
    struct Rect {
        double start = 0.0;
        double end = 0.0;
    };
    /// Values sampled on a uniform grid t0 + k*dt, linearly interpolated,
    /// zero outside the sampled range.
    struct Sampled {
        double t0 = 0.0;
        double dt = 0.0;
        std::vector<double> values;
    };

    std::string detector;
    std::variant<Rect, Sampled> shape;

    static WindowFilter rect(std::string detector, double start, double end) {
        return {std::move(detector), Rect{start, end}};
    }
    static WindowFilter sampled(std::string detector, double t0, double dt,
                                std::vector<double> values) {
        return {std::move(detector), Sampled{t0, dt, std::move(values)}};
    }

    bool is_rect() const { return std::holds_alternative<Rect>(shape); }
    double support_start() const;
    double support_end() const;
    /// Test-function value at time t.
    double value(double t) const;
};

enum class CorrMethod { SharpInsertion, OdePiecewise, OdeRungeKutta, Quadrature };
std::string to_string(CorrMethod m);

struct CorrelationResult {
    double value = 0.0;
    int order = 0;
    CorrMethod method = CorrMethod::SharpInsertion;
    std::size_t segments_or_steps = 0;  // propagations / segments / RK steps / evals
    double tolerance = 0.0;             // tolerance the method was run at
};

struct AnalyticOptions {
    KrylovOptions krylov;
    SuperopOptions superop;
    double rk_rel_tol = 1e-9;
    double rk_abs_tol = 1e-12;
    int max_sharp_points = 8;   // soft caps; raise them when you mean it
    int max_filtered_legs = 6;  // fictitious-state count is 2^n
    double quad_tol = 1e-8;
    std::size_t quad_max_evals = 4000000;
    /// Test hook: scales every detector efficiency on the analytic side only.
    double eta_scale = 1.0;
    /// Test instrumentation: receives the trace of the no-derivative
    /// fictitious state at the end of a piecewise-constant integration.
    double* probe_plain_block_trace = nullptr;
};

/// Exact n-point correlation of the sharp signal: insertion superoperators at
/// the (strictly distinct) requested times, unconditioned propagation between
/// them. Points are sorted internally, so input order never matters.
CorrelationResult sharp_correlation(const QuantumModel& m, const DensityMatrix& rho0,
                                    std::vector<SharpPoint> points,
                                    const AnalyticOptions& opts = {});

/// Exact n-point correlation of filtered signals via the coupled linear ODE
/// over subset-indexed fictitious states. All-rectangular windows integrate
/// by exact piecewise-constant exponentiation; anything sampled falls back to
/// adaptive Runge-Kutta. `horizon` must cover every window support.
CorrelationResult filtered_correlation(const QuantumModel& m, const DensityMatrix& rho0,
                                       const std::vector<WindowFilter>& windows, double horizon,
                                       const AnalyticOptions& opts = {});

/// Independent oracle for two rectangular windows: nested adaptive quadrature
/// of the sharp two-point function over both time orderings plus the
/// equal-time overlap term.
CorrelationResult quadrature_correlation(const QuantumModel& m, const DensityMatrix& rho0,
                                         const std::vector<WindowFilter>& windows, double tol,
                                         const AnalyticOptions& opts = {});

struct McEstimate {
    double estimate = 0.0;
    double stderror = 0.0;
    std::size_t n = 0;
    double max_snap_distance = 0.0;
};

/// Empirical filtered-signal correlation over an ensemble of records: sample
/// mean and standard error of the per-record product of window integrals.
McEstimate mean_trajectory_correlation(const std::vector<MeasurementRecord>& records,
                                       const std::vector<WindowFilter>& windows);

/// Discrete window integral sum_k f(t_k) dY_k for one record; rectangular
/// boundaries are snapped to grid points (snap distance reported).
double window_integral_on_grid(const MeasurementRecord& rec, const WindowFilter& w,
                               double* snap_distance = nullptr);

namespace detail {

/// Adaptive Simpson quadrature to absolute tolerance; decrements evals_left
/// and throws Error("analytic", ...) when the budget runs out.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                        std::size_t& evals_left);

}  // namespace detail

}  // namespace smecorr

#endif
