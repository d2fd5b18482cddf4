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

#include "smecorr/analytic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>

#include "smecorr/accum.hpp"
#include "smecorr/errors.hpp"
#include "smecorr/kernels.hpp"

namespace smecorr {

double WindowFilter::support_start() const {
    if (const auto* r = std::get_if<Rect>(&shape)) return r->start;
    return std::get<Sampled>(shape).t0;
}

double WindowFilter::support_end() const {
    if (const auto* r = std::get_if<Rect>(&shape)) return r->end;
    const auto& s = std::get<Sampled>(shape);
    return s.t0 + s.dt * static_cast<double>(s.values.size() - 1);
}

double WindowFilter::value(double t) const {
    if (const auto* r = std::get_if<Rect>(&shape)) return (t >= r->start && t < r->end) ? 1.0 : 0.0;
    const auto& s = std::get<Sampled>(shape);
    const double x = (t - s.t0) / s.dt;
    if (x < 0.0 || x > static_cast<double>(s.values.size() - 1)) return 0.0;
    const std::size_t k = std::min(static_cast<std::size_t>(x), s.values.size() - 2);
    const double w = x - static_cast<double>(k);
    return (1.0 - w) * s.values[k] + w * s.values[k + 1];
}

std::string to_string(CorrMethod m) {
    switch (m) {
        case CorrMethod::SharpInsertion: return "sharp_insertion";
        case CorrMethod::OdePiecewise: return "ode_piecewise";
        case CorrMethod::OdeRungeKutta: return "ode_runge_kutta";
        case CorrMethod::Quadrature: return "quadrature";
    }
    return "?";
}

namespace {

void validate_window(const WindowFilter& w) {
    if (const auto* r = std::get_if<WindowFilter::Rect>(&w.shape)) {
        if (!(r->start >= 0.0) || !(r->end >= r->start) || !std::isfinite(r->end))
            throw Error("analytic", "rectangular window requires 0 <= start <= end");
        return;
    }
    const auto& s = std::get<WindowFilter::Sampled>(w.shape);
    if (s.values.size() < 2) throw Error("analytic", "sampled filter needs >= 2 values");
    if (!(s.dt > 0.0) || !(s.t0 >= 0.0))
        throw Error("analytic", "sampled filter requires dt > 0 and t0 >= 0");
    for (double v : s.values)
        if (!std::isfinite(v)) throw Error("analytic", "sampled filter has non-finite values");
}

Detector scaled_detector(const Detector& det, double eta_scale) {
    Detector d = det;
    d.eta *= eta_scale;
    return d;
}

Superoperator insertion_for(const Detector& det, const AnalyticOptions& opts) {
    const Detector eff = scaled_detector(det, opts.eta_scale);
    return det.kind == DetectorKind::Jump ? jump_insertion(eff, opts.superop)
                                          : diff_insertion(eff, opts.superop);
}

double real_trace_of_vec(const std::vector<cxd>& v, std::size_t d) {
    double t = 0.0;
    for (std::size_t i = 0; i < d; ++i) t += v[i + d * i].real();
    return t;
}

double finite_or_throw(double v) {
    if (!std::isfinite(v)) throw Error("analytic", "correlation value is not finite");
    return v;
}

// insertion superoperators at increasing times, unconditioned propagation
// in between; equal times are legal here (the quadrature oracle integrates
// up to coincidence boundaries)
double insertion_chain(const Superoperator& lind,
                       const std::vector<std::pair<double, const Superoperator*>>& chain,
                       const VectorizedState& rho0, const KrylovOptions& kopts) {
    std::vector<cxd> state = rho0.data;
    const LinearOperator gen = lind.as_linear_operator();
    SuperopWorkspace ws;
    std::vector<cxd> tmp(state.size());
    double t_prev = 0.0;
    for (const auto& [t, ins] : chain) {
        if (t > t_prev) state = expm_action(gen, std::move(state), t - t_prev, kopts);
        ins->apply(state.data(), tmp.data(), ws);
        std::swap(state, tmp);
        t_prev = t;
    }
    return real_trace_of_vec(state, rho0.dim);
}

}  // namespace

CorrelationResult sharp_correlation(const QuantumModel& m, const DensityMatrix& rho0,
                                    std::vector<SharpPoint> points, const AnalyticOptions& opts) {
    require_valid(m);
    if (rho0.dim() != m.dim) throw Error("analytic", "initial state dimension mismatch");
    if (points.empty()) throw Error("analytic", "sharp_correlation needs at least one point");
    if (points.size() > static_cast<std::size_t>(opts.max_sharp_points))
        throw Error("analytic", "sharp_correlation: " + std::to_string(points.size()) +
                                    " points exceed the configured cap of " +
                                    std::to_string(opts.max_sharp_points));
    for (const SharpPoint& p : points) {
        if (!(p.time >= 0.0) || !std::isfinite(p.time))
            throw Error("analytic", "sharp point times must be finite and >= 0");
        m.detector_index(p.detector);  // throws on unknown label
    }
    std::sort(points.begin(), points.end(),
              [](const SharpPoint& a, const SharpPoint& b) { return a.time < b.time; });
    for (std::size_t i = 0; i + 1 < points.size(); ++i)
        if (points[i].time == points[i + 1].time)
            throw Error("analytic",
                           "sharp correlation times must be strictly distinct (equal-time sharp "
                           "contributions are Dirac-singular); use windows instead");

    const Superoperator lind = lindbladian(m, opts.superop);
    std::map<std::size_t, Superoperator> insertions;
    for (const SharpPoint& p : points) {
        const std::size_t k = m.detector_index(p.detector);
        if (!insertions.count(k)) insertions.emplace(k, insertion_for(m.detectors[k], opts));
    }
    std::vector<std::pair<double, const Superoperator*>> chain;
    chain.reserve(points.size());
    for (const SharpPoint& p : points)
        chain.emplace_back(p.time, &insertions.at(m.detector_index(p.detector)));

    const double value =
        finite_or_throw(insertion_chain(lind, chain, vectorize(rho0.matrix()), opts.krylov));
    return {value, static_cast<int>(points.size()), CorrMethod::SharpInsertion, points.size(),
            opts.krylov.tol};
}

namespace detail {

namespace {

double simpson_rec(const std::function<double(double)>& f, double a, double m, double b,
                   double fa, double fm, double fb, double whole, double tol,
                   std::size_t& evals_left, int depth) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    if (evals_left < 2)
        throw Error("analytic", "quadrature tolerance not reached within max evaluations");
    evals_left -= 2;
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return simpson_rec(f, a, lm, m, fa, flm, fm, left, 0.5 * tol, evals_left, depth - 1) +
           simpson_rec(f, m, rm, b, fm, frm, fb, right, 0.5 * tol, evals_left, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                        std::size_t& evals_left) {
    if (!(b > a)) return 0.0;
    if (evals_left < 3)
        throw Error("analytic", "quadrature tolerance not reached within max evaluations");
    evals_left -= 3;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_rec(f, a, m, b, fa, fm, fb, whole, tol, evals_left, 48);
}

}  // namespace detail

CorrelationResult quadrature_correlation(const QuantumModel& m, const DensityMatrix& rho0,
                                         const std::vector<WindowFilter>& windows, double tol,
                                         const AnalyticOptions& opts) {
    require_valid(m);
    if (windows.size() != 2)
        throw Error("analytic", "quadrature_correlation supports exactly two windows");
    for (const WindowFilter& w : windows) {
        validate_window(w);
        if (!w.is_rect())
            throw Error("analytic", "quadrature_correlation supports rectangular windows only");
    }
    if (!(tol > 0.0)) throw Error("analytic", "quadrature tolerance must be positive");

    const auto& r1 = std::get<WindowFilter::Rect>(windows[0].shape);
    const auto& r2 = std::get<WindowFilter::Rect>(windows[1].shape);
    const std::size_t det_a = m.detector_index(windows[0].detector);
    const std::size_t det_b = m.detector_index(windows[1].detector);

    const Superoperator lind = lindbladian(m, opts.superop);
    const Superoperator ins_a = insertion_for(m.detectors[det_a], opts);
    const Superoperator ins_b = insertion_for(m.detectors[det_b], opts);
    const VectorizedState rho_vec = vectorize(rho0.matrix());

    std::size_t evals_left = opts.quad_max_evals;
    const std::size_t evals_start = evals_left;
    double total = 0.0;
    const double part_tol = tol / 3.0;

    // equal-time contribution, present only when both legs watch the same
    // detector: identity insertion for a diffusive channel (the Wiener
    // variance), the one-point rate integrated over the overlap for a jump
    // channel
    const double lo = std::max(r1.start, r2.start);
    const double hi = std::min(r1.end, r2.end);
    if (det_a == det_b && hi > lo) {
        if (m.detectors[det_a].kind == DetectorKind::Diffusive) {
            total += hi - lo;
        } else {
            auto one_point = [&](double t) {
                return insertion_chain(lind, {{t, &ins_a}}, rho_vec, opts.krylov);
            };
            total += detail::adaptive_simpson(one_point, lo, hi, part_tol, evals_left);
        }
    }

    // ordered double integrals: the outer time carries the first insertion,
    // the inner one runs over the later part of the other window
    auto ordered_term = [&](double ao, double bo, double ai, double bi,
                            const Superoperator& first, const Superoperator& second,
                            double budget) {
        if (!(bo > ao)) return 0.0;
        auto outer = [&](double t1) {
            const double in_lo = std::max(ai, t1);
            if (!(bi > in_lo)) return 0.0;
            auto inner = [&](double t2) {
                return insertion_chain(lind, {{t1, &first}, {t2, &second}}, rho_vec, opts.krylov);
            };
            return detail::adaptive_simpson(inner, in_lo, bi, budget / (2.0 * (bo - ao)),
                                            evals_left);
        };
        // split at the inner window's boundaries so the outer integrand stays smooth
        std::vector<double> knots = {ao, bo};
        for (double k : {ai, bi})
            if (k > ao && k < bo) knots.push_back(k);
        std::sort(knots.begin(), knots.end());
        double acc = 0.0;
        for (std::size_t i = 0; i + 1 < knots.size(); ++i)
            acc += detail::adaptive_simpson(outer, knots[i], knots[i + 1],
                                            0.5 * budget / static_cast<double>(knots.size() - 1),
                                            evals_left);
        return acc;
    };

    total += ordered_term(r1.start, r1.end, r2.start, r2.end, ins_a, ins_b, part_tol);
    total += ordered_term(r2.start, r2.end, r1.start, r1.end, ins_b, ins_a, part_tol);

    return {finite_or_throw(total), 2, CorrMethod::Quadrature, evals_start - evals_left, tol};
}

// ---------------------------------------------------------------------------
// filtered correlations: coupled linear ODE over subset-indexed states
// ---------------------------------------------------------------------------

namespace {

struct Coupling {
    unsigned to = 0;         // target subset mask
    unsigned from = 0;       // source subset mask (to with `legs` removed)
    unsigned legs = 0;       // legs whose filter values multiply this term
    const Superoperator* op = nullptr;  // nullptr means the identity map
};

struct BlockSystem {
    std::size_t n_legs = 0;
    std::size_t d = 0;
    std::size_t block = 0;  // d^2
    std::size_t blocks = 0; // 2^n
    const Superoperator* lind = nullptr;
    std::vector<Coupling> couplings;
    const std::vector<WindowFilter>* windows = nullptr;

    std::size_t dim() const { return blocks * block; }

    // piecewise-constant path: every active leg has filter value 1
    void apply_active(unsigned active, const cxd* in, cxd* out, SuperopWorkspace& ws) const {
        for (std::size_t s = 0; s < blocks; ++s)
            lind->apply(in + s * block, out + s * block, ws);
        for (const Coupling& c : couplings) {
            if ((c.legs & active) != c.legs) continue;
            if (c.op == nullptr)
                kernels::zaxpy(block, cxd(1.0, 0.0), in + c.from * block, out + c.to * block);
            else
                c.op->apply_acc(in + c.from * block, out + c.to * block, cxd(1.0, 0.0), ws);
        }
    }

    // time-dependent path: evaluate every leg's filter at t
    void apply_at(double t, const cxd* in, cxd* out, SuperopWorkspace& ws) const {
        std::array<double, 16> f{};
        for (std::size_t i = 0; i < n_legs; ++i) f[i] = (*windows)[i].value(t);
        for (std::size_t s = 0; s < blocks; ++s)
            lind->apply(in + s * block, out + s * block, ws);
        for (const Coupling& c : couplings) {
            double coeff = 1.0;
            for (std::size_t i = 0; i < n_legs; ++i)
                if (c.legs & (1u << i)) coeff *= f[i];
            if (coeff == 0.0) continue;
            if (c.op == nullptr)
                kernels::zaxpy(block, cxd(coeff, 0.0), in + c.from * block, out + c.to * block);
            else
                c.op->apply_acc(in + c.from * block, out + c.to * block, cxd(coeff, 0.0), ws);
        }
    }
};

// Couplings from the mixed partial derivatives of the deformed generator at
// j = 0. For a subset T of legs that all watch the same jump detector the
// exponential contributes for every size of T; a diffusive detector
// contributes single legs (through sqrt(eta) j L_+) and same-detector pairs
// (through j^2/2, an identity insertion). Legs on distinct detectors never
// couple within one T.
std::vector<Coupling> enumerate_couplings(const QuantumModel& m,
                                          const std::vector<WindowFilter>& windows,
                                          const std::vector<const Superoperator*>& leg_insertion,
                                          const std::vector<std::size_t>& leg_det) {
    const std::size_t n = windows.size();
    std::vector<Coupling> out;
    const unsigned full = (1u << n) - 1u;
    for (unsigned s = 1; s <= full; ++s) {
        for (unsigned t = s; t != 0; t = (t - 1) & s) {  // nonempty submasks of s
            // classify T
            int first_leg = -1;
            bool same_det = true;
            int size = 0;
            for (std::size_t i = 0; i < n; ++i) {
                if (!(t & (1u << i))) continue;
                ++size;
                if (first_leg < 0)
                    first_leg = static_cast<int>(i);
                else if (leg_det[i] != leg_det[first_leg])
                    same_det = false;
            }
            if (!same_det) continue;
            const Detector& det = m.detectors[leg_det[first_leg]];
            if (det.kind == DetectorKind::Jump) {
                out.push_back({s, s & ~t, t, leg_insertion[first_leg]});
            } else if (size == 1) {
                out.push_back({s, s & ~t, t, leg_insertion[first_leg]});
            } else if (size == 2) {
                out.push_back({s, s & ~t, t, nullptr});  // identity insertion
            }
        }
    }
    return out;
}

// Dormand-Prince 5(4) with PI-free basic step control, integrating knot to
// knot so filter kinks never sit inside a step.
struct Dopri5 {
    const BlockSystem& sys;
    double rel_tol, abs_tol;
    std::size_t steps_taken = 0;
    SuperopWorkspace ws;

    explicit Dopri5(const BlockSystem& s, double rtol, double atol)
        : sys(s), rel_tol(rtol), abs_tol(atol) {}

    void integrate(std::vector<cxd>& y, double t0, double t1) {
        static const double a[7][6] = {
            {},
            {1.0 / 5},
            {3.0 / 40, 9.0 / 40},
            {44.0 / 45, -56.0 / 15, 32.0 / 9},
            {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
            {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
            {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84}};
        static const double c[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
        static const double b5[7] = {35.0 / 384,      0.0,        500.0 / 1113, 125.0 / 192,
                                     -2187.0 / 6784,  11.0 / 84,  0.0};
        static const double b4[7] = {5179.0 / 57600,  0.0,        7571.0 / 16695, 393.0 / 640,
                                     -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};

        const std::size_t n = sys.dim();
        std::vector<std::vector<cxd>> k(7, std::vector<cxd>(n));
        std::vector<cxd> stage(n), y5(n), y4(n);

        double t = t0;
        double h = (t1 - t0) / 8.0;
        int rejected_in_a_row = 0;
        while (t < t1 - 1e-15 * std::max(1.0, std::abs(t1))) {
            h = std::min(h, t1 - t);
            for (int s = 0; s < 7; ++s) {
                std::copy(y.begin(), y.end(), stage.begin());
                for (int j = 0; j < s; ++j)
                    kernels::zaxpy(n, cxd(h * a[s][j], 0.0), k[j].data(), stage.data());
                sys.apply_at(t + c[s] * h, stage.data(), k[s].data(), ws);
            }
            std::copy(y.begin(), y.end(), y5.begin());
            std::copy(y.begin(), y.end(), y4.begin());
            for (int s = 0; s < 7; ++s) {
                if (b5[s] != 0.0) kernels::zaxpy(n, cxd(h * b5[s], 0.0), k[s].data(), y5.data());
                if (b4[s] != 0.0) kernels::zaxpy(n, cxd(h * b4[s], 0.0), k[s].data(), y4.data());
            }
            double err_sq = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double scale =
                    abs_tol + rel_tol * std::max(std::abs(y[i]), std::abs(y5[i]));
                const double e = std::abs(y5[i] - y4[i]) / scale;
                err_sq += e * e;
            }
            const double err = std::sqrt(err_sq / static_cast<double>(n));
            if (err <= 1.0) {
                t += h;
                std::swap(y, y5);
                ++steps_taken;
                rejected_in_a_row = 0;
                const double grow = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
                h *= std::clamp(grow, 0.2, 5.0);
            } else {
                h *= std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.9);
                if (++rejected_in_a_row > 60)
                    throw Error("analytic", "Runge-Kutta step size collapsed");
            }
            if (steps_taken > 2000000)
                throw Error("analytic", "Runge-Kutta exceeded the step budget");
        }
    }
};

}  // namespace

CorrelationResult filtered_correlation(const QuantumModel& m, const DensityMatrix& rho0,
                                       const std::vector<WindowFilter>& windows, double horizon,
                                       const AnalyticOptions& opts) {
    require_valid(m);
    if (rho0.dim() != m.dim) throw Error("analytic", "initial state dimension mismatch");
    if (windows.empty()) throw Error("analytic", "filtered_correlation needs at least one window");
    if (windows.size() > static_cast<std::size_t>(opts.max_filtered_legs))
        throw Error("analytic", "filtered_correlation: " + std::to_string(windows.size()) +
                                    " legs exceed the configured cap of " +
                                    std::to_string(opts.max_filtered_legs) +
                                    " (fictitious-state count is 2^n)");
    double t_end = 0.0;
    bool all_rect = true;
    for (const WindowFilter& w : windows) {
        validate_window(w);
        m.detector_index(w.detector);
        t_end = std::max(t_end, w.support_end());
        all_rect = all_rect && w.is_rect();
    }
    if (horizon < t_end - 1e-12)
        throw Error("analytic", "window support exceeds the requested horizon");
    // evolution past the last window is trace-preserving; stop there

    const std::size_t n = windows.size();
    const Superoperator lind = lindbladian(m, opts.superop);
    std::vector<std::size_t> leg_det(n);
    std::map<std::size_t, Superoperator> insertions;
    for (std::size_t i = 0; i < n; ++i) {
        leg_det[i] = m.detector_index(windows[i].detector);
        if (!insertions.count(leg_det[i]))
            insertions.emplace(leg_det[i], insertion_for(m.detectors[leg_det[i]], opts));
    }
    std::vector<const Superoperator*> leg_ins(n);
    for (std::size_t i = 0; i < n; ++i) leg_ins[i] = &insertions.at(leg_det[i]);

    BlockSystem sys;
    sys.n_legs = n;
    sys.d = m.dim;
    sys.block = m.dim * m.dim;
    sys.blocks = std::size_t{1} << n;
    sys.lind = &lind;
    sys.windows = &windows;
    sys.couplings = enumerate_couplings(m, windows, leg_ins, leg_det);

    std::vector<cxd> y(sys.dim(), cxd(0.0, 0.0));
    const VectorizedState rho_vec = vectorize(rho0.matrix());
    std::copy(rho_vec.data.begin(), rho_vec.data.end(), y.begin());

    std::size_t work_count = 0;
    CorrMethod method;
    if (all_rect) {
        method = CorrMethod::OdePiecewise;
        std::vector<double> bounds = {0.0, t_end};
        for (const WindowFilter& w : windows) {
            const auto& r = std::get<WindowFilter::Rect>(w.shape);
            for (double b : {r.start, r.end})
                if (b > 0.0 && b < t_end) bounds.push_back(b);
        }
        std::sort(bounds.begin(), bounds.end());
        bounds.erase(std::unique(bounds.begin(), bounds.end(),
                                 [](double x, double y2) { return std::abs(x - y2) < 1e-14; }),
                     bounds.end());
        SuperopWorkspace ws;
        for (std::size_t i = 0; i + 1 < bounds.size(); ++i) {
            const double u = bounds[i], v = bounds[i + 1];
            if (!(v > u)) continue;
            const double mid = 0.5 * (u + v);
            unsigned active = 0;
            for (std::size_t l = 0; l < n; ++l) {
                const auto& r = std::get<WindowFilter::Rect>(windows[l].shape);
                if (mid >= r.start && mid < r.end) active |= 1u << l;
            }
            LinearOperator block_op{
                sys.dim(), [&sys, active, &ws](const cxd* in, cxd* out) {
                    sys.apply_active(active, in, out, ws);
                }};
            y = expm_action(block_op, std::move(y), v - u, opts.krylov);
            ++work_count;
        }
    } else {
        method = CorrMethod::OdeRungeKutta;
        // knots: every rect boundary and sampled grid point; the RHS is
        // smooth between consecutive knots
        std::vector<double> knots = {0.0, t_end};
        for (const WindowFilter& w : windows) {
            if (w.is_rect()) {
                const auto& r = std::get<WindowFilter::Rect>(w.shape);
                for (double b : {r.start, r.end})
                    if (b > 0.0 && b < t_end) knots.push_back(b);
            } else {
                const auto& s = std::get<WindowFilter::Sampled>(w.shape);
                for (std::size_t k = 0; k < s.values.size(); ++k) {
                    const double tk = s.t0 + s.dt * static_cast<double>(k);
                    if (tk > 0.0 && tk < t_end) knots.push_back(tk);
                }
            }
        }
        std::sort(knots.begin(), knots.end());
        knots.erase(std::unique(knots.begin(), knots.end(),
                                [](double x, double y2) { return std::abs(x - y2) < 1e-14; }),
                    knots.end());
        Dopri5 rk(sys, opts.rk_rel_tol, opts.rk_abs_tol);
        for (std::size_t i = 0; i + 1 < knots.size(); ++i)
            rk.integrate(y, knots[i], knots[i + 1]);
        work_count = rk.steps_taken;
    }

    if (opts.probe_plain_block_trace != nullptr) {
        double tr = 0.0;
        for (std::size_t i = 0; i < m.dim; ++i) tr += y[i + m.dim * i].real();
        *opts.probe_plain_block_trace = tr;
    }

    const std::size_t full = sys.blocks - 1;
    double value = 0.0;
    for (std::size_t i = 0; i < m.dim; ++i) value += y[full * sys.block + i + m.dim * i].real();
    return {finite_or_throw(value), static_cast<int>(n), method, work_count,
            all_rect ? opts.krylov.tol : opts.rk_rel_tol};
}

double window_integral_on_grid(const MeasurementRecord& rec, const WindowFilter& w,
                               double* snap_distance) {
    const auto it = std::find(rec.labels.begin(), rec.labels.end(), w.detector);
    if (it == rec.labels.end())
        throw Error("analytic", "record has no detector labelled '" + w.detector + "'");
    const std::size_t det = static_cast<std::size_t>(it - rec.labels.begin());
    const std::vector<double>& dy = rec.increments[det];
    const TimeGrid& g = rec.grid;

    if (snap_distance) *snap_distance = 0.0;
    if (const auto* r = std::get_if<WindowFilter::Rect>(&w.shape)) {
        auto snap = [&](double t) {
            const double x = (t - g.t0) / g.dt;
            long k = std::lround(x);
            k = std::clamp(k, 0l, static_cast<long>(g.n_steps));
            return static_cast<std::size_t>(k);
        };
        const std::size_t s = snap(r->start);
        const std::size_t e = snap(r->end);
        if (snap_distance)
            *snap_distance = std::max(std::abs(r->start - g.time(s)),
                                      std::abs(r->end - g.time(e)));
        double acc = 0.0;
        for (std::size_t k = s; k < e; ++k) acc += dy[k];
        return acc;
    }
    double acc = 0.0;
    for (std::size_t k = 0; k < g.n_steps; ++k) {
        const double f = w.value(g.time(k));
        if (f != 0.0) acc += f * dy[k];
    }
    return acc;
}

McEstimate mean_trajectory_correlation(const std::vector<MeasurementRecord>& records,
                                       const std::vector<WindowFilter>& windows) {
    if (records.size() < 2)
        throw Error("analytic", "mean_trajectory_correlation needs at least two records");
    if (windows.empty()) throw Error("analytic", "no windows given");
    const TimeGrid& g0 = records.front().grid;
    for (const MeasurementRecord& r : records)
        if (r.grid.t0 != g0.t0 || r.grid.dt != g0.dt || r.grid.n_steps != g0.n_steps)
            throw Error("analytic", "records lie on different grids");

    CompensatedSum sum, sum_sq;
    double max_snap = 0.0;
    for (const MeasurementRecord& r : records) {
        double prod = 1.0;
        for (const WindowFilter& w : windows) {
            double snap = 0.0;
            prod *= window_integral_on_grid(r, w, &snap);
            max_snap = std::max(max_snap, snap);
        }
        sum.add(prod);
        sum_sq.add(prod * prod);
    }
    const double n = static_cast<double>(records.size());
    const double mean = sum.value() / n;
    const double var = std::max(0.0, (sum_sq.value() - n * mean * mean) / (n - 1.0));
    return {mean, std::sqrt(var / n), records.size(), max_snap};
}

}  // namespace smecorr
