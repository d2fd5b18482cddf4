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

#include "smecorr/trajectories.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "smecorr/errors.hpp"
#include "smecorr/kernels.hpp"
#include "smecorr/rng.hpp"
#include "smecorr/superop.hpp"

namespace smecorr {

void require_valid(const TimeGrid& g) {
    if (!(g.dt > 0.0)) throw Error("trajectories", "time grid requires dt > 0");
    if (g.n_steps < 1) throw Error("trajectories", "time grid requires n_steps >= 1");
    if (!std::isfinite(g.t0) || !std::isfinite(g.dt))
        throw Error("trajectories", "time grid values must be finite");
}

Scheme scheme_from_string(const std::string& s) {
    if (s == "kraus") return Scheme::KrausMap;
    if (s == "euler") return Scheme::EulerIto;
    throw Error("trajectories", "unknown scheme '" + s + "' (expected kraus or euler)");
}

std::string to_string(Scheme s) { return s == Scheme::KrausMap ? "kraus" : "euler"; }

namespace {

// storage-level helpers on column-major d x d buffers

void zero(std::vector<cxd>& v) { std::fill(v.begin(), v.end(), cxd(0.0, 0.0)); }

void mm_acc(std::size_t d, cxd alpha, const cxd* a, const cxd* b, cxd* c) {
    kernels::zgemm_acc(d, d, d, alpha, a, d, b, d, c, d);
}

double trace_real(std::size_t d, const cxd* m) {
    double t = 0.0;
    for (std::size_t i = 0; i < d; ++i) t += m[i + d * i].real();
    return t;
}

void hermitize(std::size_t d, cxd* m) {
    for (std::size_t j = 0; j < d; ++j) {
        for (std::size_t i = 0; i < j; ++i) {
            const cxd avg = 0.5 * (m[i + d * j] + std::conj(m[j + d * i]));
            m[i + d * j] = avg;
            m[j + d * i] = std::conj(avg);
        }
        m[j + d * j] = cxd(m[j + d * j].real(), 0.0);
    }
}

struct JumpChannel {
    std::size_t index;       // detector index == rng channel
    ComplexMatrix m0, m0d;   // no-click Kraus factor and its adjoint
    ComplexMatrix v, vd;
    double eta, theta;
};

struct DiffusiveChannel {
    std::size_t index;
    ComplexMatrix base, based;  // I - iH dt - 1/2 L^dag L dt
    ComplexMatrix l, ld;
    double eta;
};

class Stepper {
public:
    Stepper(const QuantumModel& m, const TimeGrid& grid, const SimulateOptions& opts)
        : model_(m), grid_(grid), opts_(opts), d_(m.dim), n_(m.dim * m.dim) {
        rho_.resize(n_);
        next_.resize(n_);
        t1_.resize(n_);
        t2_.resize(n_);

        if (opts.scheme == Scheme::KrausMap) {
            // per-detector single-step instruments, composed in declared
            // order; the Hamiltonian rides with the first detector so the
            // composition reproduces the full drift
            for (std::size_t k = 0; k < m.detectors.size(); ++k) {
                const Detector& det = m.detectors[k];
                ComplexMatrix h_k = (k == 0) ? m.hamiltonian : ComplexMatrix(d_, d_);
                ComplexMatrix base = ComplexMatrix::identity(d_);
                base += cxd(0.0, -grid.dt) * h_k;
                base += cxd(-0.5 * grid.dt, 0.0) * (det.op.adjoint() * det.op);
                if (det.kind == DetectorKind::Jump) {
                    jump_.push_back({k, base, base.adjoint(), det.op, det.op.adjoint(), det.eta,
                                     det.theta});
                } else {
                    diff_.push_back({k, base, base.adjoint(), det.op, det.op.adjoint(), det.eta});
                }
            }
        } else {
            lindblad_ = lindbladian(m, SuperopOptions{.construction_check = false});
            for (std::size_t k = 0; k < m.detectors.size(); ++k) {
                const Detector& det = m.detectors[k];
                if (det.kind == DetectorKind::Jump)
                    jump_.push_back({k, ComplexMatrix(d_, d_), ComplexMatrix(d_, d_), det.op,
                                     det.op.adjoint(), det.eta, det.theta});
                else
                    diff_.push_back({k, ComplexMatrix(d_, d_), ComplexMatrix(d_, d_), det.op,
                                     det.op.adjoint(), det.eta});
            }
        }
    }

    Trajectory run(const DensityMatrix& rho0, std::uint64_t master_seed, std::uint64_t index) {
        const rng::Stream stream = rng::Stream::for_trajectory(master_seed, index);
        Trajectory traj;
        traj.grid = grid_;
        traj.master_seed = master_seed;
        traj.index = index;
        traj.snapshot_stride = opts_.snapshot_stride;
        traj.record.grid = grid_;
        traj.record.labels.reserve(model_.detectors.size());
        for (const Detector& det : model_.detectors) traj.record.labels.push_back(det.label);
        traj.record.increments.assign(model_.detectors.size(),
                                      std::vector<double>(grid_.n_steps, 0.0));

        std::copy(rho0.matrix().data(), rho0.matrix().data() + n_, rho_.begin());
        if (opts_.snapshot_stride > 0)
            traj.snapshots.push_back(
                DensityMatrix::project_physical(as_matrix(rho_), opts_.negative_eig_tol));

        for (std::size_t step = 0; step < grid_.n_steps; ++step) {
            if (opts_.scheme == Scheme::KrausMap)
                kraus_step(step, stream, traj);
            else
                euler_step(step, stream, traj);

            hermitize(d_, rho_.data());
            const double tr = trace_real(d_, rho_.data());
            if (!std::isfinite(tr) || tr <= 0.0)
                throw Error("trajectories", "state trace became " + std::to_string(tr) +
                                                " at step " + std::to_string(step) +
                                                " (trajectory " + std::to_string(index) + ")");
            kernels::zscal(n_, cxd(1.0 / tr, 0.0), rho_.data());

            const bool checkpoint =
                opts_.snapshot_stride > 0 && (step + 1) % opts_.snapshot_stride == 0;
            if (checkpoint) {
                traj.snapshots.push_back(
                    DensityMatrix::project_physical(as_matrix(rho_), opts_.negative_eig_tol));
            } else if (opts_.invariant_check_stride > 0 &&
                       (step + 1) % opts_.invariant_check_stride == 0) {
                // throws when an eigenvalue fell below the tolerance
                DensityMatrix::project_physical(as_matrix(rho_), opts_.negative_eig_tol);
            }
        }
        traj.record.grid = grid_;
        if (!warned_cap_.empty()) traj.warnings.push_back(warned_cap_);
        return traj;
    }

private:
    ComplexMatrix as_matrix(const std::vector<cxd>& buf) const {
        ComplexMatrix m(d_, d_);
        std::copy(buf.begin(), buf.end(), m.data());
        return m;
    }

    void warn_cap(double p, std::size_t step) {
        if (!warned_cap_.empty()) return;
        char msg[160];
        std::snprintf(msg, sizeof msg,
                      "per-step jump probability %.3g exceeds cap %.3g at step %zu; "
                      "results carry O(dt) bias, consider a smaller dt",
                      p, opts_.jump_prob_cap, step);
        warned_cap_ = msg;
    }

    void kraus_step(std::size_t step, const rng::Stream& stream, Trajectory& traj) {
        const double dt = grid_.dt;
        for (const JumpChannel& ch : jump_) {
            // X0 = M0 rho M0^dag, X1 = V rho V^dag (dt folded in later)
            zero(t1_);
            mm_acc(d_, cxd(1.0, 0.0), ch.m0.data(), rho_.data(), t1_.data());
            zero(next_);
            mm_acc(d_, cxd(1.0, 0.0), t1_.data(), ch.m0d.data(), next_.data());  // next = X0
            zero(t1_);
            mm_acc(d_, cxd(1.0, 0.0), ch.v.data(), rho_.data(), t1_.data());
            zero(t2_);
            mm_acc(d_, cxd(1.0, 0.0), t1_.data(), ch.vd.data(), t2_.data());  // t2 = V rho V^dag

            const double p_click = ch.theta * dt * trace_real(d_, next_.data()) +
                                   ch.eta * dt * trace_real(d_, t2_.data());
            if (p_click > opts_.jump_prob_cap) warn_cap(p_click, step);

            const double u = stream.uniform(step, static_cast<std::uint32_t>(ch.index), 0);
            const bool click = u < p_click;
            const double w0 = click ? ch.theta * dt : 1.0 - ch.theta * dt;
            const double w1 = click ? ch.eta * dt : (1.0 - ch.eta) * dt;
            kernels::zscal(n_, cxd(w0, 0.0), next_.data());
            kernels::zaxpy(n_, cxd(w1, 0.0), t2_.data(), next_.data());
            const double tr = trace_real(d_, next_.data());
            if (!(tr > 0.0))
                throw Error("trajectories", "Kraus update produced non-positive trace at step " +
                                                std::to_string(step));
            kernels::zscal(n_, cxd(1.0 / tr, 0.0), next_.data());
            std::swap(rho_, next_);
            traj.record.increments[ch.index][step] = click ? 1.0 : 0.0;
        }
        for (const DiffusiveChannel& ch : diff_) {
            zero(t1_);
            mm_acc(d_, cxd(1.0, 0.0), ch.l.data(), rho_.data(), t1_.data());  // t1 = L rho
            const double mean = 2.0 * trace_real(d_, t1_.data());             // tr[(L+L^dag) rho]
            const double r = std::sqrt(ch.eta) * mean * dt +
                             std::sqrt(dt) *
                                 stream.normal(step, static_cast<std::uint32_t>(ch.index), 0);
            // t2 = M_r rho = base rho + sqrt(eta) r (L rho)
            zero(t2_);
            mm_acc(d_, cxd(1.0, 0.0), ch.base.data(), rho_.data(), t2_.data());
            kernels::zaxpy(n_, cxd(std::sqrt(ch.eta) * r, 0.0), t1_.data(), t2_.data());
            // next = t2 M_r^dag + (1-eta) dt L rho L^dag
            zero(next_);
            mm_acc(d_, cxd(1.0, 0.0), t2_.data(), ch.based.data(), next_.data());
            mm_acc(d_, cxd(std::sqrt(ch.eta) * r, 0.0), t2_.data(), ch.ld.data(), next_.data());
            if (ch.eta < 1.0)
                mm_acc(d_, cxd((1.0 - ch.eta) * dt, 0.0), t1_.data(), ch.ld.data(), next_.data());
            const double tr = trace_real(d_, next_.data());
            if (!(tr > 0.0))
                throw Error("trajectories", "Kraus update produced non-positive trace at step " +
                                                std::to_string(step));
            kernels::zscal(n_, cxd(1.0 / tr, 0.0), next_.data());
            std::swap(rho_, next_);
            traj.record.increments[ch.index][step] = r;
        }
    }

    void euler_step(std::size_t step, const rng::Stream& stream, Trajectory& traj) {
        const double dt = grid_.dt;
        // next = rho + L(rho) dt
        std::copy(rho_.begin(), rho_.end(), next_.begin());
        lindblad_.apply_acc(rho_.data(), next_.data(), cxd(dt, 0.0), ws_);

        for (const JumpChannel& ch : jump_) {
            zero(t1_);
            mm_acc(d_, cxd(1.0, 0.0), ch.v.data(), rho_.data(), t1_.data());
            zero(t2_);
            mm_acc(d_, cxd(1.0, 0.0), t1_.data(), ch.vd.data(), t2_.data());  // V rho V^dag
            const double rate = ch.theta + ch.eta * trace_real(d_, t2_.data());
            const double p = rate * dt;
            if (p > opts_.jump_prob_cap) warn_cap(p, step);
            const double u = stream.uniform(step, static_cast<std::uint32_t>(ch.index), 0);
            const bool click = u < p;
            traj.record.increments[ch.index][step] = click ? 1.0 : 0.0;
            if (rate <= 0.0) continue;
            // G[V](rho) = (theta rho + eta V rho V^dag)/rate - rho, weighted
            // by the compensated increment dN - p
            const double w = (click ? 1.0 : 0.0) - p;
            kernels::zaxpy(n_, cxd(w * ch.theta / rate - w, 0.0), rho_.data(), next_.data());
            kernels::zaxpy(n_, cxd(w * ch.eta / rate, 0.0), t2_.data(), next_.data());
        }
        for (const DiffusiveChannel& ch : diff_) {
            zero(t1_);
            mm_acc(d_, cxd(1.0, 0.0), ch.l.data(), rho_.data(), t1_.data());  // L rho
            const double mean = 2.0 * trace_real(d_, t1_.data());
            const double dw =
                std::sqrt(dt) * stream.normal(step, static_cast<std::uint32_t>(ch.index), 0);
            traj.record.increments[ch.index][step] = std::sqrt(ch.eta) * mean * dt + dw;
            // M[L](rho) = L rho + rho L^dag - mean * rho
            const double amp = std::sqrt(ch.eta) * dw;
            kernels::zaxpy(n_, cxd(amp, 0.0), t1_.data(), next_.data());
            mm_acc(d_, cxd(amp, 0.0), rho_.data(), ch.ld.data(), next_.data());
            kernels::zaxpy(n_, cxd(-amp * mean, 0.0), rho_.data(), next_.data());
        }
        std::swap(rho_, next_);
    }

    const QuantumModel& model_;
    TimeGrid grid_;
    SimulateOptions opts_;
    std::size_t d_, n_;
    std::vector<cxd> rho_, next_, t1_, t2_;
    std::vector<JumpChannel> jump_;
    std::vector<DiffusiveChannel> diff_;
    Superoperator lindblad_;
    SuperopWorkspace ws_;
    std::string warned_cap_;
};

}  // namespace

Trajectory simulate(const QuantumModel& m, const DensityMatrix& rho0, const TimeGrid& grid,
                    std::uint64_t master_seed, std::uint64_t trajectory_index,
                    const SimulateOptions& opts) {
    require_valid(m);
    require_valid(grid);
    if (rho0.dim() != m.dim) throw Error("trajectories", "initial state dimension mismatch");
    Stepper stepper(m, grid, opts);
    return stepper.run(rho0, master_seed, trajectory_index);
}

DensityMatrix unconditioned_evolve(const QuantumModel& m, const DensityMatrix& rho0, double t,
                                   const KrylovOptions& kopts) {
    require_valid(m);
    if (t < 0.0) throw Error("trajectories", "unconditioned_evolve requires t >= 0");
    if (t == 0.0) return rho0;
    const Superoperator gen = lindbladian(m, SuperopOptions{.construction_check = false});
    const VectorizedState out = expm_action(gen, vectorize(rho0.matrix()), t, kopts);
    // scrub Krylov-level roundoff before re-validating the invariants
    return DensityMatrix::project_physical(devectorize(out), 1e-8);
}

void write_record_csv(std::ostream& os, const MeasurementRecord& rec) {
    os << "step,time,detector_label,increment\n";
    char buf[64];
    for (std::size_t k = 0; k < rec.grid.n_steps; ++k) {
        for (std::size_t d = 0; d < rec.labels.size(); ++d) {
            std::snprintf(buf, sizeof buf, "%.17g", rec.grid.time(k));
            os << k << ',' << buf << ',' << rec.labels[d] << ',';
            std::snprintf(buf, sizeof buf, "%.17g", rec.increments[d][k]);
            os << buf << '\n';
        }
    }
}

}  // namespace smecorr
