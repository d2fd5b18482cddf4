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

#include "smecorr/superop.hpp"

#include <cmath>
#include <memory>

#include "smecorr/errors.hpp"
#include "smecorr/kernels.hpp"
#include "smecorr/rng.hpp"

namespace smecorr {

namespace {

void check_square(const ComplexMatrix& m, std::size_t dim, const char* what) {
    if (m.rows() != dim || m.cols() != dim)
        throw Error("superops", std::string(what) + ": dimension mismatch");
}

}  // namespace

Superoperator Superoperator::from_terms(std::size_t dim, std::vector<Term> terms,
                                        const SuperopOptions& opts) {
    if (dim < 1) throw Error("superops", "superoperator dimension must be >= 1");
    Superoperator s;
    s.dim_ = dim;
    for (const Term& t : terms) {
        if (t.left) check_square(*t.left, dim, "left factor");
        if (t.right) check_square(*t.right, dim, "right factor");
    }
    s.terms_ = std::move(terms);
    if (dim < opts.materialize_below_dim) s.materialized_ = s.materialize();

    if (opts.construction_check && s.materialized_ && dim <= 16) {
        // the two forms must agree; catches convention slips at build time
        const std::size_t n = dim * dim;
        SuperopWorkspace ws;
        std::vector<cxd> in(n), free_out(n), dense_out(n);
        const auto stream = rng::Stream::for_trajectory(0x5345435243ull, 0);
        for (int rep = 0; rep < 20; ++rep) {
            for (std::size_t i = 0; i < n; ++i)
                in[i] = cxd(2.0 * stream.uniform(rep, 0, static_cast<std::uint32_t>(2 * i)) - 1.0,
                            2.0 * stream.uniform(rep, 0, static_cast<std::uint32_t>(2 * i + 1)) -
                                1.0);
            // matrix-free route
            std::fill(free_out.begin(), free_out.end(), cxd(0.0, 0.0));
            ws.scratch.assign(n, cxd(0.0, 0.0));
            for (const Term& t : s.terms_) s.accumulate_term(t, in.data(), free_out.data(), cxd(1.0, 0.0), ws);
            // dense route
            std::fill(dense_out.begin(), dense_out.end(), cxd(0.0, 0.0));
            kernels::zgemm_acc(n, n, 1, cxd(1.0, 0.0), s.materialized_->data(), n, in.data(), n,
                               dense_out.data(), n);
            double diff = 0.0, scale = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                diff += std::norm(free_out[i] - dense_out[i]);
                scale += std::norm(dense_out[i]);
            }
            if (std::sqrt(diff) > 1e-12 * std::max(1.0, std::sqrt(scale)))
                throw Error("superops",
                               "materialized and matrix-free forms disagree at construction");
        }
    }
    return s;
}

void Superoperator::accumulate_term(const Term& t, const cxd* in, cxd* out, cxd scale,
                                    SuperopWorkspace& ws) const {
    const std::size_t d = dim_;
    const std::size_t n = d * d;
    const cxd c = scale * t.coeff;
    if (c == cxd(0.0, 0.0)) return;
    if (!t.left && !t.right) {
        kernels::zaxpy(n, c, in, out);
    } else if (t.left && !t.right) {
        kernels::zgemm_acc(d, d, d, c, t.left->data(), d, in, d, out, d);
    } else if (!t.left && t.right) {
        kernels::zgemm_acc(d, d, d, c, in, d, t.right->data(), d, out, d);
    } else {
        if (ws.scratch.size() < n) ws.scratch.resize(n);
        std::fill(ws.scratch.begin(), ws.scratch.begin() + n, cxd(0.0, 0.0));
        kernels::zgemm_acc(d, d, d, c, t.left->data(), d, in, d, ws.scratch.data(), d);
        kernels::zgemm_acc(d, d, d, cxd(1.0, 0.0), ws.scratch.data(), d, t.right->data(), d, out,
                           d);
    }
}

void Superoperator::apply(const cxd* in, cxd* out, SuperopWorkspace& ws) const {
    const std::size_t n = liouville_dim();
    std::fill(out, out + n, cxd(0.0, 0.0));
    apply_acc(in, out, cxd(1.0, 0.0), ws);
}

void Superoperator::apply_acc(const cxd* in, cxd* out, cxd scale, SuperopWorkspace& ws) const {
    const std::size_t n = liouville_dim();
    if (materialized_) {
        kernels::zgemm_acc(n, n, 1, scale, materialized_->data(), n, in, n, out, n);
        return;
    }
    for (const Term& t : terms_) accumulate_term(t, in, out, scale, ws);
}

VectorizedState Superoperator::apply(const VectorizedState& v) const {
    if (v.dim != dim_) throw Error("superops", "superoperator/state dimension mismatch");
    VectorizedState out = VectorizedState::zero(dim_);
    SuperopWorkspace ws;
    apply_acc(v.data.data(), out.data.data(), cxd(1.0, 0.0), ws);
    return out;
}

ComplexMatrix Superoperator::apply(const ComplexMatrix& rho) const {
    return devectorize(apply(vectorize(rho)));
}

ComplexMatrix Superoperator::materialize() const {
    const std::size_t n = liouville_dim();
    ComplexMatrix m(n, n);
    const ComplexMatrix eye = ComplexMatrix::identity(dim_);
    for (const Term& t : terms_) {
        if (!t.left && !t.right) {
            for (std::size_t i = 0; i < n; ++i) m(i, i) += t.coeff;
            continue;
        }
        const ComplexMatrix& a = t.left ? *t.left : eye;
        const ComplexMatrix bt = t.right ? t.right->transpose() : eye;
        ComplexMatrix k = kron(bt, a);
        kernels::zaxpy(n * n, t.coeff, k.data(), m.data());
    }
    return m;
}

LinearOperator Superoperator::as_linear_operator() const {
    auto ws = std::make_shared<SuperopWorkspace>();
    const Superoperator* self = this;
    return {liouville_dim(),
            [self, ws](const cxd* in, cxd* out) { self->apply(in, out, *ws); }};
}

Superoperator dissipator(const ComplexMatrix& l, const SuperopOptions& opts) {
    if (l.rows() != l.cols()) throw Error("superops", "dissipator operator must be square");
    const ComplexMatrix ld = l.adjoint();
    const ComplexMatrix ldl = ld * l;
    std::vector<Superoperator::Term> terms;
    terms.push_back({cxd(1.0, 0.0), l, ld});
    terms.push_back({cxd(-0.5, 0.0), ldl, std::nullopt});
    terms.push_back({cxd(-0.5, 0.0), std::nullopt, ldl});
    return Superoperator::from_terms(l.rows(), std::move(terms), opts);
}

namespace {

std::vector<Superoperator::Term> lindbladian_terms(const QuantumModel& m) {
    // G = -iH - 1/2 sum_k Lk^dag Lk; the drift is rho -> G rho + rho G^dag
    ComplexMatrix g = cxd(0.0, -1.0) * m.hamiltonian;
    for (const Detector& det : m.detectors) {
        ComplexMatrix ldl = det.op.adjoint() * det.op;
        ldl *= cxd(-0.5, 0.0);
        g += ldl;
    }
    std::vector<Superoperator::Term> terms;
    terms.push_back({cxd(1.0, 0.0), g, std::nullopt});
    terms.push_back({cxd(1.0, 0.0), std::nullopt, g.adjoint()});
    for (const Detector& det : m.detectors)
        terms.push_back({cxd(1.0, 0.0), det.op, det.op.adjoint()});
    return terms;
}

}  // namespace

Superoperator lindbladian(const QuantumModel& m, const SuperopOptions& opts) {
    require_valid(m);
    return Superoperator::from_terms(m.dim, lindbladian_terms(m), opts);
}

Superoperator jump_insertion(const Detector& det, const SuperopOptions& opts) {
    if (det.kind != DetectorKind::Jump)
        throw Error("superops", "jump_insertion requires a jump detector");
    std::vector<Superoperator::Term> terms;
    terms.push_back({cxd(det.theta, 0.0), std::nullopt, std::nullopt});
    terms.push_back({cxd(det.eta, 0.0), det.op, det.op.adjoint()});
    return Superoperator::from_terms(det.op.rows(), std::move(terms), opts);
}

Superoperator diff_insertion(const Detector& det, const SuperopOptions& opts) {
    if (det.kind != DetectorKind::Diffusive)
        throw Error("superops", "diff_insertion requires a diffusive detector");
    const cxd amp(std::sqrt(det.eta), 0.0);
    std::vector<Superoperator::Term> terms;
    terms.push_back({amp, det.op, std::nullopt});
    terms.push_back({amp, std::nullopt, det.op.adjoint()});
    return Superoperator::from_terms(det.op.rows(), std::move(terms), opts);
}

std::pair<Superoperator, Superoperator> kraus_maps_jump(const Detector& det,
                                                        const ComplexMatrix& h, double dt,
                                                        const SuperopOptions& opts) {
    if (det.kind != DetectorKind::Jump)
        throw Error("superops", "kraus_maps_jump requires a jump detector");
    if (dt <= 0.0) throw Error("superops", "kraus maps require dt > 0");
    const std::size_t d = det.op.rows();
    check_square(h, d, "hamiltonian");
    ComplexMatrix m0 = ComplexMatrix::identity(d);
    m0 += cxd(0.0, -dt) * h;
    m0 += cxd(-0.5 * dt, 0.0) * (det.op.adjoint() * det.op);
    const ComplexMatrix m0d = m0.adjoint();
    const ComplexMatrix vd = det.op.adjoint();

    std::vector<Superoperator::Term> k0_terms;
    k0_terms.push_back({cxd(1.0 - det.theta * dt, 0.0), m0, m0d});
    k0_terms.push_back({cxd((1.0 - det.eta) * dt, 0.0), det.op, vd});
    std::vector<Superoperator::Term> k1_terms;
    k1_terms.push_back({cxd(det.theta * dt, 0.0), m0, m0d});
    k1_terms.push_back({cxd(det.eta * dt, 0.0), det.op, vd});
    return {Superoperator::from_terms(d, std::move(k0_terms), opts),
            Superoperator::from_terms(d, std::move(k1_terms), opts)};
}

Superoperator kraus_map_diffusive(const Detector& det, const ComplexMatrix& h, double dt,
                                  double r, const SuperopOptions& opts) {
    if (det.kind != DetectorKind::Diffusive)
        throw Error("superops", "kraus_map_diffusive requires a diffusive detector");
    if (dt <= 0.0) throw Error("superops", "kraus maps require dt > 0");
    const std::size_t d = det.op.rows();
    check_square(h, d, "hamiltonian");
    ComplexMatrix mr = ComplexMatrix::identity(d);
    mr += cxd(0.0, -dt) * h;
    mr += cxd(-0.5 * dt, 0.0) * (det.op.adjoint() * det.op);
    mr += cxd(std::sqrt(det.eta) * r, 0.0) * det.op;
    std::vector<Superoperator::Term> terms;
    terms.push_back({cxd(1.0, 0.0), mr, mr.adjoint()});
    terms.push_back({cxd((1.0 - det.eta) * dt, 0.0), det.op, det.op.adjoint()});
    return Superoperator::from_terms(d, std::move(terms), opts);
}

Superoperator deformed_generator(const QuantumModel& m, std::span<const double> j,
                                 const SuperopOptions& opts) {
    if (j.size() != m.detectors.size())
        throw Error("superops", "deformed_generator needs one test-function value per detector");
    require_valid(m);
    std::vector<Superoperator::Term> terms = lindbladian_terms(m);
    for (std::size_t k = 0; k < m.detectors.size(); ++k) {
        const Detector& det = m.detectors[k];
        const double jk = j[k];
        if (det.kind == DetectorKind::Jump) {
            const double c = std::expm1(jk);  // e^j - 1
            if (c == 0.0) continue;
            terms.push_back({cxd(c * det.theta, 0.0), std::nullopt, std::nullopt});
            terms.push_back({cxd(c * det.eta, 0.0), det.op, det.op.adjoint()});
        } else {
            if (jk == 0.0) continue;
            const cxd amp(std::sqrt(det.eta) * jk, 0.0);
            terms.push_back({amp, det.op, std::nullopt});
            terms.push_back({amp, std::nullopt, det.op.adjoint()});
            terms.push_back({cxd(0.5 * jk * jk, 0.0), std::nullopt, std::nullopt});
        }
    }
    return Superoperator::from_terms(m.dim, std::move(terms), opts);
}

VectorizedState expm_action(const Superoperator& gen, const VectorizedState& v, double t,
                            const KrylovOptions& opts) {
    if (v.dim != gen.dim()) throw Error("superops", "expm_action dimension mismatch");
    VectorizedState out;
    out.dim = v.dim;
    out.data = expm_action(gen.as_linear_operator(), v.data, t, opts);
    return out;
}

}  // namespace smecorr
