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

#include "smecorr/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "smecorr/errors.hpp"
#include "smecorr/kernels.hpp"

namespace smecorr {

VectorizedState vectorize(const ComplexMatrix& m) {
    if (m.rows() != m.cols()) throw Error("linalg-core", "vectorize requires a square matrix");
    VectorizedState v;
    v.dim = m.rows();
    v.data.assign(m.data(), m.data() + m.rows() * m.cols());
    return v;
}

ComplexMatrix devectorize(const VectorizedState& v) {
    if (v.data.size() != v.dim * v.dim)
        throw Error("linalg-core", "devectorize: data length does not equal dim^2");
    ComplexMatrix m(v.dim, v.dim);
    std::copy(v.data.begin(), v.data.end(), m.data());
    return m;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix r(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t ja = 0; ja < a.cols(); ++ja)
        for (std::size_t ia = 0; ia < a.rows(); ++ia) {
            const cxd w = a(ia, ja);
            if (w == cxd(0.0, 0.0)) continue;
            for (std::size_t jb = 0; jb < b.cols(); ++jb)
                for (std::size_t ib = 0; ib < b.rows(); ++ib)
                    r(ia * b.rows() + ib, ja * b.cols() + jb) = w * b(ib, jb);
        }
    return r;
}

ComplexMatrix lu_solve(ComplexMatrix a, ComplexMatrix b) {
    if (a.rows() != a.cols()) throw Error("linalg-core", "lu_solve: matrix must be square");
    if (b.rows() != a.rows()) throw Error("linalg-core", "lu_solve: rhs row count mismatch");
    const std::size_t n = a.rows();
    const std::size_t nrhs = b.cols();

    for (std::size_t k = 0; k < n; ++k) {
        // partial pivot
        std::size_t piv = k;
        double best = std::abs(a(k, k));
        for (std::size_t i = k + 1; i < n; ++i) {
            const double v = std::abs(a(i, k));
            if (v > best) {
                best = v;
                piv = i;
            }
        }
        if (best == 0.0) throw Error("linalg-core", "lu_solve: singular matrix");
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
            for (std::size_t j = 0; j < nrhs; ++j) std::swap(b(k, j), b(piv, j));
        }
        const cxd inv_akk = cxd(1.0, 0.0) / a(k, k);
        for (std::size_t i = k + 1; i < n; ++i) a(i, k) *= inv_akk;
        if (k + 1 < n) {
            // trailing update as a rank-1 gemm: A22 -= A21 * A12
            kernels::zgemm_acc(n - k - 1, 1, n - k - 1, cxd(-1.0, 0.0), &a(k + 1, k), n,
                               &a(k, k + 1), n, &a(k + 1, k + 1), n);
        }
    }

    // forward substitution with unit lower triangle
    for (std::size_t k = 0; k + 1 < n; ++k)
        kernels::zgemm_acc(n - k - 1, 1, nrhs, cxd(-1.0, 0.0), &a(k + 1, k), n, &b(k, 0), n,
                           &b(k + 1, 0), n);

    // back substitution
    for (std::size_t kk = n; kk-- > 0;) {
        const cxd inv = cxd(1.0, 0.0) / a(kk, kk);
        for (std::size_t j = 0; j < nrhs; ++j) b(kk, j) *= inv;
        if (kk > 0)
            kernels::zgemm_acc(kk, 1, nrhs, cxd(-1.0, 0.0), &a(0, kk), n, &b(kk, 0), n, &b(0, 0),
                               n);
    }
    return b;
}

ComplexMatrix expm_dense(const ComplexMatrix& a, std::size_t max_dim) {
    if (a.rows() != a.cols()) throw Error("linalg-core", "expm_dense: matrix must be square");
    if (a.rows() > max_dim) throw Error("linalg-core", "expm_dense: size exceeds dense cutoff");
    if (!a.all_finite()) throw Error("linalg-core", "expm_dense: non-finite entries");

    // degree-13 Pade with scaling and squaring
    static const double b[14] = {64764752532480000.0,
                                 32382376266240000.0,
                                 7771770303897600.0,
                                 1187353796428800.0,
                                 129060195264000.0,
                                 10559470521600.0,
                                 670442572800.0,
                                 33522128640.0,
                                 1323241920.0,
                                 40840800.0,
                                 960960.0,
                                 16380.0,
                                 182.0,
                                 1.0};
    const double theta13 = 5.371920351148152;

    const std::size_t n = a.rows();
    const double nrm = a.one_norm();
    int s = 0;
    if (nrm > theta13) s = static_cast<int>(std::ceil(std::log2(nrm / theta13)));

    ComplexMatrix x = a;
    if (s > 0) x *= cxd(std::ldexp(1.0, -s), 0.0);

    const ComplexMatrix eye = ComplexMatrix::identity(n);
    const ComplexMatrix x2 = x * x;
    const ComplexMatrix x4 = x2 * x2;
    const ComplexMatrix x6 = x2 * x4;

    ComplexMatrix w = b[13] * x6 + b[11] * x4 + b[9] * x2;
    ComplexMatrix u = x6 * w;
    u += b[7] * x6 + b[5] * x4 + b[3] * x2 + b[1] * eye;
    u = x * u;

    ComplexMatrix w2 = b[12] * x6 + b[10] * x4 + b[8] * x2;
    ComplexMatrix v = x6 * w2;
    v += b[6] * x6 + b[4] * x4 + b[2] * x2 + b[0] * eye;

    ComplexMatrix f = lu_solve(v - u, v + u);
    for (int i = 0; i < s; ++i) f = f * f;
    return f;
}

namespace {

double offdiag_fro(const ComplexMatrix& a) {
    double acc = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j)
        for (std::size_t i = 0; i < a.rows(); ++i)
            if (i != j) acc += std::norm(a(i, j));
    return std::sqrt(acc);
}

}  // namespace

HermitianEig eigh(const ComplexMatrix& input) {
    if (input.rows() != input.cols()) throw Error("linalg-core", "eigh: matrix must be square");
    const std::size_t n = input.rows();

    // symmetrize so roundoff-level non-Hermiticity cannot stall convergence
    ComplexMatrix a(n, n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i)
            a(i, j) = 0.5 * (input(i, j) + std::conj(input(j, i)));

    ComplexMatrix v = ComplexMatrix::identity(n);
    const double stop = 1e-15 * std::max(1.0, a.frobenius_norm());

    for (int sweep = 0; sweep < 60; ++sweep) {
        if (offdiag_fro(a) <= stop) break;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const cxd apq = a(p, q);
                const double g = std::abs(apq);
                if (g <= 1e-300) continue;
                const cxd omega = apq / g;  // phase of the off-diagonal entry
                const double alpha = a(p, p).real();
                const double beta = a(q, q).real();
                const double tau = (beta - alpha) / (2.0 * g);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double sn = t * c;
                const cxd so = sn * omega;           // U(p,q)-ish factor
                const cxd soc = sn * std::conj(omega);

                for (std::size_t k = 0; k < n; ++k) {
                    if (k == p || k == q) continue;
                    const cxd akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - soc * akq;
                    a(k, q) = so * akp + c * akq;
                    a(p, k) = std::conj(a(k, p));
                    a(q, k) = std::conj(a(k, q));
                }
                a(p, p) = alpha - t * g;
                a(q, q) = beta + t * g;
                a(p, q) = 0.0;
                a(q, p) = 0.0;

                for (std::size_t k = 0; k < n; ++k) {
                    const cxd vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - soc * vkq;
                    v(k, q) = so * vkp + c * vkq;
                }
            }
        }
    }

    HermitianEig out;
    out.values.resize(n);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> diag(n);
    for (std::size_t i = 0; i < n; ++i) diag[i] = a(i, i).real();
    std::sort(order.begin(), order.end(),
              [&](std::size_t x, std::size_t y) { return diag[x] < diag[y]; });
    out.vectors = ComplexMatrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = diag[order[k]];
        for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
    }
    return out;
}

}  // namespace smecorr
