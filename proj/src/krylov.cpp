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

#include "smecorr/krylov.hpp"

#include <cmath>

#include "smecorr/errors.hpp"
#include "smecorr/kernels.hpp"
#include "smecorr/linalg.hpp"

namespace smecorr {

namespace {

double vec_norm(const std::vector<cxd>& v) {
    return std::sqrt(kernels::znrm2sq(v.size(), v.data()));
}

}  // namespace

std::vector<cxd> expm_action(const LinearOperator& op, std::vector<cxd> v, double t,
                             const KrylovOptions& opts) {
    const std::size_t n = op.dim;
    if (v.size() != n) throw Error("linalg-core", "expm_action: vector length mismatch");
    if (t < 0.0) throw Error("linalg-core", "expm_action: negative time");
    if (opts.tol <= 0.0) throw Error("linalg-core", "expm_action: tolerance must be positive");
    if (t == 0.0) return v;

    const double beta0 = vec_norm(v);
    if (!std::isfinite(beta0)) throw Error("linalg-core", "expm_action: non-finite input");
    if (beta0 == 0.0) return v;

    const int m = static_cast<int>(std::min<std::size_t>(opts.max_dim, n));
    std::vector<std::vector<cxd>> basis(m + 1, std::vector<cxd>(n));
    std::vector<cxd> w(n);
    ComplexMatrix hess(m + 1, m + 1);

    double t_done = 0.0;
    double tau = t;
    int attempts = 0;

    while (t_done < t) {
        const double beta = vec_norm(v);
        if (beta == 0.0) break;  // zero stays zero under a linear map

        // Arnoldi factorization of the current vector; independent of the
        // substep length, so rejected steps reuse it
        for (std::size_t i = 0; i < n; ++i) basis[0][i] = v[i] / beta;
        for (int j = 0; j <= m; ++j)
            for (int i = 0; i <= m; ++i) hess(i, j) = 0.0;

        int k = m;
        bool breakdown = false;
        double hmax = 0.0;
        for (int j = 0; j < m; ++j) {
            op.apply(basis[j].data(), w.data());
            for (int pass = 0; pass < 2; ++pass) {  // one re-orthogonalization sweep
                for (int i = 0; i <= j; ++i) {
                    const cxd hij = kernels::zdotc(n, basis[i].data(), w.data());
                    kernels::zaxpy(n, -hij, basis[i].data(), w.data());
                    hess(i, j) += hij;
                }
            }
            for (int i = 0; i <= j; ++i) hmax = std::max(hmax, std::abs(hess(i, j)));
            const double h_next = vec_norm(w);
            hess(j + 1, j) = h_next;
            if (h_next <= 1e-12 * std::max(1.0, hmax)) {
                k = j + 1;
                breakdown = true;  // invariant subspace: the projection is exact
                break;
            }
            for (std::size_t i = 0; i < n; ++i) basis[j + 1][i] = w[i] / h_next;
        }

        const double hnorm = [&] {
            double best = 0.0;
            for (int j = 0; j < k; ++j) {
                double s = 0.0;
                for (int i = 0; i < std::min(k, j + 2); ++i) s += std::abs(hess(i, j));
                best = std::max(best, s);
            }
            return best;
        }();

        bool advanced = false;
        while (!advanced) {
            if (++attempts > opts.max_substeps)
                throw Error("linalg-core",
                               "expm_action: sub-step budget exhausted without convergence");
            tau = std::min(tau, t - t_done);

            // keep the projected exponential well scaled before trusting the
            // local error estimate
            if (!breakdown && tau * hnorm > 25.0) {
                tau *= 0.5;
                continue;
            }

            ComplexMatrix h_small(k, k);
            for (int j = 0; j < k; ++j)
                for (int i = 0; i < k; ++i) h_small(i, j) = tau * hess(i, j);
            const ComplexMatrix f = expm_dense(h_small);

            double err_loc = 0.0;
            if (!breakdown) err_loc = beta * hess(k, k - 1).real() * std::abs(f(k - 1, 0));
            const double allowed = opts.tol * beta0 * (tau / t);

            if (breakdown || err_loc <= 0.5 * allowed) {
                for (std::size_t i = 0; i < n; ++i) v[i] = 0.0;
                for (int j = 0; j < k; ++j)
                    kernels::zaxpy(n, beta * f(j, 0), basis[j].data(), v.data());
                t_done += tau;
                advanced = true;
                if (breakdown)
                    tau = t - t_done;
                else if (err_loc < 0.05 * allowed)
                    tau *= 2.0;
            } else {
                tau *= 0.5;
                if (tau < t * 1e-15)
                    throw Error("linalg-core",
                                   "expm_action: step size underflow without convergence");
            }
        }
    }
    return v;
}

}  // namespace smecorr
