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

#include "smecorr/kernels.hpp"

// Reference kernels. Written with explicit real arithmetic so the compiler
// does not emit __muldc3 calls (std::complex operator* guards against
// inf/nan operands, which we never feed these loops).

namespace smecorr::kernels {

namespace {

void s_zaxpy(std::size_t n, cxd a, const cxd* x, cxd* y) {
    const double ar = a.real(), ai = a.imag();
    const double* xp = reinterpret_cast<const double*>(x);
    double* yp = reinterpret_cast<double*>(y);
    for (std::size_t i = 0; i < n; ++i) {
        const double xr = xp[2 * i], xi = xp[2 * i + 1];
        yp[2 * i] += ar * xr - ai * xi;
        yp[2 * i + 1] += ar * xi + ai * xr;
    }
}

void s_zscal(std::size_t n, cxd a, cxd* x) {
    const double ar = a.real(), ai = a.imag();
    double* xp = reinterpret_cast<double*>(x);
    for (std::size_t i = 0; i < n; ++i) {
        const double xr = xp[2 * i], xi = xp[2 * i + 1];
        xp[2 * i] = ar * xr - ai * xi;
        xp[2 * i + 1] = ar * xi + ai * xr;
    }
}

cxd s_zdotc(std::size_t n, const cxd* x, const cxd* y) {
    const double* xp = reinterpret_cast<const double*>(x);
    const double* yp = reinterpret_cast<const double*>(y);
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double xr = xp[2 * i], xi = xp[2 * i + 1];
        const double yr = yp[2 * i], yi = yp[2 * i + 1];
        re += xr * yr + xi * yi;
        im += xr * yi - xi * yr;
    }
    return {re, im};
}

double s_znrm2sq(std::size_t n, const cxd* x) {
    const double* xp = reinterpret_cast<const double*>(x);
    double acc = 0.0;
    for (std::size_t i = 0; i < 2 * n; ++i) acc += xp[i] * xp[i];
    return acc;
}

void s_zgemm_acc(std::size_t m, std::size_t k, std::size_t n, cxd alpha,
                 const cxd* a, std::size_t lda, const cxd* b, std::size_t ldb,
                 cxd* c, std::size_t ldc) {
    if (alpha == cxd(0.0, 0.0)) return;
    const double alr = alpha.real(), ali = alpha.imag();
    for (std::size_t j = 0; j < n; ++j) {
        double* cj = reinterpret_cast<double*>(c + j * ldc);
        for (std::size_t p = 0; p < k; ++p) {
            const cxd bv = b[p + j * ldb];
            const double wr = alr * bv.real() - ali * bv.imag();
            const double wi = alr * bv.imag() + ali * bv.real();
            if (wr == 0.0 && wi == 0.0) continue;
            const double* ap = reinterpret_cast<const double*>(a + p * lda);
            for (std::size_t i = 0; i < m; ++i) {
                const double xr = ap[2 * i], xi = ap[2 * i + 1];
                cj[2 * i] += wr * xr - wi * xi;
                cj[2 * i + 1] += wr * xi + wi * xr;
            }
        }
    }
}

}  // namespace

const Backend& scalar_backend() {
    static const Backend b{"scalar", s_zaxpy, s_zscal, s_zdotc, s_znrm2sq, s_zgemm_acc};
    return b;
}

}  // namespace smecorr::kernels
