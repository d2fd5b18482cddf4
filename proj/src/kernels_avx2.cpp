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

// AVX2+FMA kernels. One __m256d holds two complex doubles [re0 im0 re1 im1].
// Complex multiply by a broadcast scalar w:
//   re' = wr*re - wi*im,  im' = wr*im + wi*re
// computed as fmaddsub(x, wr, swap(x)*wi). This TU is compiled with
// -mavx2 -mfma on x86_64 only; callers go through the runtime dispatch.

#if defined(__x86_64__) || defined(_M_X64)
#include <immintrin.h>

namespace smecorr::kernels {

namespace {

inline __m256d cmul_bcast(__m256d x, __m256d wr, __m256d wi) {
    const __m256d xs = _mm256_permute_pd(x, 0x5);
    return _mm256_fmaddsub_pd(x, wr, _mm256_mul_pd(xs, wi));
}

void v_zaxpy(std::size_t n, cxd a, const cxd* x, cxd* y) {
    const __m256d wr = _mm256_set1_pd(a.real());
    const __m256d wi = _mm256_set1_pd(a.imag());
    const double* xp = reinterpret_cast<const double*>(x);
    double* yp = reinterpret_cast<double*>(y);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d xv = _mm256_loadu_pd(xp + 2 * i);
        const __m256d yv = _mm256_loadu_pd(yp + 2 * i);
        _mm256_storeu_pd(yp + 2 * i, _mm256_add_pd(yv, cmul_bcast(xv, wr, wi)));
    }
    if (i < n) {
        const double xr = xp[2 * i], xi = xp[2 * i + 1];
        yp[2 * i] += a.real() * xr - a.imag() * xi;
        yp[2 * i + 1] += a.real() * xi + a.imag() * xr;
    }
}

void v_zscal(std::size_t n, cxd a, cxd* x) {
    const __m256d wr = _mm256_set1_pd(a.real());
    const __m256d wi = _mm256_set1_pd(a.imag());
    double* xp = reinterpret_cast<double*>(x);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d xv = _mm256_loadu_pd(xp + 2 * i);
        _mm256_storeu_pd(xp + 2 * i, cmul_bcast(xv, wr, wi));
    }
    if (i < n) {
        const double xr = xp[2 * i], xi = xp[2 * i + 1];
        xp[2 * i] = a.real() * xr - a.imag() * xi;
        xp[2 * i + 1] = a.real() * xi + a.imag() * xr;
    }
}

inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

cxd v_zdotc(std::size_t n, const cxd* x, const cxd* y) {
    const double* xp = reinterpret_cast<const double*>(x);
    const double* yp = reinterpret_cast<const double*>(y);
    __m256d acc_re = _mm256_setzero_pd();
    __m256d acc_im = _mm256_setzero_pd();
    // sign mask flipping the even (real) lanes: conj(x)*y imag = xr*yi - xi*yr
    const __m256d neg_even = _mm256_set_pd(0.0, -0.0, 0.0, -0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d xv = _mm256_loadu_pd(xp + 2 * i);
        const __m256d yv = _mm256_loadu_pd(yp + 2 * i);
        acc_re = _mm256_fmadd_pd(xv, yv, acc_re);
        const __m256d xs = _mm256_xor_pd(_mm256_permute_pd(xv, 0x5), neg_even);
        acc_im = _mm256_fmadd_pd(xs, yv, acc_im);
    }
    double re = hsum(acc_re), im = hsum(acc_im);
    for (; i < n; ++i) {
        const double xr = xp[2 * i], xi = xp[2 * i + 1];
        const double yr = yp[2 * i], yi = yp[2 * i + 1];
        re += xr * yr + xi * yi;
        im += xr * yi - xi * yr;
    }
    return {re, im};
}

double v_znrm2sq(std::size_t n, const cxd* x) {
    const double* xp = reinterpret_cast<const double*>(x);
    const std::size_t len = 2 * n;
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= len; i += 4) {
        const __m256d v = _mm256_loadu_pd(xp + i);
        acc = _mm256_fmadd_pd(v, v, acc);
    }
    double s = hsum(acc);
    for (; i < len; ++i) s += xp[i] * xp[i];
    return s;
}

void v_zgemm_acc(std::size_t m, std::size_t k, std::size_t n, cxd alpha,
                 const cxd* a, std::size_t lda, const cxd* b, std::size_t ldb,
                 cxd* c, std::size_t ldc) {
    if (alpha == cxd(0.0, 0.0)) return;
    const double alr = alpha.real(), ali = alpha.imag();
    for (std::size_t j = 0; j < n; ++j) {
        double* cj = reinterpret_cast<double*>(c + j * ldc);
        for (std::size_t p = 0; p < k; ++p) {
            const cxd bv = b[p + j * ldb];
            const double wre = alr * bv.real() - ali * bv.imag();
            const double wim = alr * bv.imag() + ali * bv.real();
            if (wre == 0.0 && wim == 0.0) continue;
            const __m256d wr = _mm256_set1_pd(wre);
            const __m256d wi = _mm256_set1_pd(wim);
            const double* ap = reinterpret_cast<const double*>(a + p * lda);
            std::size_t i = 0;
            for (; i + 2 <= m; i += 2) {
                const __m256d av = _mm256_loadu_pd(ap + 2 * i);
                const __m256d cv = _mm256_loadu_pd(cj + 2 * i);
                _mm256_storeu_pd(cj + 2 * i, _mm256_add_pd(cv, cmul_bcast(av, wr, wi)));
            }
            if (i < m) {
                const double xr = ap[2 * i], xi = ap[2 * i + 1];
                cj[2 * i] += wre * xr - wim * xi;
                cj[2 * i + 1] += wre * xi + wim * xr;
            }
        }
    }
}

}  // namespace

const Backend& avx2_backend() {
    static const Backend b{"avx2", v_zaxpy, v_zscal, v_zdotc, v_znrm2sq, v_zgemm_acc};
    return b;
}

}  // namespace smecorr::kernels

#else

namespace smecorr::kernels {
const Backend& avx2_backend() { return scalar_backend(); }
}  // namespace smecorr::kernels

#endif
