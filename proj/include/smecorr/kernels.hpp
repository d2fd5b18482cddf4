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

#ifndef SMECORR_KERNELS_HPP
#define SMECORR_KERNELS_HPP

#include <complex>
#include <cstddef>

// Complex double-precision inner loops used by the rest of the library.
// Two implementations exist: a scalar reference and an AVX2+FMA variant.
// The active backend is chosen once at startup from CPUID and can be
// forced with SMECORR_KERNELS=scalar|avx2 (useful for equivalence tests).
//
// All matrices are column-major. zgemm_acc accumulates: C += alpha * A * B.

namespace smecorr::kernels {

using cxd = std::complex<double>;

struct Backend {
    const char* name;
    // y[i] += a * x[i]
    void (*zaxpy)(std::size_t n, cxd a, const cxd* x, cxd* y);
    // x[i] *= a
    void (*zscal)(std::size_t n, cxd a, cxd* x);
    // sum_i conj(x[i]) * y[i]
    cxd (*zdotc)(std::size_t n, const cxd* x, const cxd* y);
    // sum_i |x[i]|^2
    double (*znrm2sq)(std::size_t n, const cxd* x);
    // C(m x n) += alpha * A(m x k) * B(k x n), column-major with leading dims
    void (*zgemm_acc)(std::size_t m, std::size_t k, std::size_t n, cxd alpha,
                      const cxd* a, std::size_t lda, const cxd* b, std::size_t ldb,
                      cxd* c, std::size_t ldc);
};

const Backend& scalar_backend();

// Only meaningful when avx2_supported(); otherwise aliases the scalar backend.
const Backend& avx2_backend();
bool avx2_supported();

// Runtime-selected backend (CPUID + optional SMECORR_KERNELS override).
const Backend& active();

inline void zaxpy(std::size_t n, cxd a, const cxd* x, cxd* y) { active().zaxpy(n, a, x, y); }
inline void zscal(std::size_t n, cxd a, cxd* x) { active().zscal(n, a, x); }
inline cxd zdotc(std::size_t n, const cxd* x, const cxd* y) { return active().zdotc(n, x, y); }
inline double znrm2sq(std::size_t n, const cxd* x) { return active().znrm2sq(n, x); }
inline void zgemm_acc(std::size_t m, std::size_t k, std::size_t n, cxd alpha,
                      const cxd* a, std::size_t lda, const cxd* b, std::size_t ldb,
                      cxd* c, std::size_t ldc) {
    active().zgemm_acc(m, k, n, alpha, a, lda, b, ldb, c, ldc);
}

}  // namespace smecorr::kernels

#endif
