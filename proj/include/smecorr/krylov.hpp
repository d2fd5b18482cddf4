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

#ifndef SMECORR_KRYLOV_HPP
#define SMECORR_KRYLOV_HPP

#include <cstddef>
#include <functional>
#include <vector>

#include "smecorr/complex_matrix.hpp"

namespace smecorr {

/// Matrix-free linear map on complex vectors: out = op(in), both length dim.
struct LinearOperator {
    std::size_t dim = 0;
    std::function<void(const cxd* in, cxd* out)> apply;
};

struct KrylovOptions {
    int max_dim = 30;          // Arnoldi subspace size
    double tol = 1e-10;        // 2-norm error target, relative to ||v||
    int max_substeps = 100000; // adaptive sub-stepping budget
};

/// Approximates exp(t*op) applied to v by Arnoldi iteration with adaptive
/// sub-stepping (step halved on a rejected local error estimate). Throws
/// Error("linalg-core", ...) when the budget is exhausted; accuracy is never
/// silently degraded.
std::vector<cxd> expm_action(const LinearOperator& op, std::vector<cxd> v, double t,
                             const KrylovOptions& opts = {});

}  // namespace smecorr

#endif
