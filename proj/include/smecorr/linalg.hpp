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

#ifndef SMECORR_LINALG_HPP
#define SMECORR_LINALG_HPP

#include <cstddef>
#include <vector>

#include "smecorr/complex_matrix.hpp"

namespace smecorr {

/// Column-stacked d x d matrix: data[i + d*j] = m(i,j). Fixed project-wide;
/// superoperators materialize as B^T (x) A under this convention and mixing
/// conventions corrupts them silently, hence the round-trip test.
struct VectorizedState {
    std::size_t dim = 0;          // Hilbert dimension d
    std::vector<cxd> data;        // length d*d

    static VectorizedState zero(std::size_t dim) {
        return {dim, std::vector<cxd>(dim * dim, cxd(0.0, 0.0))};
    }
};

VectorizedState vectorize(const ComplexMatrix& m);
ComplexMatrix devectorize(const VectorizedState& v);

/// Kronecker product a (x) b.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Solve A X = B for X (partial-pivot LU). A is consumed by value.
ComplexMatrix lu_solve(ComplexMatrix a, ComplexMatrix b);

/// Matrix exponential by scaling-and-squaring with degree-13 Pade.
/// Throws when n exceeds `max_dim` or entries are not finite.
ComplexMatrix expm_dense(const ComplexMatrix& a, std::size_t max_dim = 4096);

struct HermitianEig {
    std::vector<double> values;   // ascending
    ComplexMatrix vectors;        // column k is the eigenvector of values[k]
};

/// Cyclic Jacobi eigensolver for Hermitian matrices. Input is assumed
/// Hermitian up to roundoff; only the Hermitian part is seen.
HermitianEig eigh(const ComplexMatrix& a);

}  // namespace smecorr

#endif
