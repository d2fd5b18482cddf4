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

#include "smecorr/complex_matrix.hpp"

#include <cmath>
#include <cstdlib>

#include "smecorr/errors.hpp"
#include "smecorr/kernels.hpp"

namespace smecorr {

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, cxd(0.0, 0.0)) {
    if (rows == 0 || cols == 0) throw Error("linalg-core", "matrix dimensions must be >= 1");
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::from_rows(const std::vector<std::vector<cxd>>& rows) {
    if (rows.empty() || rows.front().empty())
        throw Error("linalg-core", "from_rows: empty matrix literal");
    ComplexMatrix m(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != m.cols())
            throw Error("linalg-core", "from_rows: ragged matrix literal");
        for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
    }
    return m;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& rhs) {
    if (!same_shape(rhs)) throw Error("linalg-core", "matrix addition shape mismatch");
    kernels::zaxpy(data_.size(), cxd(1.0, 0.0), rhs.data_.data(), data_.data());
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& rhs) {
    if (!same_shape(rhs)) throw Error("linalg-core", "matrix subtraction shape mismatch");
    kernels::zaxpy(data_.size(), cxd(-1.0, 0.0), rhs.data_.data(), data_.data());
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cxd scalar) {
    kernels::zscal(data_.size(), scalar, data_.data());
    return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows()) throw Error("linalg-core", "matrix product shape mismatch");
    ComplexMatrix c(a.rows(), b.cols());
    gemm_acc(cxd(1.0, 0.0), a, b, c);
    return c;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix r(cols_, rows_);
    for (std::size_t j = 0; j < cols_; ++j)
        for (std::size_t i = 0; i < rows_; ++i) r(j, i) = std::conj((*this)(i, j));
    return r;
}

ComplexMatrix ComplexMatrix::transpose() const {
    ComplexMatrix r(cols_, rows_);
    for (std::size_t j = 0; j < cols_; ++j)
        for (std::size_t i = 0; i < rows_; ++i) r(j, i) = (*this)(i, j);
    return r;
}

cxd ComplexMatrix::trace() const {
    if (rows_ != cols_) throw Error("linalg-core", "trace of non-square matrix");
    cxd t(0.0, 0.0);
    for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
    return t;
}

double ComplexMatrix::frobenius_norm() const {
    return std::sqrt(kernels::znrm2sq(data_.size(), data_.data()));
}

double ComplexMatrix::one_norm() const {
    double best = 0.0;
    for (std::size_t j = 0; j < cols_; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < rows_; ++i) s += std::abs((*this)(i, j));
        if (s > best) best = s;
    }
    return best;
}

double ComplexMatrix::max_abs() const {
    double best = 0.0;
    for (const cxd& v : data_) best = std::max(best, std::abs(v));
    return best;
}

bool ComplexMatrix::all_finite() const {
    for (const cxd& v : data_)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
}

double ComplexMatrix::hermiticity_defect() const {
    if (rows_ != cols_) throw Error("linalg-core", "hermiticity defect of non-square matrix");
    double acc = 0.0;
    for (std::size_t j = 0; j < cols_; ++j)
        for (std::size_t i = 0; i < rows_; ++i) {
            const cxd d = (*this)(i, j) - std::conj((*this)(j, i));
            acc += std::norm(d);
        }
    return std::sqrt(acc);
}

void gemm_acc(cxd alpha, const ComplexMatrix& a, const ComplexMatrix& b, ComplexMatrix& c) {
    if (a.cols() != b.rows() || c.rows() != a.rows() || c.cols() != b.cols())
        throw Error("linalg-core", "gemm_acc shape mismatch");
    kernels::zgemm_acc(a.rows(), a.cols(), b.cols(), alpha, a.data(), a.rows(), b.data(),
                       b.rows(), c.data(), c.rows());
}

}  // namespace smecorr
