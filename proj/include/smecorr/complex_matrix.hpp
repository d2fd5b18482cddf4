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

#ifndef SMECORR_COMPLEX_MATRIX_HPP
#define SMECORR_COMPLEX_MATRIX_HPP

#include <complex>
#include <cstddef>
#include <vector>

namespace smecorr {

using cxd = std::complex<double>;

/// Dense complex matrix, column-major: entry (i,j) lives at data[i + rows*j].
/// This is also the project-wide vectorization convention: the flat data of a
/// d x d matrix *is* its column-stacked vector.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols);  // zero-filled

    static ComplexMatrix identity(std::size_t n);
    static ComplexMatrix from_rows(const std::vector<std::vector<cxd>>& rows);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return data_.empty(); }

    cxd& operator()(std::size_t i, std::size_t j) { return data_[i + rows_ * j]; }
    cxd operator()(std::size_t i, std::size_t j) const { return data_[i + rows_ * j]; }

    cxd* data() noexcept { return data_.data(); }
    const cxd* data() const noexcept { return data_.data(); }

    ComplexMatrix& operator+=(const ComplexMatrix& rhs);
    ComplexMatrix& operator-=(const ComplexMatrix& rhs);
    ComplexMatrix& operator*=(cxd scalar);

    friend ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs) {
        lhs += rhs;
        return lhs;
    }
    friend ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs) {
        lhs -= rhs;
        return lhs;
    }
    friend ComplexMatrix operator*(cxd s, ComplexMatrix m) {
        m *= s;
        return m;
    }
    friend ComplexMatrix operator*(ComplexMatrix m, cxd s) {
        m *= s;
        return m;
    }
    friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

    ComplexMatrix adjoint() const;
    ComplexMatrix transpose() const;

    cxd trace() const;
    double frobenius_norm() const;
    double one_norm() const;  // max column sum of |entry|
    double max_abs() const;
    bool all_finite() const;

    /// ||A - A^dag||_F
    double hermiticity_defect() const;

    bool same_shape(const ComplexMatrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cxd> data_;
};

/// C += alpha * A * B (shape-checked)
void gemm_acc(cxd alpha, const ComplexMatrix& a, const ComplexMatrix& b, ComplexMatrix& c);

}  // namespace smecorr

#endif
