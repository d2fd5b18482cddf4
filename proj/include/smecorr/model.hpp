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

#ifndef SMECORR_MODEL_HPP
#define SMECORR_MODEL_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "smecorr/complex_matrix.hpp"

namespace smecorr {

enum class DetectorKind { Jump, Diffusive };

/// One measurement channel. `op` is the coupling operator (often written L
/// for diffusive channels and V for counting channels), eta the detector
/// efficiency in (0,1], theta the dark count rate (jump detectors only).
struct Detector {
    std::string label;
    DetectorKind kind = DetectorKind::Jump;
    ComplexMatrix op;
    double eta = 1.0;
    double theta = 0.0;
};

struct QuantumModel {
    std::size_t dim = 0;
    ComplexMatrix hamiltonian;
    std::vector<Detector> detectors;

    /// Index of the detector with the given label; throws on unknown label.
    std::size_t detector_index(const std::string& label) const;
    const Detector& detector(const std::string& label) const {
        return detectors[detector_index(label)];
    }
};

struct Violation {
    std::string field;
    std::string message;
};

/// Empty result means the model satisfies every invariant. Violations are
/// data, not exceptions: callers decide whether to proceed.
std::vector<Violation> validate_model(const QuantumModel& m);

/// Throws Error("model", ...) listing all violations when any exist.
void require_valid(const QuantumModel& m);

/// Hermitian, unit-trace, positive-semidefinite (within fixed absolute
/// tolerances: hermiticity and trace 1e-12, minimum eigenvalue >= -1e-10).
class DensityMatrix {
public:
    static DensityMatrix from_matrix(const ComplexMatrix& m);
    static DensityMatrix from_ket(const std::vector<cxd>& ket);

    /// Hermitize, clip eigenvalues in [-neg_tol, 0) to zero and renormalize.
    /// Throws when an eigenvalue lies below -neg_tol.
    static DensityMatrix project_physical(const ComplexMatrix& m, double neg_tol);

    std::size_t dim() const noexcept { return matrix_.rows(); }
    const ComplexMatrix& matrix() const noexcept { return matrix_; }

private:
    explicit DensityMatrix(ComplexMatrix m) : matrix_(std::move(m)) {}
    ComplexMatrix matrix_;
};

/// Evaluates an operator expression over the primitives
///   identity(d), annihilation(d), pauli_x, pauli_y, pauli_z, projector(i,j,d)
/// with scalar literals (incl. `i`), + - * /, sqrt(scalar) and adjoint(expr).
/// The expression must evaluate to a matrix.
ComplexMatrix build_operator(const std::string& expr);

/// Same, but a scalar result c is promoted to c*identity(dim_hint).
ComplexMatrix build_operator(const std::string& expr, std::size_t dim_hint);

struct ZooModel {
    QuantumModel model;
    DensityMatrix rho0;
    double default_horizon;   // natural-unit time span used by the test suite
    std::string description;
};

/// Fixture models: decay_photodetect, qubit_homodyne_z,
/// driven_qubit_fluorescence, cavity_heterodyne, mixed_two_detector.
ZooModel model_zoo(const std::string& name);
std::vector<std::string> model_zoo_names();

struct LoadedModel {
    QuantumModel model;
    DensityMatrix rho0;
};

/// Reads the JSON model document format (see README: dim, hamiltonian as an
/// operator expression or [re,im] nested arrays, detectors, initial_state).
LoadedModel load_model_json(const std::string& text);
LoadedModel load_model_file(const std::string& path);

}  // namespace smecorr

#endif
