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

#ifndef SMECORR_SUPEROP_HPP
#define SMECORR_SUPEROP_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "smecorr/complex_matrix.hpp"
#include "smecorr/krylov.hpp"
#include "smecorr/linalg.hpp"
#include "smecorr/model.hpp"

namespace smecorr {

struct SuperopOptions {
    // materialize the d^2 x d^2 matrix when d < this bound; above it only the
    // factor-pair action is kept (O(d^3) per term instead of O(d^4))
    std::size_t materialize_below_dim = 64;
    // cross-check the two forms on 20 random states at construction (d <= 16)
    bool construction_check = true;
};

struct SuperopWorkspace {
    std::vector<cxd> scratch;
};

/// Linear map on density matrices, stored as a list of factor-pair terms
///   rho  |->  sum_k  coeff_k * L_k rho R_k
/// with absent factors meaning the identity (so a pure scalar term is
/// coeff * rho). The materialized d^2 x d^2 matrix is a derived artifact of
/// the same term list, built under the column-stacking convention
/// vec(A rho B) = (B^T (x) A) vec(rho).
class Superoperator {
public:
    struct Term {
        cxd coeff{1.0, 0.0};
        std::optional<ComplexMatrix> left;
        std::optional<ComplexMatrix> right;
    };

    static Superoperator from_terms(std::size_t dim, std::vector<Term> terms,
                                    const SuperopOptions& opts = {});

    std::size_t dim() const noexcept { return dim_; }
    std::size_t liouville_dim() const noexcept { return dim_ * dim_; }
    const std::vector<Term>& terms() const noexcept { return terms_; }

    /// out = S(in); in/out are length-d^2 column-stacked states, in != out.
    void apply(const cxd* in, cxd* out, SuperopWorkspace& ws) const;
    /// out += scale * S(in)
    void apply_acc(const cxd* in, cxd* out, cxd scale, SuperopWorkspace& ws) const;

    VectorizedState apply(const VectorizedState& v) const;
    ComplexMatrix apply(const ComplexMatrix& rho) const;

    /// Present when d < materialize_below_dim.
    const ComplexMatrix* materialized() const noexcept {
        return materialized_ ? &*materialized_ : nullptr;
    }
    /// Always computes the dense form from the terms.
    ComplexMatrix materialize() const;

    /// Matrix-free view for expm_action. The superoperator must outlive the
    /// returned operator; the closure owns its own scratch, so obtain one
    /// operator per thread.
    LinearOperator as_linear_operator() const;

private:
    void accumulate_term(const Term& t, const cxd* in, cxd* out, cxd scale,
                         SuperopWorkspace& ws) const;

    std::size_t dim_ = 0;
    std::vector<Term> terms_;
    std::optional<ComplexMatrix> materialized_;
};

/// D[L](rho) = L rho L^dag - 1/2 {L^dag L, rho}
Superoperator dissipator(const ComplexMatrix& l, const SuperopOptions& opts = {});

/// Full generator of the unconditioned evolution: -i[H, rho] plus the
/// dissipator of every detector operator, jump and diffusive alike.
Superoperator lindbladian(const QuantumModel& m, const SuperopOptions& opts = {});

/// rho |-> theta rho + eta V rho V^dag   (jump detectors)
Superoperator jump_insertion(const Detector& det, const SuperopOptions& opts = {});

/// rho |-> sqrt(eta) (L rho + rho L^dag)   (diffusive detectors)
Superoperator diff_insertion(const Detector& det, const SuperopOptions& opts = {});

/// Discrete-time partial Kraus maps of a jump detector over one step dt:
/// K0 (no click) and K1 (click), built from M0 = I - iH dt - 1/2 V^dag V dt
/// and M1 = V sqrt(dt) with dark counts and efficiency folded in.
std::pair<Superoperator, Superoperator> kraus_maps_jump(const Detector& det,
                                                        const ComplexMatrix& h, double dt,
                                                        const SuperopOptions& opts = {});

/// Partial Kraus map of a diffusive detector for measurement result r:
/// K_r(rho) = M_r rho M_r^dag + (1-eta) L rho L^dag dt,
/// M_r = I - iH dt - 1/2 L^dag L dt + sqrt(eta) L r.
Superoperator kraus_map_diffusive(const Detector& det, const ComplexMatrix& h, double dt,
                                  double r, const SuperopOptions& opts = {});

/// Generator deformed by per-detector test-function values j (one per
/// detector, in model order): the Lindbladian plus
///   (e^j - 1)(theta I + eta V_x)            for each jump detector,
///   sqrt(eta) j L_+ + (j^2/2) I             for each diffusive detector.
/// With all j = 0 this is the Lindbladian, term for term.
Superoperator deformed_generator(const QuantumModel& m, std::span<const double> j,
                                 const SuperopOptions& opts = {});

/// exp(t * gen) applied to a vectorized state (Krylov, matrix-free).
VectorizedState expm_action(const Superoperator& gen, const VectorizedState& v, double t,
                            const KrylovOptions& opts = {});

}  // namespace smecorr

#endif
