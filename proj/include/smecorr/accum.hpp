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

#ifndef SMECORR_ACCUM_HPP
#define SMECORR_ACCUM_HPP

#include <cmath>

namespace smecorr {

/// Compensated summation (Neumaier). Long ensemble sums stay accurate to
/// ~1 ulp, so reported digits do not depend on accumulation order.
struct CompensatedSum {
    double hi = 0.0;
    double lo = 0.0;

    void add(double x) {
        const double s = hi + x;
        if (std::abs(hi) >= std::abs(x))
            lo += (hi - s) + x;
        else
            lo += (x - s) + hi;
        hi = s;
    }

    void merge(const CompensatedSum& o) {
        add(o.hi);
        lo += o.lo;
    }

    double value() const { return hi + lo; }
};

}  // namespace smecorr

#endif
