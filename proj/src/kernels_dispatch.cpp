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

#include <cstdlib>
#include <cstring>
#include <stdexcept>

namespace smecorr::kernels {

bool avx2_supported() {
#if (defined(__x86_64__) || defined(_M_X64)) && defined(__GNUC__)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

const Backend& active() {
    static const Backend* selected = [] {
        const char* env = std::getenv("SMECORR_KERNELS");
        if (env != nullptr) {
            if (std::strcmp(env, "scalar") == 0) return &scalar_backend();
            if (std::strcmp(env, "avx2") == 0) {
                if (!avx2_supported())
                    throw std::runtime_error("SMECORR_KERNELS=avx2 but AVX2+FMA not available");
                return &avx2_backend();
            }
            throw std::runtime_error(std::string("unknown SMECORR_KERNELS value: ") + env);
        }
        return avx2_supported() ? &avx2_backend() : &scalar_backend();
    }();
    return *selected;
}

}  // namespace smecorr::kernels
