#include <doctest.h>

#include <array>
#include <random>
#include <vector>

#include "smecorr/kernels.hpp"

// The scalar backend is the reference; every other backend must agree on
// random inputs up to accumulation-order roundoff.

using smecorr::kernels::avx2_backend;
using smecorr::kernels::avx2_supported;
using smecorr::kernels::Backend;
using smecorr::kernels::cxd;
using smecorr::kernels::scalar_backend;

namespace {

std::vector<cxd> random_vec(std::mt19937_64& gen, std::size_t n) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<cxd> v(n);
    for (cxd& x : v) x = cxd(dist(gen), dist(gen));
    return v;
}

double rel_diff(const std::vector<cxd>& a, const std::vector<cxd>& b) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num += std::norm(a[i] - b[i]);
        den += std::norm(b[i]);
    }
    return std::sqrt(num) / std::max(1.0, std::sqrt(den));
}

}  // namespace

TEST_CASE("scalar/simd backends agree on every kernel") {
    if (!avx2_supported()) {
        MESSAGE("AVX2 not available, dispatch falls back to scalar");
        return;
    }
    const Backend& s = scalar_backend();
    const Backend& v = avx2_backend();
    std::mt19937_64 gen(42);

    // odd lengths exercise the vector tails
    for (std::size_t n : {1u, 2u, 3u, 7u, 16u, 33u, 255u, 1024u}) {
        const auto x = random_vec(gen, n);
        const auto y0 = random_vec(gen, n);
        const cxd alpha(0.37, -1.21);

        auto ys = y0, yv = y0;
        s.zaxpy(n, alpha, x.data(), ys.data());
        v.zaxpy(n, alpha, x.data(), yv.data());
        CHECK(rel_diff(yv, ys) < 1e-14);

        auto xs = x, xv = x;
        s.zscal(n, alpha, xs.data());
        v.zscal(n, alpha, xv.data());
        CHECK(rel_diff(xv, xs) < 1e-14);

        const cxd ds = s.zdotc(n, x.data(), y0.data());
        const cxd dv = v.zdotc(n, x.data(), y0.data());
        CHECK(std::abs(ds - dv) < 1e-12 * (1.0 + std::abs(ds)));

        const double ns = s.znrm2sq(n, x.data());
        const double nv = v.znrm2sq(n, x.data());
        CHECK(ns == doctest::Approx(nv).epsilon(1e-13));
    }
}

TEST_CASE("scalar/simd gemm agree on odd shapes") {
    if (!avx2_supported()) return;
    const Backend& s = scalar_backend();
    const Backend& v = avx2_backend();
    std::mt19937_64 gen(7);
    for (auto [m, k, n] : {std::array<std::size_t, 3>{1, 1, 1},
                           {2, 2, 2},
                           {3, 5, 2},
                           {8, 8, 8},
                           {17, 9, 13},
                           {64, 64, 3}}) {
        const auto a = random_vec(gen, m * k);
        const auto b = random_vec(gen, k * n);
        auto cs = random_vec(gen, m * n);
        auto cv = cs;
        const cxd alpha(-0.8, 0.45);
        s.zgemm_acc(m, k, n, alpha, a.data(), m, b.data(), k, cs.data(), m);
        v.zgemm_acc(m, k, n, alpha, a.data(), m, b.data(), k, cv.data(), m);
        CHECK(rel_diff(cv, cs) < 1e-13);
    }
}

TEST_CASE("gemm matches a naive triple loop") {
    std::mt19937_64 gen(3);
    const std::size_t m = 5, k = 4, n = 6;
    const auto a = random_vec(gen, m * k);
    const auto b = random_vec(gen, k * n);
    std::vector<cxd> c(m * n, cxd(0.0, 0.0));
    smecorr::kernels::zgemm_acc(m, k, n, cxd(1.0, 0.0), a.data(), m, b.data(), k, c.data(), m);

    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < m; ++i) {
            cxd acc(0.0, 0.0);
            for (std::size_t p = 0; p < k; ++p) acc += a[i + p * m] * b[p + j * k];
            CHECK(std::abs(c[i + j * m] - acc) < 1e-13);
        }
}

TEST_CASE("dotc conjugates the left argument") {
    const std::vector<cxd> x = {cxd(0.0, 1.0)};
    const std::vector<cxd> y = {cxd(0.0, 1.0)};
    const cxd d = smecorr::kernels::zdotc(1, x.data(), y.data());
    CHECK(d.real() == doctest::Approx(1.0));
    CHECK(d.imag() == doctest::Approx(0.0));
}
