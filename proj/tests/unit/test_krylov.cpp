#include <doctest.h>

#include <random>

#include "smecorr/errors.hpp"
#include "smecorr/krylov.hpp"
#include "smecorr/linalg.hpp"
#include "smecorr/model.hpp"
#include "smecorr/superop.hpp"

using namespace smecorr;

namespace {

LinearOperator dense_op(const ComplexMatrix& m) {
    return {m.rows(), [&m](const cxd* in, cxd* out) {
                const std::size_t n = m.rows();
                std::fill(out, out + n, cxd(0.0, 0.0));
                for (std::size_t j = 0; j < n; ++j)
                    for (std::size_t i = 0; i < n; ++i) out[i] += m(i, j) * in[j];
            }};
}

std::vector<cxd> random_vec(std::mt19937_64& gen, std::size_t n) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<cxd> v(n);
    for (cxd& x : v) x = cxd(dist(gen), dist(gen));
    return v;
}

double rel_err(const std::vector<cxd>& got, const std::vector<cxd>& want) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < got.size(); ++i) {
        num += std::norm(got[i] - want[i]);
        den += std::norm(want[i]);
    }
    return std::sqrt(num / den);
}

}  // namespace

TEST_CASE("t = 0 returns the input unchanged") {
    std::mt19937_64 gen(5);
    const auto v = random_vec(gen, 10);
    ComplexMatrix m = ComplexMatrix::identity(10);
    const auto out = expm_action(dense_op(m), v, 0.0);
    for (std::size_t i = 0; i < v.size(); ++i) CHECK(out[i] == v[i]);
}

TEST_CASE("small systems match the dense exponential exactly (happy breakdown)") {
    std::mt19937_64 gen(6);
    for (std::size_t n : {2u, 4u, 9u}) {
        ComplexMatrix a(n, n);
        std::uniform_real_distribution<double> dist(-1.0, 1.0);
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t i = 0; i < n; ++i) a(i, j) = cxd(dist(gen), dist(gen));
        const auto v = random_vec(gen, n);
        const double t = 0.8;

        const auto krylov = expm_action(dense_op(a), v, t);

        ComplexMatrix at = a;
        at *= cxd(t, 0.0);
        const ComplexMatrix e = expm_dense(at);
        std::vector<cxd> want(n, cxd(0.0, 0.0));
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t i = 0; i < n; ++i) want[i] += e(i, j) * v[j];
        CHECK(rel_err(krylov, want) < 1e-11);
    }
}

TEST_CASE("large skew system beyond the subspace dimension stays accurate") {
    // n = 64 > max_dim = 30 forces genuine sub-stepping
    std::mt19937_64 gen(7);
    const std::size_t n = 64;
    ComplexMatrix m(n, n);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) m(i, j) = cxd(dist(gen), dist(gen));
    ComplexMatrix a = m - m.adjoint();
    const auto v = random_vec(gen, n);
    const double t = 2.0;

    KrylovOptions opts;
    opts.tol = 1e-10;
    const auto krylov = expm_action(dense_op(a), v, t, opts);

    ComplexMatrix at = a;
    at *= cxd(t, 0.0);
    const ComplexMatrix e = expm_dense(at);
    std::vector<cxd> want(n, cxd(0.0, 0.0));
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) want[i] += e(i, j) * v[j];
    CHECK(rel_err(krylov, want) < 1e-8);
}

TEST_CASE("semigroup property: exp((t1+t2)A)v = exp(t2 A) exp(t1 A) v") {
    const ZooModel zoo = model_zoo("mixed_two_detector");
    const Superoperator lind = lindbladian(zoo.model);
    const VectorizedState v0 = vectorize(zoo.rho0.matrix());

    const auto whole = expm_action(lind, v0, 1.7);
    const auto part = expm_action(lind, expm_action(lind, v0, 0.6), 1.1);
    CHECK(rel_err(part.data, whole.data) < 1e-9);
}

TEST_CASE("Lindbladian action preserves the trace") {
    for (const char* name : {"decay_photodetect", "cavity_heterodyne"}) {
        const ZooModel zoo = model_zoo(name);
        const Superoperator lind = lindbladian(zoo.model);
        KrylovOptions opts;
        opts.tol = 1e-12;
        const auto out = expm_action(lind, vectorize(zoo.rho0.matrix()), 2.5, opts);
        const cxd tr = devectorize(out).trace();
        CHECK(std::abs(tr - cxd(1.0, 0.0)) < 1e-10);
    }
}

TEST_CASE("expm_action rejects bad arguments") {
    ComplexMatrix m = ComplexMatrix::identity(3);
    std::vector<cxd> v(3, cxd(1.0, 0.0));
    CHECK_THROWS_AS(expm_action(dense_op(m), v, -1.0), Error);
    KrylovOptions opts;
    opts.tol = 0.0;
    CHECK_THROWS_AS(expm_action(dense_op(m), v, 1.0, opts), Error);
    std::vector<cxd> wrong(4, cxd(1.0, 0.0));
    CHECK_THROWS_AS(expm_action(dense_op(m), wrong, 1.0), Error);
}

TEST_CASE("an exhausted sub-step budget is reported, not silently absorbed") {
    std::mt19937_64 gen(9);
    const std::size_t n = 64;
    ComplexMatrix m(n, n);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) m(i, j) = cxd(dist(gen), dist(gen));
    std::vector<cxd> v = random_vec(gen, n);
    KrylovOptions opts;
    opts.max_substeps = 2;  // far too few for t * ||A|| this large
    CHECK_THROWS_AS(expm_action(dense_op(m), v, 50.0, opts), Error);
}
