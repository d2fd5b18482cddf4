#include <doctest.h>

#include <random>

#include "smecorr/errors.hpp"
#include "smecorr/model.hpp"

using namespace smecorr;

TEST_CASE("build_operator primitives") {
    // truncated ladder operator
    const ComplexMatrix a = build_operator("annihilation(2)");
    CHECK(a(0, 0) == cxd(0.0, 0.0));
    CHECK(a(0, 1) == cxd(1.0, 0.0));
    CHECK(a(1, 0) == cxd(0.0, 0.0));
    CHECK(a(1, 1) == cxd(0.0, 0.0));

    const ComplexMatrix z = build_operator("pauli_z");
    CHECK(z(0, 0) == cxd(1.0, 0.0));
    CHECK(z(1, 1) == cxd(-1.0, 0.0));

    // number operator by direct multiplication
    const ComplexMatrix n = build_operator("adjoint(annihilation(3))*annihilation(3)");
    for (std::size_t i = 0; i < 3; ++i)
        CHECK(std::abs(n(i, i) - cxd(static_cast<double>(i), 0.0)) < 1e-14);
    CHECK(std::abs(n(0, 1)) + std::abs(n(1, 2)) + std::abs(n(2, 0)) < 1e-14);
}

TEST_CASE("build_operator scalars, sqrt and i") {
    const ComplexMatrix m = build_operator("sqrt(4)*identity(2) + i*pauli_z");
    CHECK(m(0, 0) == cxd(2.0, 1.0));
    CHECK(m(1, 1) == cxd(2.0, -1.0));
    const ComplexMatrix p = build_operator("projector(1,0,2)");
    CHECK(p(1, 0) == cxd(1.0, 0.0));
    CHECK(p(0, 0) == cxd(0.0, 0.0));
}

TEST_CASE("build_operator error paths") {
    CHECK_THROWS_AS(build_operator("pauli_z + identity(3)"), Error);         // dim mismatch
    CHECK_THROWS_AS(build_operator("frobnicate(2)"), Error);                 // unknown primitive
    CHECK_THROWS_AS(build_operator("1.5"), Error);                           // scalar result
    CHECK_THROWS_AS(build_operator("pauli_z *"), Error);                     // truncated
    CHECK_NOTHROW(build_operator("1.5", 3));                                 // scalar promoted
    const ComplexMatrix m = build_operator("2", 2);
    CHECK(m(0, 0) == cxd(2.0, 0.0));
    CHECK(m(0, 1) == cxd(0.0, 0.0));
}

TEST_CASE("build respects adjoint on random expressions") {
    // random expression trees built from the primitives; adjoint(e) must
    // evaluate to the conjugate transpose of e
    std::mt19937_64 gen(31);
    const std::vector<std::string> atoms = {"annihilation(3)", "identity(3)", "projector(0,2,3)",
                                            "(0.5+0.25*i)*projector(1,1,3)"};
    std::uniform_int_distribution<int> pick(0, static_cast<int>(atoms.size()) - 1);
    std::uniform_int_distribution<int> op(0, 2);
    for (int rep = 0; rep < 20; ++rep) {
        std::string e = atoms[pick(gen)];
        for (int depth = 0; depth < 3; ++depth) {
            switch (op(gen)) {
                case 0: e = "(" + e + ") + (" + atoms[pick(gen)] + ")"; break;
                case 1: e = "(" + e + ") * (" + atoms[pick(gen)] + ")"; break;
                default: e = "adjoint(" + e + ")"; break;
            }
        }
        const ComplexMatrix direct = build_operator("adjoint(" + e + ")");
        const ComplexMatrix manual = build_operator(e).adjoint();
        CHECK((direct - manual).frobenius_norm() < 1e-13);
    }
}

TEST_CASE("validate_model accepts a correct model and names defects") {
    QuantumModel m;
    m.dim = 2;
    m.hamiltonian = ComplexMatrix(2, 2);
    m.detectors.push_back({"d0", DetectorKind::Jump, build_operator("projector(1,0,2)"), 0.8,
                           0.05});
    CHECK(validate_model(m).empty());

    // efficiency out of range
    m.detectors[0].eta = 1.3;
    auto v = validate_model(m);
    REQUIRE(v.size() == 1);
    CHECK(v[0].field == "detectors[0].eta");
    m.detectors[0].eta = 0.8;

    // non-Hermitian Hamiltonian
    m.hamiltonian(0, 1) = cxd(1.0, 0.0);
    v = validate_model(m);
    REQUIRE(v.size() == 1);
    CHECK(v[0].field == "hamiltonian");
    m.hamiltonian(0, 1) = cxd(0.0, 0.0);

    // theta on a diffusive detector
    m.detectors.push_back({"d1", DetectorKind::Diffusive, build_operator("pauli_z"), 0.9, 0.1});
    v = validate_model(m);
    REQUIRE(v.size() == 1);
    CHECK(v[0].field == "detectors[1].theta");

    // duplicate labels
    m.detectors[1].theta = 0.0;
    m.detectors[1].label = "d0";
    v = validate_model(m);
    REQUIRE(v.size() == 1);
    CHECK(v[0].field == "detectors[1].label");
}

TEST_CASE("every zoo model validates cleanly") {
    for (const std::string& name : model_zoo_names()) {
        const ZooModel z = model_zoo(name);
        CHECK(validate_model(z.model).empty());
        CHECK(z.rho0.dim() == z.model.dim);
        CHECK(!z.description.empty());
    }
    CHECK_THROWS_AS(model_zoo("no_such_model"), Error);
}

TEST_CASE("density matrix invariants") {
    // kets are normalized and promoted
    const DensityMatrix rho = DensityMatrix::from_ket({cxd(3.0, 0.0), cxd(4.0, 0.0)});
    CHECK(rho.matrix()(0, 0).real() == doctest::Approx(9.0 / 25.0));
    CHECK(rho.matrix()(1, 1).real() == doctest::Approx(16.0 / 25.0));

    ComplexMatrix bad = ComplexMatrix::identity(2);  // trace 2
    CHECK_THROWS_AS(DensityMatrix::from_matrix(bad), Error);

    ComplexMatrix neg(2, 2);
    neg(0, 0) = 1.5;
    neg(1, 1) = -0.5;
    CHECK_THROWS_AS(DensityMatrix::from_matrix(neg), Error);

    // project_physical clips small negatives and renormalizes
    ComplexMatrix nearly(2, 2);
    nearly(0, 0) = 1.0 + 5e-7;
    nearly(1, 1) = -5e-7;
    const DensityMatrix fixed = DensityMatrix::project_physical(nearly, 1e-6);
    CHECK(fixed.matrix()(1, 1).real() == doctest::Approx(0.0));
    CHECK(fixed.matrix().trace().real() == doctest::Approx(1.0));
    CHECK_THROWS_AS(DensityMatrix::project_physical(neg, 1e-6), Error);
}

TEST_CASE("model JSON loading") {
    const std::string text = R"json({
        "dim": 2,
        "hamiltonian": "0.5*pauli_x",
        "detectors": [
            {"label": "d0", "kind": "jump", "operator": "projector(1,0,2)", "eta": 0.8,
             "theta": 0.05},
            {"label": "z0", "kind": "diffusive",
             "operator": [[[1,0],[0,0]],[[0,0],[-1,0]]], "eta": 0.9}
        ],
        "initial_state": {"ket": [[1,0],[0,0]]}
    })json";
    const LoadedModel lm = load_model_json(text);
    CHECK(lm.model.dim == 2);
    CHECK(lm.model.detectors.size() == 2);
    CHECK(lm.model.detectors[1].op(1, 1) == cxd(-1.0, 0.0));
    CHECK(lm.model.detectors[1].theta == 0.0);
    CHECK(lm.rho0.matrix()(0, 0).real() == doctest::Approx(1.0));

    CHECK_THROWS_AS(load_model_json("{not json"), Error);
    CHECK_THROWS_AS(load_model_json("{\"dim\": 2}"), Error);
    CHECK_THROWS_AS(load_model_file("/nonexistent/path.json"), Error);

    // eta out of range surfaces the validation failure
    std::string bad = text;
    const auto pos = bad.find("0.8");
    bad.replace(pos, 3, "1.8");
    CHECK_THROWS_AS(load_model_json(bad), Error);
}
