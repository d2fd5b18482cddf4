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

#include "smecorr/model.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "smecorr/errors.hpp"
#include "smecorr/linalg.hpp"

namespace smecorr {

namespace {

constexpr double kHermTol = 1e-12;
constexpr double kTraceTol = 1e-12;
constexpr double kEigTol = 1e-10;

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

}  // namespace

std::size_t QuantumModel::detector_index(const std::string& label) const {
    for (std::size_t i = 0; i < detectors.size(); ++i)
        if (detectors[i].label == label) return i;
    throw Error("model", "unknown detector label '" + label + "'");
}

std::vector<Violation> validate_model(const QuantumModel& m) {
    std::vector<Violation> out;
    if (m.dim < 1) out.push_back({"dim", "Hilbert dimension must be >= 1"});
    if (m.hamiltonian.rows() != m.dim || m.hamiltonian.cols() != m.dim) {
        out.push_back({"hamiltonian", "expected " + std::to_string(m.dim) + "x" +
                                          std::to_string(m.dim) + " matrix"});
    } else {
        const double defect = m.hamiltonian.hermiticity_defect();
        const double scale = m.hamiltonian.frobenius_norm();
        if (defect > kHermTol * scale + 1e-300)
            out.push_back({"hamiltonian",
                           "not Hermitian: ||H - H^dag|| = " + fmt(defect) + " vs " +
                               fmt(kHermTol * scale) + " allowed"});
    }
    if (m.detectors.empty()) out.push_back({"detectors", "at least one detector required"});
    std::set<std::string> labels;
    for (std::size_t i = 0; i < m.detectors.size(); ++i) {
        const Detector& d = m.detectors[i];
        const std::string field = "detectors[" + std::to_string(i) + "]";
        if (d.label.empty()) out.push_back({field + ".label", "empty label"});
        if (!labels.insert(d.label).second)
            out.push_back({field + ".label", "duplicate label '" + d.label + "'"});
        if (d.op.rows() != m.dim || d.op.cols() != m.dim)
            out.push_back({field + ".operator", "expected " + std::to_string(m.dim) + "x" +
                                                    std::to_string(m.dim) + " matrix"});
        if (!(d.eta > 0.0 && d.eta <= 1.0))
            out.push_back({field + ".eta",
                           "efficiency must satisfy 0 < eta <= 1, got " + fmt(d.eta)});
        if (d.theta < 0.0)
            out.push_back({field + ".theta", "dark count rate must be >= 0, got " + fmt(d.theta)});
        if (d.kind == DetectorKind::Diffusive && d.theta != 0.0)
            out.push_back({field + ".theta", "dark count rate applies to jump detectors only"});
    }
    return out;
}

void require_valid(const QuantumModel& m) {
    const auto violations = validate_model(m);
    if (violations.empty()) return;
    std::string msg = "invalid model:";
    for (const auto& v : violations) msg += " [" + v.field + ": " + v.message + "]";
    throw Error("model", msg);
}

DensityMatrix DensityMatrix::from_matrix(const ComplexMatrix& m) {
    if (m.rows() != m.cols()) throw Error("model", "density matrix must be square");
    const double herm = m.hermiticity_defect();
    if (herm > kHermTol)
        throw Error("model", "density matrix not Hermitian: defect " + fmt(herm));
    const cxd tr = m.trace();
    if (std::abs(tr - cxd(1.0, 0.0)) > kTraceTol)
        throw Error("model", "density matrix trace differs from 1 by " +
                                 fmt(std::abs(tr - cxd(1.0, 0.0))));
    const auto eig = eigh(m);
    if (eig.values.front() < -kEigTol)
        throw Error("model",
                       "density matrix has negative eigenvalue " + fmt(eig.values.front()));
    return DensityMatrix(m);
}

DensityMatrix DensityMatrix::from_ket(const std::vector<cxd>& ket) {
    if (ket.empty()) throw Error("model", "empty ket");
    double n2 = 0.0;
    for (const cxd& c : ket) n2 += std::norm(c);
    if (n2 <= 0.0) throw Error("model", "zero ket cannot be normalized");
    const double inv = 1.0 / std::sqrt(n2);
    ComplexMatrix rho(ket.size(), ket.size());
    for (std::size_t j = 0; j < ket.size(); ++j)
        for (std::size_t i = 0; i < ket.size(); ++i)
            rho(i, j) = (inv * ket[i]) * std::conj(inv * ket[j]);
    return DensityMatrix(std::move(rho));
}

DensityMatrix DensityMatrix::project_physical(const ComplexMatrix& m, double neg_tol) {
    if (m.rows() != m.cols()) throw Error("model", "density matrix must be square");
    const std::size_t d = m.rows();
    ComplexMatrix h(d, d);
    for (std::size_t j = 0; j < d; ++j)
        for (std::size_t i = 0; i < d; ++i) h(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));
    const auto eig = eigh(h);
    if (eig.values.front() < -neg_tol)
        throw Error("trajectories", "state eigenvalue " + fmt(eig.values.front()) +
                                        " below tolerance -" + fmt(neg_tol));
    ComplexMatrix rho(d, d);
    double total = 0.0;
    for (std::size_t k = 0; k < d; ++k) total += std::max(0.0, eig.values[k]);
    if (total <= 0.0) throw Error("trajectories", "state collapsed to zero trace");
    for (std::size_t k = 0; k < d; ++k) {
        const double w = std::max(0.0, eig.values[k]) / total;
        if (w == 0.0) continue;
        for (std::size_t j = 0; j < d; ++j)
            for (std::size_t i = 0; i < d; ++i)
                rho(i, j) += w * eig.vectors(i, k) * std::conj(eig.vectors(j, k));
    }
    return DensityMatrix(std::move(rho));
}

namespace {

ZooModel make_decay_photodetect() {
    // two-level emitter under photodetection: basis 0 = |e>, 1 = |g>,
    // decay rate gamma = 1 (natural units), eta = 0.8, theta = 0.05
    QuantumModel m;
    m.dim = 2;
    m.hamiltonian = ComplexMatrix(2, 2);
    m.detectors.push_back({"d0", DetectorKind::Jump, build_operator("projector(1,0,2)"), 0.8, 0.05});
    return {std::move(m), DensityMatrix::from_ket({cxd(1.0, 0.0), cxd(0.0, 0.0)}), 3.0,
            "two-level decay (gamma=1) with photodetection, eta=0.8, theta=0.05, rho0=|e><e|"};
}

ZooModel make_qubit_homodyne_z() {
    QuantumModel m;
    m.dim = 2;
    m.hamiltonian = ComplexMatrix(2, 2);
    m.detectors.push_back({"z0", DetectorKind::Diffusive, build_operator("pauli_z"), 1.0, 0.0});
    // rho0 = |g><g|, a sigma_z eigenstate with eigenvalue -1
    return {std::move(m), DensityMatrix::from_ket({cxd(0.0, 0.0), cxd(1.0, 0.0)}), 1.5,
            "qubit under homodyne sigma_z monitoring, eta=1, rho0=|g><g|"};
}

ZooModel make_driven_qubit_fluorescence() {
    QuantumModel m;
    m.dim = 2;
    m.hamiltonian = build_operator("pauli_x");  // Rabi drive Omega=2, H = (Omega/2) sigma_x
    m.detectors.push_back(
        {"fl0", DetectorKind::Jump, build_operator("projector(1,0,2)"), 0.7, 0.02});
    return {std::move(m), DensityMatrix::from_ket({cxd(0.0, 0.0), cxd(1.0, 0.0)}), 3.0,
            "resonantly driven qubit (Omega=2, gamma=1), photodetected fluorescence, "
            "eta=0.7, theta=0.02, rho0=|g><g|"};
}

ZooModel make_cavity_heterodyne() {
    QuantumModel m;
    m.dim = 6;
    m.hamiltonian = build_operator(
        "0.5*adjoint(annihilation(6))*annihilation(6)"
        " + 0.3*(annihilation(6) + adjoint(annihilation(6)))");
    const ComplexMatrix a = build_operator("annihilation(6)");
    const double amp = std::sqrt(0.5);  // each quadrature channel carries kappa/2, kappa=1
    m.detectors.push_back({"hetI", DetectorKind::Diffusive, amp * a, 0.85, 0.0});
    m.detectors.push_back({"hetQ", DetectorKind::Diffusive, cxd(0.0, -amp) * a, 0.85, 0.0});
    std::vector<cxd> vac(6, cxd(0.0, 0.0));
    vac[0] = 1.0;
    return {std::move(m), DensityMatrix::from_ket(vac), 2.0,
            "driven damped cavity (delta=0.5, eps=0.3, kappa=1, Fock cutoff 6) with "
            "heterodyne detection split over two quadrature channels, eta=0.85"};
}

ZooModel make_mixed_two_detector() {
    QuantumModel m;
    m.dim = 2;
    m.hamiltonian = build_operator("0.5*pauli_x");
    m.detectors.push_back(
        {"jmp0", DetectorKind::Jump, build_operator("projector(1,0,2)"), 0.6, 0.03});
    m.detectors.push_back(
        {"dif0", DetectorKind::Diffusive, build_operator("0.7*pauli_z"), 0.9, 0.0});
    return {std::move(m), DensityMatrix::from_ket({cxd(1.0, 0.0), cxd(0.0, 0.0)}), 2.0,
            "driven qubit (Omega=1) watched by a photodetector (gamma=1, eta=0.6, theta=0.03) "
            "and a homodyne dephasing channel (0.7 sigma_z, eta=0.9), rho0=|e><e|"};
}

}  // namespace

std::vector<std::string> model_zoo_names() {
    return {"decay_photodetect", "qubit_homodyne_z", "driven_qubit_fluorescence",
            "cavity_heterodyne", "mixed_two_detector"};
}

ZooModel model_zoo(const std::string& name) {
    ZooModel z = [&] {
        if (name == "decay_photodetect") return make_decay_photodetect();
        if (name == "qubit_homodyne_z") return make_qubit_homodyne_z();
        if (name == "driven_qubit_fluorescence") return make_driven_qubit_fluorescence();
        if (name == "cavity_heterodyne") return make_cavity_heterodyne();
        if (name == "mixed_two_detector") return make_mixed_two_detector();
        throw Error("model", "unknown zoo model '" + name + "'");
    }();
    require_valid(z.model);
    return z;
}

namespace {

using nlohmann::json;

ComplexMatrix json_to_matrix(const json& j, const std::string& what) {
    if (!j.is_array() || j.empty()) throw Error("model", what + ": expected a nested array");
    const std::size_t rows = j.size();
    const std::size_t cols = j[0].size();
    ComplexMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        if (!j[i].is_array() || j[i].size() != cols)
            throw Error("model", what + ": ragged matrix rows");
        for (std::size_t c = 0; c < cols; ++c) {
            const json& e = j[i][c];
            if (!e.is_array() || e.size() != 2)
                throw Error("model", what + ": entries must be [re, im] pairs");
            m(i, c) = cxd(e[0].get<double>(), e[1].get<double>());
        }
    }
    return m;
}

ComplexMatrix json_to_operator(const json& j, std::size_t dim, const std::string& what) {
    if (j.is_string()) return build_operator(j.get<std::string>(), dim);
    return json_to_matrix(j, what);
}

}  // namespace

LoadedModel load_model_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        throw Error("model", std::string("model file is not valid JSON: ") + e.what());
    }
    if (!j.contains("dim")) throw Error("model", "model file missing 'dim'");
    QuantumModel m;
    m.dim = j["dim"].get<std::size_t>();
    if (!j.contains("hamiltonian")) throw Error("model", "model file missing 'hamiltonian'");
    m.hamiltonian = json_to_operator(j["hamiltonian"], m.dim, "hamiltonian");
    if (!j.contains("detectors")) throw Error("model", "model file missing 'detectors'");
    for (const auto& dj : j["detectors"]) {
        Detector d;
        d.label = dj.at("label").get<std::string>();
        const std::string kind = dj.at("kind").get<std::string>();
        if (kind == "jump")
            d.kind = DetectorKind::Jump;
        else if (kind == "diffusive")
            d.kind = DetectorKind::Diffusive;
        else
            throw Error("model", "detector kind must be 'jump' or 'diffusive', got '" + kind + "'");
        d.op = json_to_operator(dj.at("operator"), m.dim, "detector operator");
        d.eta = dj.at("eta").get<double>();
        d.theta = dj.value("theta", 0.0);
        m.detectors.push_back(std::move(d));
    }
    require_valid(m);

    if (!j.contains("initial_state")) throw Error("model", "model file missing 'initial_state'");
    const json& st = j["initial_state"];
    if (st.contains("ket")) {
        std::vector<cxd> ket;
        for (const auto& e : st["ket"]) {
            if (!e.is_array() || e.size() != 2)
                throw Error("model", "initial_state.ket entries must be [re, im] pairs");
            ket.emplace_back(e[0].get<double>(), e[1].get<double>());
        }
        if (ket.size() != m.dim) throw Error("model", "initial_state.ket length != dim");
        return {std::move(m), DensityMatrix::from_ket(ket)};
    }
    if (st.contains("matrix")) {
        const ComplexMatrix rho = json_to_matrix(st["matrix"], "initial_state.matrix");
        if (rho.rows() != m.dim || rho.cols() != m.dim)
            throw Error("model", "initial_state.matrix shape != dim x dim");
        return {std::move(m), DensityMatrix::from_matrix(rho)};
    }
    throw Error("model", "initial_state needs a 'ket' or a 'matrix'");
}

LoadedModel load_model_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("model", "cannot open model file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_model_json(buf.str());
}

}  // namespace smecorr
