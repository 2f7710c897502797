// Copyright 2026 The xplat Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "xplat/circuits.h"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace xplat {

namespace {

double unitarity_deviation(const Eigen::MatrixXcd &m) {
    Eigen::MatrixXcd d = m.adjoint() * m - Eigen::MatrixXcd::Identity(m.rows(), m.cols());
    return d.cwiseAbs().maxCoeff();
}

}  // namespace

Gate Gate::one_qubit(size_t q, Eigen::MatrixXcd m, std::string name) {
    return Gate{Kind::kOneQubit, {q}, std::move(m), std::move(name)};
}

Gate Gate::two_qubit(size_t a, size_t b, Eigen::MatrixXcd m, std::string name) {
    return Gate{Kind::kTwoQubit, {a, b}, std::move(m), std::move(name)};
}

void Gate::validate(size_t n_qubits) const {
    size_t arity = kind == Kind::kOneQubit ? 1 : 2;
    if (targets.size() != arity) {
        throw std::invalid_argument("gate '" + name + "' has the wrong number of targets");
    }
    for (size_t t : targets) {
        if (t >= n_qubits) {
            throw std::invalid_argument("gate '" + name + "' targets qubit " + std::to_string(t) + " >= " +
                                        std::to_string(n_qubits));
        }
    }
    if (arity == 2 && targets[0] == targets[1]) {
        throw std::invalid_argument("gate '" + name + "' has repeated targets");
    }
    Eigen::Index dim = arity == 1 ? 2 : 4;
    if (matrix.rows() != dim || matrix.cols() != dim) {
        throw std::invalid_argument("gate '" + name + "' matrix has the wrong shape");
    }
    if (unitarity_deviation(matrix) > kUnitarityTolerance) {
        throw std::invalid_argument("gate '" + name + "' matrix is not unitary");
    }
}

size_t Circuit::two_qubit_gate_count() const {
    size_t c = 0;
    for (const auto &g : gates) {
        c += g.kind == Gate::Kind::kTwoQubit;
    }
    return c;
}

void Circuit::validate() const {
    for (const auto &g : gates) {
        g.validate(n_qubits);
    }
}

bool Permutation::is_bijection() const {
    std::vector<bool> seen(image.size(), false);
    for (size_t v : image) {
        if (v >= image.size() || seen[v]) {
            return false;
        }
        seen[v] = true;
    }
    return true;
}

namespace gates {

Eigen::Matrix2cd hadamard() {
    const double r = 1.0 / std::sqrt(2.0);
    Eigen::Matrix2cd m;
    m << r, r, r, -r;
    return m;
}

Eigen::Matrix2cd s_dagger() {
    Eigen::Matrix2cd m;
    m << 1, 0, 0, Complex(0, -1);
    return m;
}

Eigen::Matrix4cd cnot() {
    // Control is targets[0] (local bit 0), target is targets[1] (local bit 1).
    Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
    m(0, 0) = 1;
    m(3, 1) = 1;
    m(2, 2) = 1;
    m(1, 3) = 1;
    return m;
}

Eigen::Matrix4cd swap() {
    Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
    m(0, 0) = 1;
    m(2, 1) = 1;
    m(1, 2) = 1;
    m(3, 3) = 1;
    return m;
}

}  // namespace gates

Circuit build_ghz(size_t n) {
    if (n < 2) {
        throw std::invalid_argument("GHZ circuit needs at least 2 qubits");
    }
    Circuit c;
    c.n_qubits = n;
    c.label = "ghz" + std::to_string(n);
    c.gates.push_back(Gate::one_qubit(0, gates::hadamard(), "h"));
    for (size_t k = 0; k + 1 < n; k++) {
        c.gates.push_back(Gate::two_qubit(k, k + 1, gates::cnot(), "cx"));
    }
    return c;
}

Permutation sample_permutation(size_t n, Rng &rng) {
    Permutation p;
    p.image.resize(n);
    std::iota(p.image.begin(), p.image.end(), size_t{0});
    for (size_t i = n; i > 1; i--) {
        std::uniform_int_distribution<size_t> pick(0, i - 1);
        std::swap(p.image[i - 1], p.image[pick(rng)]);
    }
    return p;
}

Eigen::MatrixXcd sample_haar_unitary(size_t dim, Rng &rng) {
    std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
    Eigen::MatrixXcd z(dim, dim);
    for (size_t c = 0; c < dim; c++) {
        for (size_t r = 0; r < dim; r++) {
            double re = gauss(rng);
            double im = gauss(rng);
            z(r, c) = Complex(re, im);
        }
    }
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
    Eigen::MatrixXcd q = qr.householderQ();
    Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
    // Q * diag(r_ii/|r_ii|) makes the decomposition unique, hence Haar.
    for (size_t k = 0; k < dim; k++) {
        Complex d = r(k, k);
        double mag = std::abs(d);
        Complex phase = mag > 0 ? d / mag : Complex(1, 0);
        q.col(k) *= phase;
    }
    return q;
}

Eigen::Matrix4cd sample_haar_su4(Rng &rng) {
    Eigen::Matrix4cd u = sample_haar_unitary(4, rng);
    Complex det = u.determinant();
    u /= std::pow(det, 0.25);
    return u;
}

Circuit sample_qv_circuit(size_t n, size_t d, Rng &rng) {
    if (n < 2) {
        throw std::invalid_argument("quantum volume circuit needs at least 2 qubits");
    }
    if (d < 1) {
        throw std::invalid_argument("quantum volume circuit needs at least 1 layer");
    }
    Circuit c;
    c.n_qubits = n;
    c.depth = d;
    c.label = "qv" + std::to_string(n) + "_d" + std::to_string(d);
    const size_t pairs = n / 2;
    for (size_t layer = 0; layer < d; layer++) {
        Permutation perm = sample_permutation(n, rng);
        for (size_t k = 0; k < pairs; k++) {
            c.gates.push_back(Gate::two_qubit(perm.image[2 * k], perm.image[2 * k + 1], sample_haar_su4(rng), "su4"));
        }
    }
    return c;
}

Circuit sample_qv_circuit(size_t n, size_t d, uint64_t seed) {
    Rng rng = make_rng(seed, "qv-circuit");
    Circuit c = sample_qv_circuit(n, d, rng);
    c.seed = seed;
    c.label += "_s" + std::to_string(seed);
    return c;
}

StateVector zero_state(size_t n) {
    StateVector s = StateVector::Zero(Eigen::Index{1} << n);
    s(0) = 1;
    return s;
}

void apply_one_qubit(const Eigen::Matrix2cd &m, size_t q, std::span<Complex> amps) {
    const size_t dim = amps.size();
    const size_t bit = size_t{1} << q;
    Complex *a = amps.data();
    const Complex m00 = m(0, 0), m01 = m(0, 1), m10 = m(1, 0), m11 = m(1, 1);
    for (size_t i = 0; i < dim; i++) {
        if (i & bit) {
            continue;
        }
        Complex x0 = a[i];
        Complex x1 = a[i | bit];
        a[i] = m00 * x0 + m01 * x1;
        a[i | bit] = m10 * x0 + m11 * x1;
    }
}

void apply_two_qubit(const Eigen::Matrix4cd &m, size_t qa, size_t qb, std::span<Complex> amps) {
    const size_t dim = amps.size();
    const size_t ba = size_t{1} << qa;
    const size_t bb = size_t{1} << qb;
    Complex *a = amps.data();
    for (size_t i = 0; i < dim; i++) {
        if (i & (ba | bb)) {
            continue;
        }
        const size_t idx[4] = {i, i | ba, i | bb, i | ba | bb};
        Complex x[4] = {a[idx[0]], a[idx[1]], a[idx[2]], a[idx[3]]};
        for (int r = 0; r < 4; r++) {
            a[idx[r]] = m(r, 0) * x[0] + m(r, 1) * x[1] + m(r, 2) * x[2] + m(r, 3) * x[3];
        }
    }
}

void apply_gate(const Gate &gate, std::span<Complex> amps) {
    if (gate.kind == Gate::Kind::kOneQubit) {
        apply_one_qubit(gate.matrix, gate.targets[0], amps);
    } else {
        apply_two_qubit(gate.matrix, gate.targets[0], gate.targets[1], amps);
    }
}

StateVector apply_circuit(const Circuit &circuit, StateVector state) {
    if (state.size() != (Eigen::Index{1} << circuit.n_qubits)) {
        throw std::invalid_argument("state dimension does not match 2^n_qubits");
    }
    for (const auto &g : circuit.gates) {
        apply_gate(g, amplitudes(state));
    }
    return state;
}

nlohmann::json circuit_to_json(const Circuit &circuit) {
    nlohmann::json j;
    j["label"] = circuit.label;
    j["n_qubits"] = circuit.n_qubits;
    j["seed"] = circuit.seed ? nlohmann::json(*circuit.seed) : nlohmann::json(nullptr);
    j["depth"] = circuit.depth ? nlohmann::json(*circuit.depth) : nlohmann::json(nullptr);
    nlohmann::json gates = nlohmann::json::array();
    for (const auto &g : circuit.gates) {
        nlohmann::json m = nlohmann::json::array();
        for (Eigen::Index r = 0; r < g.matrix.rows(); r++) {
            for (Eigen::Index c = 0; c < g.matrix.cols(); c++) {
                m.push_back({g.matrix(r, c).real(), g.matrix(r, c).imag()});
            }
        }
        gates.push_back({{"name", g.name}, {"targets", g.targets}, {"matrix", m}});
    }
    j["gates"] = std::move(gates);
    return j;
}

Circuit circuit_from_json(const nlohmann::json &j) {
    Circuit c;
    try {
        c.label = j.at("label").get<std::string>();
        c.n_qubits = j.at("n_qubits").get<size_t>();
        if (j.contains("seed") && !j["seed"].is_null()) {
            c.seed = j["seed"].get<uint64_t>();
        }
        if (j.contains("depth") && !j["depth"].is_null()) {
            c.depth = j["depth"].get<size_t>();
        }
        for (const auto &g : j.at("gates")) {
            auto targets = g.at("targets").get<std::vector<size_t>>();
            const auto &m = g.at("matrix");
            size_t dim = targets.size() == 1 ? 2 : 4;
            if (targets.empty() || targets.size() > 2 || m.size() != dim * dim) {
                throw std::invalid_argument("gate has inconsistent targets/matrix size");
            }
            Eigen::MatrixXcd mat(dim, dim);
            for (size_t k = 0; k < dim * dim; k++) {
                mat(k / dim, k % dim) = Complex(m[k].at(0).get<double>(), m[k].at(1).get<double>());
            }
            std::string name = g.value("name", targets.size() == 1 ? "u1" : "u2");
            c.gates.push_back(targets.size() == 1 ? Gate::one_qubit(targets[0], mat, name)
                                                  : Gate::two_qubit(targets[0], targets[1], mat, name));
        }
    } catch (const nlohmann::json::exception &e) {
        throw std::invalid_argument(std::string("malformed circuit json: ") + e.what());
    }
    c.validate();
    return c;
}

}  // namespace xplat
