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

#include "xplat/platforms.h"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "xplat/errors.h"

namespace xplat {

void NoiseModel::validate() const {
    auto check = [](double p, const char *name) {
        if (!(p >= 0.0 && p <= 1.0)) {
            throw std::invalid_argument(std::string("noise probability ") + name + " must lie in [0,1]");
        }
    };
    check(p1, "p1");
    check(p2, "p2");
    check(readout_eps, "readout_eps");
}

std::string technology_name(Technology t) {
    switch (t) {
        case Technology::kTrappedIon:
            return "trapped-ion";
        case Technology::kSuperconducting:
            return "superconducting";
        case Technology::kSimulation:
            return "simulation";
    }
    return "simulation";
}

Technology parse_technology(const std::string &s) {
    if (s == "trapped-ion") {
        return Technology::kTrappedIon;
    }
    if (s == "superconducting") {
        return Technology::kSuperconducting;
    }
    if (s == "simulation") {
        return Technology::kSimulation;
    }
    throw std::invalid_argument("unknown technology '" + s + "'");
}

ConnectivityGraph PlatformProfile::graph(size_t n_qubits) const {
    return graph_from_spec(connectivity, n_qubits);
}

nlohmann::json platform_to_json(const PlatformProfile &p) {
    return {{"name", p.name},
            {"technology", technology_name(p.technology)},
            {"p1", p.noise.p1},
            {"p2", p.noise.p2},
            {"readout_eps", p.noise.readout_eps},
            {"connectivity", p.connectivity}};
}

PlatformProfile platform_from_json(const nlohmann::json &j) {
    PlatformProfile p;
    try {
        p.name = j.at("name").get<std::string>();
        p.technology = parse_technology(j.value("technology", "simulation"));
        p.noise.p1 = j.value("p1", 0.0);
        p.noise.p2 = j.value("p2", 0.0);
        p.noise.readout_eps = j.value("readout_eps", 0.0);
        p.connectivity = j.value("connectivity", nlohmann::json("complete"));
    } catch (const nlohmann::json::exception &e) {
        throw std::invalid_argument(std::string("malformed platform config: ") + e.what());
    }
    if (p.name.empty()) {
        throw std::invalid_argument("platform name must not be empty");
    }
    p.noise.validate();
    if (!p.connectivity.is_string() && !p.connectivity.is_object()) {
        throw std::invalid_argument("platform connectivity must be a name or a graph object");
    }
    return p;
}

PlatformProfile load_platform(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("cannot open platform config " + path.string());
    }
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception &e) {
        throw ParseError("platform config " + path.string() + ": " + e.what());
    }
    return platform_from_json(j);
}

DensityMatrix::DensityMatrix(size_t n_qubits, Eigen::MatrixXcd matrix) : n_qubits_(n_qubits), matrix_(std::move(matrix)) {
    const Eigen::Index dim = Eigen::Index{1} << n_qubits;
    if (matrix_.rows() != dim || matrix_.cols() != dim) {
        throw std::invalid_argument("density matrix must be 2^n x 2^n");
    }
}

DensityMatrix DensityMatrix::pure(const StateVector &psi) {
    size_t n = 0;
    while ((Eigen::Index{1} << n) < psi.size()) {
        n++;
    }
    return DensityMatrix(n, psi * psi.adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed(size_t n_qubits) {
    const Eigen::Index dim = Eigen::Index{1} << n_qubits;
    return DensityMatrix(n_qubits, Eigen::MatrixXcd::Identity(dim, dim) / static_cast<double>(dim));
}

double DensityMatrix::trace() const {
    return matrix_.trace().real();
}

double DensityMatrix::purity() const {
    // tr[rho^2] = sum |rho_ij|^2 for Hermitian rho.
    return matrix_.squaredNorm();
}

void DensityMatrix::check_valid() const {
    if ((matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff() > 1e-10) {
        throw InvariantError("density matrix is not Hermitian");
    }
    if (std::abs(matrix_.trace() - Complex(1, 0)) > 1e-10) {
        throw InvariantError("density matrix trace differs from 1");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(matrix_, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-9) {
        throw InvariantError("density matrix has a negative eigenvalue");
    }
}

namespace {

void apply_to_columns(Eigen::MatrixXcd &m, const Gate &gate) {
    const size_t dim = static_cast<size_t>(m.rows());
    for (Eigen::Index c = 0; c < m.cols(); c++) {
        apply_gate(gate, std::span<Complex>(m.col(c).data(), dim));
    }
}

// Full single-qubit depolarization of qubit q.
Eigen::MatrixXcd depolarize_qubit(const Eigen::MatrixXcd &m, size_t q) {
    const size_t dim = static_cast<size_t>(m.rows());
    const size_t bit = size_t{1} << q;
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(m.rows(), m.cols());
    for (size_t c = 0; c < dim; c++) {
        for (size_t r = 0; r < dim; r++) {
            if (((r ^ c) & bit) == 0) {
                out(r, c) = 0.5 * (m(r, c) + m(r ^ bit, c ^ bit));
            }
        }
    }
    return out;
}

Eigen::Matrix2cd pauli_matrix(unsigned p) {
    Eigen::Matrix2cd m;
    switch (p) {
        case 1:
            m << 0, 1, 1, 0;
            break;
        case 2:
            m << 0, Complex(0, -1), Complex(0, 1), 0;
            break;
        case 3:
            m << 1, 0, 0, -1;
            break;
        default:
            m.setIdentity();
    }
    return m;
}

void check_capacity(size_t n, size_t cap, const char *path) {
    if (n > cap) {
        throw CapacityError(std::string(path) + " simulation is capped at " + std::to_string(cap) + " qubits, got " +
                            std::to_string(n) +
                            (std::string(path) == "density-matrix" ? "; use trajectory simulation instead" : ""));
    }
}

}  // namespace

void apply_unitary(DensityMatrix &rho, const Gate &gate) {
    Eigen::MatrixXcd &m = rho.mutable_matrix();
    apply_to_columns(m, gate);
    // (U (U rho)^dagger)^dagger = U rho U^dagger.
    Eigen::MatrixXcd t = m.adjoint();
    apply_to_columns(t, gate);
    m = t.adjoint();
}

void apply_depolarizing(DensityMatrix &rho, const std::vector<size_t> &qubits, double p) {
    if (p == 0) {
        return;
    }
    Eigen::MatrixXcd twirled = rho.matrix();
    for (size_t q : qubits) {
        twirled = depolarize_qubit(twirled, q);
    }
    rho.mutable_matrix() = (1 - p) * rho.matrix() + p * twirled;
}

DensityMatrix apply_readout_channel(DensityMatrix rho, double eps) {
    if (eps == 0) {
        return rho;
    }
    for (size_t q = 0; q < rho.n_qubits(); q++) {
        apply_depolarizing(rho, {q}, 2 * eps);
    }
    return rho;
}

DensityMatrix partial_trace(const DensityMatrix &rho, const std::vector<size_t> &keep) {
    const size_t n = rho.n_qubits();
    std::vector<bool> kept(n, false);
    for (size_t q : keep) {
        if (q >= n || kept[q]) {
            throw std::invalid_argument("partial trace subset has repeated or out-of-range qubits");
        }
        kept[q] = true;
    }
    size_t traced_mask = 0;
    for (size_t q = 0; q < n; q++) {
        if (!kept[q]) {
            traced_mask |= size_t{1} << q;
        }
    }
    auto reduce = [&](size_t idx) {
        size_t out = 0;
        for (size_t k = 0; k < keep.size(); k++) {
            out |= ((idx >> keep[k]) & 1) << k;
        }
        return out;
    };
    const size_t dim = size_t{1} << n;
    const Eigen::Index rdim = Eigen::Index{1} << keep.size();
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(rdim, rdim);
    for (size_t c = 0; c < dim; c++) {
        for (size_t r = 0; r < dim; r++) {
            if (((r ^ c) & traced_mask) == 0) {
                out(reduce(r), reduce(c)) += rho.matrix()(r, c);
            }
        }
    }
    return DensityMatrix(keep.size(), std::move(out));
}

DensityMatrix simulate_density_matrix(const Circuit &circuit, const NoiseModel &noise, const SimulationLimits &limits) {
    check_capacity(circuit.n_qubits, limits.density_matrix_max_qubits, "density-matrix");
    noise.validate();
    DensityMatrix rho = DensityMatrix::pure(zero_state(circuit.n_qubits));
    for (const auto &g : circuit.gates) {
        apply_unitary(rho, g);
        apply_depolarizing(rho, g.targets, g.kind == Gate::Kind::kOneQubit ? noise.p1 : noise.p2);
    }
    return rho;
}

std::vector<PauliInsertion> sample_error_pattern(const Circuit &circuit, const NoiseModel &noise, Rng &rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<PauliInsertion> pattern;
    for (size_t gi = 0; gi < circuit.gates.size(); gi++) {
        const Gate &g = circuit.gates[gi];
        double p = g.kind == Gate::Kind::kOneQubit ? noise.p1 : noise.p2;
        if (p == 0 || unit(rng) >= p) {
            continue;
        }
        unsigned paulis = g.kind == Gate::Kind::kOneQubit ? 4u : 16u;
        unsigned pick = std::uniform_int_distribution<unsigned>(0, paulis - 1)(rng);
        if (pick != 0) {
            pattern.push_back({gi, pick});
        }
    }
    return pattern;
}

StateVector run_with_insertions(const Circuit &circuit, const std::vector<PauliInsertion> &pattern) {
    StateVector psi = zero_state(circuit.n_qubits);
    size_t next = 0;
    for (size_t gi = 0; gi < circuit.gates.size(); gi++) {
        const Gate &g = circuit.gates[gi];
        apply_gate(g, amplitudes(psi));
        while (next < pattern.size() && pattern[next].gate_index == gi) {
            unsigned code = pattern[next].pauli;
            for (size_t k = 0; k < g.targets.size(); k++) {
                unsigned digit = (code >> (2 * k)) & 3u;
                if (digit != 0) {
                    apply_one_qubit(pauli_matrix(digit), g.targets[k], amplitudes(psi));
                }
            }
            next++;
        }
    }
    return psi;
}

StateVector simulate_trajectory_shot(const Circuit &circuit, const NoiseModel &noise, Rng &rng,
                                     const SimulationLimits &limits) {
    check_capacity(circuit.n_qubits, limits.trajectory_max_qubits, "trajectory");
    noise.validate();
    return run_with_insertions(circuit, sample_error_pattern(circuit, noise, rng));
}

double exact_overlap(const DensityMatrix &a, const DensityMatrix &b) {
    if (a.n_qubits() != b.n_qubits()) {
        throw std::invalid_argument("overlap of density matrices with different dimensions");
    }
    // tr[AB] = sum_ij A_ij B_ji; the imaginary part vanishes for Hermitian inputs.
    Complex t = (a.matrix().transpose().cwiseProduct(b.matrix())).sum();
    return t.real();
}

double exact_fidelity(const DensityMatrix &a, const DensityMatrix &b) {
    double pa = exact_overlap(a, a);
    double pb = exact_overlap(b, b);
    if (!(pa > 0) || !(pb > 0)) {
        throw UndefinedValueError("fidelity undefined for zero purity", pa, pb);
    }
    return exact_overlap(a, b) / std::sqrt(pa * pb);
}

Circuit compile_for_platform(const Circuit &circuit, const PlatformProfile &platform) {
    ConnectivityGraph graph = platform.graph(circuit.n_qubits);
    if (graph.is_complete()) {
        return circuit;
    }
    RoutedCircuit routed = route(circuit, graph);
    Circuit out;
    out.n_qubits = circuit.n_qubits;
    out.label = circuit.label;
    out.depth = circuit.depth;
    out.seed = circuit.seed;
    std::vector<size_t> occupant(graph.n());
    for (size_t l = 0; l < routed.initial_layout.size(); l++) {
        occupant[routed.initial_layout[l]] = l;
    }
    for (const auto &op : routed.ops) {
        if (op.kind == RoutedOp::Kind::kGate) {
            out.gates.push_back(circuit.gates[op.gate_index]);
            continue;
        }
        out.gates.push_back(
            Gate::two_qubit(occupant[op.p0], occupant[op.p1], Eigen::Matrix4cd::Identity(), "swap_noise"));
        std::swap(occupant[op.p0], occupant[op.p1]);
    }
    return out;
}

DensityMatrix exact_platform_state(const PlatformProfile &platform, const Circuit &circuit,
                                   const SimulationLimits &limits) {
    Circuit compiled = compile_for_platform(circuit, platform);
    return apply_readout_channel(simulate_density_matrix(compiled, platform.noise, limits), platform.noise.readout_eps);
}

}  // namespace xplat
