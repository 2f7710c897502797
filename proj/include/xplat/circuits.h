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

#ifndef XPLAT_CIRCUITS_H
#define XPLAT_CIRCUITS_H

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "xplat/rng.h"

namespace xplat {

using Complex = std::complex<double>;
using StateVector = Eigen::VectorXcd;

/// Maximum deviation max|U^dagger U - I| tolerated for gate matrices.
inline constexpr double kUnitarityTolerance = 1e-10;

/// A one- or two-qubit unitary applied to explicit qubit indices.
///
/// For two-qubit gates the matrix acts on the local index `b0 + 2*b1`, where b0
/// is the bit of targets[0] and b1 the bit of targets[1]. Qubit 0 is always the
/// least significant bit of a basis-state index.
struct Gate {
    enum class Kind { kOneQubit, kTwoQubit };

    Kind kind;
    std::vector<size_t> targets;
    Eigen::MatrixXcd matrix;
    /// Informational tag ("h", "cx", "su4", "swap_noise", ...). Not used by
    /// simulation.
    std::string name;

    static Gate one_qubit(size_t q, Eigen::MatrixXcd m, std::string name = "u1");
    static Gate two_qubit(size_t a, size_t b, Eigen::MatrixXcd m, std::string name = "u2");

    /// Throws std::invalid_argument if the shape, targets or unitarity are off.
    void validate(size_t n_qubits) const;
};

struct Circuit {
    size_t n_qubits = 0;
    std::vector<Gate> gates;
    std::string label;
    /// Layer count, present for quantum volume circuits.
    std::optional<size_t> depth;
    /// Seed the circuit was generated from, when random.
    std::optional<uint64_t> seed;

    size_t two_qubit_gate_count() const;
    void validate() const;
};

/// A bijection on 0..n-1.
struct Permutation {
    std::vector<size_t> image;

    bool is_bijection() const;
};

namespace gates {
Eigen::Matrix2cd hadamard();
Eigen::Matrix2cd s_dagger();
Eigen::Matrix4cd cnot();
Eigen::Matrix4cd swap();
}  // namespace gates

/// Hadamard on qubit 0 then a CNOT ladder 0->1->...->n-1.
Circuit build_ghz(size_t n);

/// Uniform permutation of 0..n-1 by Fisher-Yates.
Permutation sample_permutation(size_t n, Rng &rng);

/// Haar-random 4x4 unitary with unit determinant.
Eigen::Matrix4cd sample_haar_su4(Rng &rng);

/// Haar-random dim x dim unitary (Ginibre matrix + QR with phase-corrected R).
Eigen::MatrixXcd sample_haar_unitary(size_t dim, Rng &rng);

/// d layers of a random qubit permutation followed by independent Haar SU(4)
/// gates on the pairs (pi(0),pi(1)), (pi(2),pi(3)), ... For odd n the last
/// label of each layer stays idle.
Circuit sample_qv_circuit(size_t n, size_t d, Rng &rng);

/// Same as above with the generator derived from `seed`; the seed is recorded
/// on the returned circuit.
Circuit sample_qv_circuit(size_t n, size_t d, uint64_t seed);

/// |0...0> on n qubits.
StateVector zero_state(size_t n);

/// In-place kernels over 2^n amplitudes.
void apply_gate(const Gate &gate, std::span<Complex> amps);
void apply_one_qubit(const Eigen::Matrix2cd &m, size_t q, std::span<Complex> amps);
void apply_two_qubit(const Eigen::Matrix4cd &m, size_t a, size_t b, std::span<Complex> amps);

inline std::span<Complex> amplitudes(StateVector &state) {
    return {state.data(), static_cast<size_t>(state.size())};
}

/// Returns (product of gates)|state>. Throws std::invalid_argument when the
/// state dimension is not 2^n_qubits.
StateVector apply_circuit(const Circuit &circuit, StateVector state);

/// {label, n_qubits, seed, depth, gates:[{name, targets, matrix}]} with the
/// matrix stored row-major as [re, im] pairs. Doubles are written in shortest
/// round-trip form, so parsing the output reproduces every matrix bit-for-bit.
nlohmann::json circuit_to_json(const Circuit &circuit);
Circuit circuit_from_json(const nlohmann::json &j);

}  // namespace xplat

#endif
