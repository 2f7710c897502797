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

#ifndef XPLAT_PLATFORMS_H
#define XPLAT_PLATFORMS_H

#include <Eigen/Dense>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "xplat/circuits.h"
#include "xplat/route.h"

namespace xplat {

/// Digital error model of an emulated device. After every gate, with
/// probability p1 (one-qubit gates) or p2 (two-qubit gates), a Pauli drawn
/// uniformly from the 4^k Paulis on the gate's support is applied; readout
/// flips each measured bit independently with probability readout_eps.
struct NoiseModel {
    double p1 = 0;
    double p2 = 0;
    double readout_eps = 0;

    void validate() const;
    bool noiseless() const {
        return p1 == 0 && p2 == 0 && readout_eps == 0;
    }
};

enum class Technology { kTrappedIon, kSuperconducting, kSimulation };

std::string technology_name(Technology t);
Technology parse_technology(const std::string &s);

struct PlatformProfile {
    std::string name;
    Technology technology = Technology::kSimulation;
    NoiseModel noise;
    /// Either a shorthand ("complete", "line", "ring", "t-shaped") or a graph
    /// object; resolved against the circuit width when a circuit is compiled.
    nlohmann::json connectivity = "complete";

    ConnectivityGraph graph(size_t n_qubits) const;
};

/// {name, technology, p1, p2, readout_eps, connectivity}
nlohmann::json platform_to_json(const PlatformProfile &p);
PlatformProfile platform_from_json(const nlohmann::json &j);
PlatformProfile load_platform(const std::filesystem::path &path);

/// Qubit caps for the two simulation paths.
struct SimulationLimits {
    size_t density_matrix_max_qubits = 8;
    size_t trajectory_max_qubits = 13;
};

/// Hermitian, unit-trace, positive semidefinite operator on n qubits.
class DensityMatrix {
   public:
    DensityMatrix() = default;
    DensityMatrix(size_t n_qubits, Eigen::MatrixXcd matrix);

    static DensityMatrix pure(const StateVector &psi);
    static DensityMatrix maximally_mixed(size_t n_qubits);

    size_t n_qubits() const {
        return n_qubits_;
    }
    const Eigen::MatrixXcd &matrix() const {
        return matrix_;
    }
    Eigen::MatrixXcd &mutable_matrix() {
        return matrix_;
    }

    double trace() const;
    double purity() const;
    /// Throws InvariantError if Hermiticity, trace or positivity fail the
    /// 1e-10 / 1e-10 / -1e-9 tolerances.
    void check_valid() const;

   private:
    size_t n_qubits_ = 0;
    Eigen::MatrixXcd matrix_;
};

/// rho -> U rho U^dagger on the listed qubits.
void apply_unitary(DensityMatrix &rho, const Gate &gate);
/// rho -> (1-p) rho + p * (Tr_S rho) (x) I_S / 2^|S| on the qubit set S. This is
/// the uniform-Pauli twirl of S applied with probability p.
void apply_depolarizing(DensityMatrix &rho, const std::vector<size_t> &qubits, double p);
/// The effective state seen by Pauli-basis measurements with symmetric readout
/// flips: every qubit depolarized with probability 2*eps.
DensityMatrix apply_readout_channel(DensityMatrix rho, double eps);

/// Reduced state on `keep` (in the given order; keep[0] becomes qubit 0).
DensityMatrix partial_trace(const DensityMatrix &rho, const std::vector<size_t> &keep);

/// Exact mixed-state evolution: each gate followed by its depolarizing channel.
/// Readout noise is not included. Throws CapacityError above the cap.
DensityMatrix simulate_density_matrix(const Circuit &circuit, const NoiseModel &noise,
                                      const SimulationLimits &limits = {});

/// One Pauli insertion: apply pauli (base-4 digits, 0=I 1=X 2=Y 3=Z, digit k for
/// targets[k]) right after circuit.gates[gate_index].
struct PauliInsertion {
    size_t gate_index;
    unsigned pauli;

    auto operator<=>(const PauliInsertion &) const = default;
};

/// Draws the insertions of one stochastic trajectory.
std::vector<PauliInsertion> sample_error_pattern(const Circuit &circuit, const NoiseModel &noise, Rng &rng);

/// Runs the circuit from |0...0> with the given insertions.
StateVector run_with_insertions(const Circuit &circuit, const std::vector<PauliInsertion> &pattern);

/// A single stochastic trajectory. Averaging |psi><psi| over trajectories
/// reproduces simulate_density_matrix. Throws CapacityError above the cap.
StateVector simulate_trajectory_shot(const Circuit &circuit, const NoiseModel &noise, Rng &rng,
                                     const SimulationLimits &limits = {});

/// tr[a b]. Throws std::invalid_argument on dimension mismatch.
double exact_overlap(const DensityMatrix &a, const DensityMatrix &b);
/// tr[ab]/sqrt(tr[a^2] tr[b^2]). Throws UndefinedValueError on zero purity.
double exact_fidelity(const DensityMatrix &a, const DensityMatrix &b);

/// The circuit as executed on the platform, in logical labels. On restricted
/// connectivity every routing SWAP becomes an identity two-qubit gate on the
/// two logical qubits it exchanges (tagged "swap_noise"), so the SWAP
/// contributes its p2 channel while the logical state is unchanged.
Circuit compile_for_platform(const Circuit &circuit, const PlatformProfile &platform);

/// Exact state that randomized measurements on `platform` estimate: the
/// compiled noisy circuit followed by the readout channel.
DensityMatrix exact_platform_state(const PlatformProfile &platform, const Circuit &circuit,
                                   const SimulationLimits &limits = {});

}  // namespace xplat

#endif
