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

#ifndef XPLAT_MEASURE_H
#define XPLAT_MEASURE_H

#include <compare>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "xplat/circuits.h"
#include "xplat/platforms.h"

namespace xplat {

enum class Basis : uint8_t { kX = 0, kY = 1, kZ = 2 };

char basis_char(Basis b);
Basis parse_basis(char c);

/// Per-qubit Pauli measurement bases. bases[k] selects the rotation applied to
/// qubit k before a computational-basis readout: identity for Z, H for X and
/// H*Sdg for Y.
struct MeasurementSetting {
    std::vector<Basis> bases;

    size_t size() const {
        return bases.size();
    }
    /// Qubit-0-first, e.g. "ZXY".
    std::string to_string() const;
    static MeasurementSetting parse(const std::string &s);

    auto operator<=>(const MeasurementSetting &) const = default;
};

/// Outcome bit k is qubit k (bit 0 = least significant).
struct OutcomeCount {
    uint64_t outcome;
    uint64_t count;

    auto operator<=>(const OutcomeCount &) const = default;
};

/// Qubit-0-first bitstring of an outcome, e.g. outcome 0b0110 on 4 qubits is
/// "0110".
std::string outcome_to_string(uint64_t outcome, size_t n);
uint64_t parse_outcome(const std::string &s);

struct SettingRecord {
    MeasurementSetting setting;
    /// Sorted by outcome, no zero counts.
    std::vector<OutcomeCount> counts;
    uint64_t shots = 0;
    /// Ordered pairs of distinct draws that repeat one underlying shot. Zero for
    /// measured data; bootstrap replicates drawn with replacement set it so the
    /// unbiased estimators skip those pairs like self-pairs.
    uint64_t repeat_pairs = 0;

    /// Throws InvariantError(record_index) if counts don't sum to shots or the
    /// setting width differs from n.
    void validate(size_t n, size_t record_index) const;
};

struct MeasurementDataset {
    std::string platform;
    std::string technology = "simulation";
    std::string circuit_label;
    size_t n_qubits = 0;
    std::vector<SettingRecord> records;
    uint64_t seed = 0;
    std::string timestamp;
    /// Extra header fields carried through unchanged (e.g. manifest_hash).
    nlohmann::json extra = nlohmann::json::object();

    size_t m_u() const {
        return records.size();
    }
    /// Shots per setting when uniform, 0 otherwise.
    uint64_t m_s() const;
    uint64_t total_shots() const;
    void validate() const;
};

/// Dataset with counts built from (setting, outcome list) data; used by tests
/// and by resampling.
SettingRecord make_record(MeasurementSetting setting, const std::vector<uint64_t> &outcomes);
std::vector<OutcomeCount> counts_from_histogram(const std::vector<uint64_t> &histogram);

// ---- Setting samplers -------------------------------------------------------

std::vector<MeasurementSetting> sample_settings_random(size_t n, size_t m_u, Rng &rng);

/// All 3^n Pauli settings in base-3 counting order (qubit 0 fastest).
std::vector<MeasurementSetting> all_pauli_settings(size_t n);

/// How single-qubit distances are combined into an n-qubit setting distance.
enum class DistanceAggregation {
    /// Sum of per-qubit design distances.
    kSum,
    /// Exact max over all n-qubit states of the trace distance between the two
    /// product rotations: 2 sin(min(pi, sum_k theta_k) / 2), theta_k the
    /// relative rotation angle on qubit k.
    kExactProduct,
};

/// Unit vectors of the 26-point Bloch design: the nonzero points of
/// {-1,0,1}^3, normalized (6 axes, 12 edge midpoints, 8 cube corners).
const std::vector<Eigen::Vector3d> &bloch_design();

/// max over the design of ||u_a rho u_a^dag - u_b rho u_b^dag||_1 for pure rho,
/// where u_b is the half-turn exchanging the b axis with z.
double single_qubit_distance(Basis a, Basis b);

/// Throws std::invalid_argument on width mismatch.
double setting_distance(const MeasurementSetting &a, const MeasurementSetting &b,
                        DistanceAggregation aggregation = DistanceAggregation::kSum);

/// Greedy far-apart sampling: the first setting is uniform; each later one is
/// the candidate (among n_candidates fresh uniform draws, distinct from each
/// other and from the settings already chosen while unchosen settings remain)
/// that maximizes the summed distance to all chosen settings. Ties go to the
/// earliest drawn candidate.
std::vector<MeasurementSetting> sample_settings_greedy(size_t n, size_t m_u, size_t n_candidates, Rng &rng,
                                                       DistanceAggregation aggregation = DistanceAggregation::kSum);

// ---- Acquisition -------------------------------------------------------------

/// Rotation applied before readout for a basis.
Eigen::Matrix2cd basis_rotation(Basis b);

/// Computational-basis outcome probabilities of `state` after the setting's
/// rotations.
std::vector<double> setting_probabilities(const StateVector &state, const MeasurementSetting &setting);
std::vector<double> setting_probabilities(const DensityMatrix &rho, const MeasurementSetting &setting);

/// Symmetric per-bit flips folded into an outcome distribution.
void apply_readout_flips(std::vector<double> &probs, size_t n, double eps);

/// Draws `shots` outcomes from `probs`.
std::vector<OutcomeCount> sample_counts(const std::vector<double> &probs, uint64_t shots, Rng &rng);

/// Prepared emulation of one (platform, circuit) pair. Circuits up to the
/// density-matrix cap use the exact mixed state; wider ones sample one
/// stochastic trajectory per shot (shots with identical error patterns share a
/// simulation).
class ShotSource {
   public:
    ShotSource(const PlatformProfile &platform, const Circuit &circuit, const SimulationLimits &limits = {});

    SettingRecord acquire(const MeasurementSetting &setting, uint64_t m_s, Rng &rng) const;

    bool uses_density_matrix() const {
        return rho_.has_value();
    }
    const Circuit &compiled() const {
        return compiled_;
    }

   private:
    PlatformProfile platform_;
    Circuit compiled_;
    std::optional<DensityMatrix> rho_;
    StateVector ideal_;
};

SettingRecord acquire_shots(const PlatformProfile &platform, const Circuit &circuit, const MeasurementSetting &setting,
                            uint64_t m_s, Rng &rng, const SimulationLimits &limits = {});

/// Acquires every setting, in parallel. Setting k draws its shots from substream
/// ("shots:<platform name>", k) of `seed`.
MeasurementDataset acquire_dataset(const PlatformProfile &platform, const Circuit &circuit,
                                   const std::vector<MeasurementSetting> &settings, uint64_t m_s, uint64_t seed,
                                   const SimulationLimits &limits = {});

/// Uniform subsample of m_u records without replacement, in original order.
MeasurementDataset subsample_settings(const MeasurementDataset &ds, size_t m_u, Rng &rng);

// ---- Record file (JSON Lines) -------------------------------------------------

/// Header line {platform, circuit_label, n_qubits, m_u, m_s, seed, ...} then one
/// {bases, counts} line per setting.
void write_dataset(std::ostream &out, const MeasurementDataset &ds);
void write_dataset(const std::filesystem::path &path, const MeasurementDataset &ds);
MeasurementDataset read_dataset(std::istream &in);
/// Throws ParseError on malformed input and InvariantError (with the record
/// index) on invariant violations.
MeasurementDataset ingest_dataset(const std::filesystem::path &path);

}  // namespace xplat

#endif
