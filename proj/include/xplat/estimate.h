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

#ifndef XPLAT_ESTIMATE_H
#define XPLAT_ESTIMATE_H

#include <bit>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "xplat/measure.h"

namespace xplat {

/// kCrossCorrelation: Hamming-weighted cross-correlations of outcome
/// distributions measured under shared settings (Protocol I).
/// kShadow: products of classical-shadow snapshots (Protocol II).
enum class Protocol { kCrossCorrelation = 1, kShadow = 2 };

std::string protocol_name(Protocol p);
Protocol parse_protocol(const std::string &s);
/// Shadows up to 10 qubits, cross-correlations above.
Protocol default_protocol(size_t n_qubits);

/// Largest width for which shadow estimators materialize the dense mean shadow.
inline constexpr size_t kDenseShadowMaxQubits = 10;

/// Number of differing positions. Throws std::invalid_argument on length
/// mismatch.
size_t hamming(const std::string &s, const std::string &t);
inline size_t hamming(uint64_t s, uint64_t t) {
    return static_cast<size_t>(std::popcount(s ^ t));
}

// ---- Protocol I -----------------------------------------------------------------

/// 2^N * mean_U sum_{s,s'} (-2)^{-D[s,s']} P_i(s) P_j(s'), over observed outcome
/// pairs only. Requires order-aligned, identical setting lists.
double overlap_protocol1(const MeasurementDataset &ds_i, const MeasurementDataset &ds_j);
/// Same sum with the unbiased multinomial pair estimator:
/// n_s n_s' / (M(M-1)) for s != s' and n_s (n_s - 1) / (M(M-1)) on the diagonal.
double purity_protocol1(const MeasurementDataset &ds);
/// Plug-in (biased) version: empirical frequencies squared.
double purity_protocol1_plugin(const MeasurementDataset &ds);

// ---- Protocol II ----------------------------------------------------------------

/// Average classical shadow of a dataset in the Pauli basis:
/// rho_bar = 2^-N sum_P c_P P, with c_P = mean over shots of
/// 3^|P| (-1)^{parity of the outcome on supp P} when every factor of P matches
/// the measured basis, else 0. Shots are also kept grouped by setting so that
/// pairs of snapshots under a common setting can be weighted separately.
class MeanShadow {
   public:
    /// Throws CapacityError above max_qubits.
    static MeanShadow build(const MeasurementDataset &ds, size_t max_qubits = kDenseShadowMaxQubits);

    size_t n_qubits() const {
        return n_qubits_;
    }
    uint64_t shots() const {
        return shots_;
    }
    /// Indexed by base-4 Pauli code, digit k (bits 2k, 2k+1) for qubit k with
    /// 0=I 1=X 2=Y 3=Z.
    const std::vector<double> &coefficients() const {
        return coeffs_;
    }

    /// Plug-in tr[rho_bar rho_bar'] over all snapshot pairs.
    double overlap(const MeanShadow &other) const;
    /// Unbiased tr[rho rho'] for settings drawn uniformly from the 3^N Pauli
    /// bases, with or without replacement, or enumerated in full. Snapshot pairs
    /// under differing settings have mean D and pairs under a common setting
    /// mean E; the estimate is ((3^N - 1) D + E) / 3^N, falling back to D when
    /// no common-setting pair exists. Throws std::invalid_argument when every
    /// shot shares one setting.
    double overlap_unbiased(const MeanShadow &other) const;
    /// The same statistic on this shadow against itself, excluding each
    /// snapshot's pairing with itself.
    double purity_unbiased() const;
    /// The mean shadow as a 2^N x 2^N matrix.
    Eigen::MatrixXcd dense() const;

   private:
    struct Group {
        uint64_t shots = 0;
        /// sum over the group's shots of (-1)^{|s & mask|}, indexed by qubit mask.
        std::vector<double> walsh;
    };

    size_t n_qubits_ = 0;
    uint64_t shots_ = 0;
    uint64_t repeat_pairs_ = 0;
    std::vector<double> coeffs_;
    std::map<MeasurementSetting, Group> groups_;

    double unbiased(const MeanShadow &other, bool self) const;
};

/// Unbiased tr[rho_i rho_j] through MeanShadow::overlap_unbiased.
double overlap_protocol2(const MeasurementDataset &ds_i, const MeasurementDataset &ds_j);
/// Unbiased purity through MeanShadow::purity_unbiased. With one shot per
/// distinct setting this is (M^2 tr[rho_bar^2] - M 5^N) / (M (M - 1)).
double purity_protocol2(const MeasurementDataset &ds);
/// Plug-in (biased) tr[rho_bar^2].
double purity_protocol2_plugin(const MeasurementDataset &ds);

/// Snapshot of one shot: (x)_k (3 u_k^dag |s_k><s_k| u_k - I) as a dense matrix.
Eigen::MatrixXcd shadow_snapshot(const MeasurementSetting &setting, uint64_t outcome);
/// tr[snapshot_a snapshot_b] = prod_k (9 |<a_k|b_k>|^2 - 4).
double shadow_pair_trace(const MeasurementSetting &setting_a, uint64_t outcome_a, const MeasurementSetting &setting_b,
                         uint64_t outcome_b);
/// The overlap_unbiased statistic from explicit shot pairs; passing the same
/// dataset object twice gives the purity. Quadratic in the number of distinct (setting, outcome) entries;
/// meant for validation.
double overlap_protocol2_pairwise(const MeasurementDataset &ds_i, const MeasurementDataset &ds_j);

// ---- Fidelity ---------------------------------------------------------------------

struct FidelityValue {
    double value;
    /// Set when the raw value falls outside [0, 1]; the value is not clamped.
    bool out_of_range;
};

/// overlap / sqrt(purity_i purity_j). Throws UndefinedValueError carrying the
/// raw purities when either is non-positive.
FidelityValue fidelity(double overlap, double purity_i, double purity_j);

struct OverlapEstimates {
    double overlap;
    double purity_i;
    double purity_j;
};

OverlapEstimates estimate_overlaps(const MeasurementDataset &ds_i, const MeasurementDataset &ds_j, Protocol protocol);

// ---- Subsystems ---------------------------------------------------------------------

/// Keeps the listed qubits (qubits[k] becomes qubit k) in every setting and
/// outcome, summing counts over the discarded bits. Throws
/// std::invalid_argument on an empty, repeated or out-of-range subset.
MeasurementDataset subsystem_restrict(const MeasurementDataset &ds, const std::vector<size_t> &qubits);

// ---- Bootstrap ---------------------------------------------------------------------

/// Records at `setting_indices` with each one's shots redrawn with replacement
/// from its own counts. Repeated draws of one shot are tallied in
/// SettingRecord::repeat_pairs.
MeasurementDataset resample_dataset(const MeasurementDataset &ds, const std::vector<size_t> &setting_indices, Rng &rng);

struct BootstrapResult {
    double mean = 0;
    double std = 0;
    size_t replicates = 0;
    size_t discarded = 0;
};

/// Hierarchical bootstrap: settings resampled with replacement (the same
/// indices for both datasets when their setting lists are aligned), then shots
/// within each chosen setting. Replicates with non-positive purity are
/// discarded; more than B/2 discards throws UndefinedValueError. Replicate b
/// draws from substream ("bootstrap", b) of a seed taken from `rng`.
BootstrapResult bootstrap_fidelity(const MeasurementDataset &ds_i, const MeasurementDataset &ds_j, Protocol protocol,
                                   size_t replicates, Rng &rng);

struct FidelityEstimate {
    std::string platform_i;
    std::string platform_j;
    Protocol protocol = Protocol::kShadow;
    double overlap = 0;
    double purity_i = 0;
    double purity_j = 0;
    double fidelity = 0;
    bool out_of_range = false;
    BootstrapResult bootstrap;
    size_t bootstrap_requested = 0;
    size_t m_u_used = 0;
    uint64_t m_s = 0;
};

/// Point estimate plus bootstrap (skipped when replicates == 0).
FidelityEstimate estimate_fidelity(const MeasurementDataset &ds_i, const MeasurementDataset &ds_j, Protocol protocol,
                                   size_t replicates, Rng &rng);

/// {pair, protocol, overlap, purities, fidelity, bootstrap:{B, mean, std, discarded},
///  flags, m_u, m_s}
nlohmann::json estimate_to_json(const FidelityEstimate &e);

/// Even- and odd-indexed settings as two datasets.
std::pair<MeasurementDataset, MeasurementDataset> split_settings(const MeasurementDataset &ds);
/// Each setting's shots split at random into two halves; setting lists stay
/// aligned.
std::pair<MeasurementDataset, MeasurementDataset> split_shots(const MeasurementDataset &ds, Rng &rng);

}  // namespace xplat

#endif
