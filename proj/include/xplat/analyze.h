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

#ifndef XPLAT_ANALYZE_H
#define XPLAT_ANALYZE_H

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"
#include "xplat/measure.h"

namespace xplat {

/// Pauli string as three disjoint qubit masks; qubits in none of them carry I.
struct PauliString {
    size_t n_qubits = 0;
    uint64_t x = 0;
    uint64_t y = 0;
    uint64_t z = 0;

    uint64_t support() const {
        return x | y | z;
    }
    size_t weight() const;
    /// Qubit-0-first, e.g. "XIZ".
    std::string to_string() const;
    static PauliString parse(const std::string &s);

    auto operator<=>(const PauliString &) const = default;
};

/// One shot: the measured basis of every qubit as masks plus the outcome bits.
struct Shot {
    uint64_t x = 0;
    uint64_t y = 0;
    uint64_t z = 0;
    uint64_t outcome = 0;

    bool matches(const PauliString &p) const {
        return (p.x & ~x) == 0 && (p.y & ~y) == 0 && (p.z & ~z) == 0;
    }
};

/// Every shot of a dataset, record by record, outcomes in ascending order.
std::vector<Shot> expand_shots(const MeasurementDataset &ds);

/// All non-identity strings of weight 1..max_weight in a fixed order (by weight,
/// then support, then labels).
std::vector<PauliString> paulis_up_to_weight(size_t n_qubits, size_t max_weight);

/// Strings of weight <= max_weight whose every factor matches the measured basis
/// in at least n_min shots.
std::vector<PauliString> evaluable_paulis(const std::vector<Shot> &shots, size_t n_qubits, size_t max_weight = 2,
                                          size_t n_min = 20);

/// Mean of (-1)^{parity of the outcome on supp P} over the matching shots.
/// Throws std::invalid_argument if a string has fewer than n_min matching shots.
std::vector<double> pauli_expectations(const std::vector<Shot> &shots, const std::vector<PauliString> &paulis,
                                       size_t n_min = 1);

struct FeatureOptions {
    size_t shots_per_sample = 1000;
    size_t n_repeat = 500;
    size_t max_weight = 2;
    size_t n_min = 20;
    /// Repeats partition one shuffle of each dataset instead of drawing
    /// independently; needs n_repeat * shots_per_sample shots per dataset.
    bool strict = false;
};

struct RowLabel {
    std::string platform;
    std::string technology;
    std::string circuit;
};

struct FeatureMatrix {
    std::vector<PauliString> columns;
    std::vector<RowLabel> labels;
    Eigen::MatrixXd values;
    FeatureOptions options;
};

/// n_repeat rows per dataset. Row r of dataset k draws shots_per_sample shots
/// without replacement using substream ("pca:<k>", r) of a seed taken from
/// `rng`. Columns are the strings evaluable in every row. Throws
/// std::invalid_argument on insufficient shots, mixed widths or an empty
/// column set.
FeatureMatrix build_feature_matrix(const std::vector<MeasurementDataset> &datasets, const FeatureOptions &options,
                                   Rng &rng);

struct PcaResult {
    /// rows x k
    Eigen::MatrixXd projections;
    /// columns x k, unit vectors, largest-magnitude loading positive.
    Eigen::MatrixXd axes;
    /// Descending, fraction of the total variance carried by each component.
    std::vector<double> explained_variance;
    bool zero_variance = false;
};

/// Throws std::invalid_argument unless rows >= 2 and 1 <= k <= min(rows, cols).
PcaResult pca_project(const Eigen::MatrixXd &matrix, size_t k = 2);

/// Mean silhouette of labelled points (rows) under Euclidean distance. Points
/// in singleton clusters count 0.
double silhouette_score(const Eigen::MatrixXd &points, const std::vector<int> &labels);

void write_feature_csv(std::ostream &out, const FeatureMatrix &fm);
/// (label, technology, circuit, PC1, ..., PCk)
void write_projection_csv(std::ostream &out, const FeatureMatrix &fm, const PcaResult &pca);
/// Explained variances plus the feature options.
nlohmann::json pca_summary_json(const FeatureMatrix &fm, const PcaResult &pca);

}  // namespace xplat

#endif
