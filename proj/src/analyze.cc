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

#include "xplat/analyze.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "xplat/parallel.h"

namespace xplat {

size_t PauliString::weight() const {
    return static_cast<size_t>(std::popcount(support()));
}

std::string PauliString::to_string() const {
    std::string s(n_qubits, 'I');
    for (size_t q = 0; q < n_qubits; q++) {
        uint64_t bit = uint64_t{1} << q;
        if (x & bit) {
            s[q] = 'X';
        } else if (y & bit) {
            s[q] = 'Y';
        } else if (z & bit) {
            s[q] = 'Z';
        }
    }
    return s;
}

PauliString PauliString::parse(const std::string &s) {
    if (s.size() > 64) {
        throw std::invalid_argument("Pauli string longer than 64 qubits");
    }
    PauliString p;
    p.n_qubits = s.size();
    for (size_t q = 0; q < s.size(); q++) {
        uint64_t bit = uint64_t{1} << q;
        switch (s[q]) {
            case 'I':
                break;
            case 'X':
                p.x |= bit;
                break;
            case 'Y':
                p.y |= bit;
                break;
            case 'Z':
                p.z |= bit;
                break;
            default:
                throw std::invalid_argument("bad Pauli label '" + std::string(1, s[q]) + "' in \"" + s + "\"");
        }
    }
    return p;
}

std::vector<Shot> expand_shots(const MeasurementDataset &ds) {
    std::vector<Shot> shots;
    shots.reserve(ds.total_shots());
    for (const auto &rec : ds.records) {
        Shot base;
        for (size_t q = 0; q < rec.setting.size(); q++) {
            uint64_t bit = uint64_t{1} << q;
            switch (rec.setting.bases[q]) {
                case Basis::kX:
                    base.x |= bit;
                    break;
                case Basis::kY:
                    base.y |= bit;
                    break;
                case Basis::kZ:
                    base.z |= bit;
                    break;
            }
        }
        for (const auto &oc : rec.counts) {
            base.outcome = oc.outcome;
            shots.insert(shots.end(), oc.count, base);
        }
    }
    return shots;
}

namespace {

// Qubit subsets of size 1..w, smallest size first, lexicographic within a size.
std::vector<std::vector<size_t>> subsets_up_to(size_t n, size_t w) {
    std::vector<std::vector<size_t>> out;
    for (size_t size = 1; size <= std::min(w, n); size++) {
        std::vector<size_t> idx(size);
        std::iota(idx.begin(), idx.end(), 0);
        while (true) {
            out.push_back(idx);
            size_t i = size;
            while (i > 0 && idx[i - 1] == n - size + i - 1) {
                i--;
            }
            if (i == 0) {
                break;
            }
            idx[i - 1]++;
            for (size_t j = i; j < size; j++) {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
    return out;
}

// Base-4 code with digit q (bits 2q, 2q+1) = 1, 2, 3 for X, Y, Z on qubit q.
uint64_t pauli_code(const PauliString &p) {
    uint64_t code = 0;
    for (size_t q = 0; q < p.n_qubits; q++) {
        uint64_t bit = uint64_t{1} << q;
        uint64_t digit = (p.x & bit) ? 1 : (p.y & bit) ? 2 : (p.z & bit) ? 3 : 0;
        code |= digit << (2 * q);
    }
    return code;
}

uint64_t shot_digit(const Shot &s, size_t q) {
    uint64_t bit = uint64_t{1} << q;
    return (s.x & bit) ? 1 : (s.y & bit) ? 2 : 3;
}

// Counts and eigenvalue sums of every candidate over a set of shots, visiting
// only the strings each shot can evaluate.
class Tally {
   public:
    Tally(size_t n, size_t max_weight) : subsets_(subsets_up_to(n, max_weight)), candidates_(paulis_up_to_weight(n, max_weight)) {
        if (n > 32) {
            throw std::invalid_argument("Pauli features support at most 32 qubits");
        }
        for (size_t k = 0; k < candidates_.size(); k++) {
            index_.emplace(pauli_code(candidates_[k]), k);
        }
        for (const auto &s : subsets_) {
            uint64_t m = 0;
            for (size_t q : s) {
                m |= uint64_t{1} << q;
            }
            masks_.push_back(m);
        }
    }

    const std::vector<PauliString> &candidates() const {
        return candidates_;
    }

    template <typename Shots>
    void run(const Shots &shots, std::vector<uint64_t> &counts, std::vector<int64_t> &sums) const {
        counts.assign(candidates_.size(), 0);
        sums.assign(candidates_.size(), 0);
        for (const Shot &s : shots) {
            for (size_t k = 0; k < subsets_.size(); k++) {
                uint64_t code = 0;
                for (size_t q : subsets_[k]) {
                    code |= shot_digit(s, q) << (2 * q);
                }
                size_t c = index_.at(code);
                counts[c]++;
                sums[c] += (std::popcount(s.outcome & masks_[k]) & 1) ? -1 : 1;
            }
        }
    }

   private:
    std::vector<std::vector<size_t>> subsets_;
    std::vector<uint64_t> masks_;
    std::vector<PauliString> candidates_;
    std::unordered_map<uint64_t, size_t> index_;
};

template <typename T>
struct IndexedView {
    const std::vector<T> &base;
    const std::vector<size_t> &idx;

    struct Iter {
        const IndexedView *v;
        size_t i;
        const T &operator*() const {
            return v->base[v->idx[i]];
        }
        Iter &operator++() {
            i++;
            return *this;
        }
        bool operator!=(const Iter &o) const {
            return i != o.i;
        }
    };
    Iter begin() const {
        return {this, 0};
    }
    Iter end() const {
        return {this, idx.size()};
    }
};

}  // namespace

std::vector<PauliString> paulis_up_to_weight(size_t n_qubits, size_t max_weight) {
    std::vector<PauliString> out;
    for (const auto &subset : subsets_up_to(n_qubits, max_weight)) {
        size_t combos = 1;
        for (size_t k = 0; k < subset.size(); k++) {
            combos *= 3;
        }
        for (size_t c = 0; c < combos; c++) {
            PauliString p;
            p.n_qubits = n_qubits;
            size_t rest = c;
            // Last qubit of the subset varies fastest.
            for (size_t k = subset.size(); k-- > 0;) {
                uint64_t bit = uint64_t{1} << subset[k];
                switch (rest % 3) {
                    case 0:
                        p.x |= bit;
                        break;
                    case 1:
                        p.y |= bit;
                        break;
                    default:
                        p.z |= bit;
                }
                rest /= 3;
            }
            out.push_back(p);
        }
    }
    return out;
}

std::vector<PauliString> evaluable_paulis(const std::vector<Shot> &shots, size_t n_qubits, size_t max_weight,
                                          size_t n_min) {
    Tally tally(n_qubits, max_weight);
    std::vector<uint64_t> counts;
    std::vector<int64_t> sums;
    tally.run(shots, counts, sums);
    std::vector<PauliString> out;
    for (size_t k = 0; k < counts.size(); k++) {
        if (counts[k] >= std::max<size_t>(n_min, 1)) {
            out.push_back(tally.candidates()[k]);
        }
    }
    return out;
}

std::vector<double> pauli_expectations(const std::vector<Shot> &shots, const std::vector<PauliString> &paulis,
                                       size_t n_min) {
    std::vector<double> out;
    out.reserve(paulis.size());
    for (const auto &p : paulis) {
        if (p.support() == 0) {
            throw std::invalid_argument("the identity string is not a feature");
        }
        uint64_t count = 0;
        int64_t sum = 0;
        for (const auto &s : shots) {
            if (s.matches(p)) {
                count++;
                sum += (std::popcount(s.outcome & p.support()) & 1) ? -1 : 1;
            }
        }
        if (count < std::max<size_t>(n_min, 1)) {
            throw std::invalid_argument("Pauli string " + p.to_string() + " is not evaluable: " +
                                        std::to_string(count) + " matching shots");
        }
        out.push_back(static_cast<double>(sum) / static_cast<double>(count));
    }
    return out;
}

FeatureMatrix build_feature_matrix(const std::vector<MeasurementDataset> &datasets, const FeatureOptions &options,
                                   Rng &rng) {
    if (datasets.empty()) {
        throw std::invalid_argument("no datasets for the feature matrix");
    }
    if (options.shots_per_sample == 0 || options.n_repeat == 0 || options.max_weight == 0) {
        throw std::invalid_argument("shots_per_sample, n_repeat and max_weight must be positive");
    }
    const size_t n = datasets.front().n_qubits;
    std::vector<std::vector<Shot>> shots;
    for (const auto &ds : datasets) {
        if (ds.n_qubits != n) {
            throw std::invalid_argument("datasets have different qubit counts");
        }
        shots.push_back(expand_shots(ds));
        const size_t total = shots.back().size();
        if (total < options.shots_per_sample) {
            throw std::invalid_argument("insufficient shots in '" + ds.platform + "': " + std::to_string(total) +
                                        " < shots_per_sample " + std::to_string(options.shots_per_sample));
        }
        if (options.strict && total < options.shots_per_sample * options.n_repeat) {
            throw std::invalid_argument("insufficient shots in '" + ds.platform + "' for strict sampling: " +
                                        std::to_string(total) + " < " +
                                        std::to_string(options.shots_per_sample * options.n_repeat));
        }
    }

    const uint64_t base = rng();
    std::vector<std::vector<size_t>> strict_order(datasets.size());
    if (options.strict) {
        for (size_t d = 0; d < datasets.size(); d++) {
            Rng r = make_rng(base, "pca:" + std::to_string(d));
            strict_order[d].resize(shots[d].size());
            std::iota(strict_order[d].begin(), strict_order[d].end(), 0);
            std::shuffle(strict_order[d].begin(), strict_order[d].end(), r);
        }
    }

    Tally tally(n, options.max_weight);
    const size_t n_rows = datasets.size() * options.n_repeat;
    const size_t n_cand = tally.candidates().size();
    std::vector<std::vector<uint64_t>> counts(n_rows);
    std::vector<std::vector<int64_t>> sums(n_rows);
    parallel_for(n_rows, [&](size_t row) {
        const size_t d = row / options.n_repeat;
        const size_t r = row % options.n_repeat;
        const size_t m = options.shots_per_sample;
        std::vector<size_t> pick;
        if (options.strict) {
            pick.assign(strict_order[d].begin() + static_cast<long>(r * m),
                        strict_order[d].begin() + static_cast<long>((r + 1) * m));
        } else {
            // Floyd's sampling of m distinct indices.
            Rng g = make_rng(base, "pca:" + std::to_string(d), r);
            const size_t total = shots[d].size();
            std::unordered_set<size_t> chosen;
            chosen.reserve(2 * m);
            for (size_t j = total - m; j < total; j++) {
                size_t t = std::uniform_int_distribution<size_t>(0, j)(g);
                chosen.insert(chosen.contains(t) ? j : t);
            }
            pick.assign(chosen.begin(), chosen.end());
            std::sort(pick.begin(), pick.end());
        }
        tally.run(IndexedView<Shot>{shots[d], pick}, counts[row], sums[row]);
    });

    std::vector<size_t> keep;
    for (size_t c = 0; c < n_cand; c++) {
        bool ok = true;
        for (size_t row = 0; row < n_rows && ok; row++) {
            ok = counts[row][c] >= std::max<size_t>(options.n_min, 1);
        }
        if (ok) {
            keep.push_back(c);
        }
    }
    if (keep.empty()) {
        throw std::invalid_argument("no Pauli string is evaluable in every sample; lower n_min or raise shots_per_sample");
    }

    FeatureMatrix fm;
    fm.options = options;
    for (size_t c : keep) {
        fm.columns.push_back(tally.candidates()[c]);
    }
    fm.values.resize(static_cast<Eigen::Index>(n_rows), static_cast<Eigen::Index>(keep.size()));
    for (size_t row = 0; row < n_rows; row++) {
        for (size_t j = 0; j < keep.size(); j++) {
            fm.values(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(j)) =
                static_cast<double>(sums[row][keep[j]]) / static_cast<double>(counts[row][keep[j]]);
        }
        const auto &ds = datasets[row / options.n_repeat];
        fm.labels.push_back({ds.platform, ds.technology, ds.circuit_label});
    }
    return fm;
}

PcaResult pca_project(const Eigen::MatrixXd &matrix, size_t k) {
    const size_t rows = static_cast<size_t>(matrix.rows());
    const size_t cols = static_cast<size_t>(matrix.cols());
    if (rows < 2) {
        throw std::invalid_argument("PCA needs at least 2 rows");
    }
    if (k == 0 || k > std::min(rows, cols)) {
        throw std::invalid_argument("PCA component count " + std::to_string(k) + " outside [1, " +
                                    std::to_string(std::min(rows, cols)) + "]");
    }
    const auto kk = static_cast<Eigen::Index>(k);
    Eigen::MatrixXd centered = matrix.rowwise() - matrix.colwise().mean();
    PcaResult out;
    out.explained_variance.assign(k, 0.0);
    const double total = centered.squaredNorm();
    if (total == 0) {
        out.zero_variance = true;
        out.projections = Eigen::MatrixXd::Zero(matrix.rows(), kk);
        out.axes = Eigen::MatrixXd::Identity(matrix.cols(), kk);
        return out;
    }
    Eigen::BDCSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinV);
    const Eigen::VectorXd &sv = svd.singularValues();
    out.axes = svd.matrixV().leftCols(kk);
    for (Eigen::Index c = 0; c < kk; c++) {
        Eigen::Index arg = 0;
        out.axes.col(c).cwiseAbs().maxCoeff(&arg);
        if (out.axes(arg, c) < 0) {
            out.axes.col(c) *= -1;
        }
        out.explained_variance[static_cast<size_t>(c)] = sv(c) * sv(c) / total;
    }
    out.projections = centered * out.axes;
    return out;
}

double silhouette_score(const Eigen::MatrixXd &points, const std::vector<int> &labels) {
    const size_t n = static_cast<size_t>(points.rows());
    if (labels.size() != n) {
        throw std::invalid_argument("silhouette: one label per point required");
    }
    std::vector<int> ids = labels;
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    if (ids.size() < 2) {
        throw std::invalid_argument("silhouette needs at least two clusters");
    }
    std::vector<size_t> label_index(n), sizes(ids.size(), 0);
    for (size_t i = 0; i < n; i++) {
        label_index[i] = static_cast<size_t>(std::lower_bound(ids.begin(), ids.end(), labels[i]) - ids.begin());
        sizes[label_index[i]]++;
    }
    std::vector<double> s(n, 0.0);
    parallel_for(n, [&](size_t i) {
        std::vector<double> sum(ids.size(), 0.0);
        for (size_t j = 0; j < n; j++) {
            if (j != i) {
                sum[label_index[j]] += (points.row(static_cast<Eigen::Index>(i)) -
                                        points.row(static_cast<Eigen::Index>(j)))
                                           .norm();
            }
        }
        const size_t own = label_index[i];
        if (sizes[own] < 2) {
            return;
        }
        double a = sum[own] / static_cast<double>(sizes[own] - 1);
        double b = std::numeric_limits<double>::infinity();
        for (size_t c = 0; c < ids.size(); c++) {
            if (c != own) {
                b = std::min(b, sum[c] / static_cast<double>(sizes[c]));
            }
        }
        double m = std::max(a, b);
        s[i] = m > 0 ? (b - a) / m : 0.0;
    });
    return pairwise_sum(s) / static_cast<double>(n);
}

namespace {

std::string csv_field(const std::string &s) {
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    return out + "\"";
}

}  // namespace

void write_feature_csv(std::ostream &out, const FeatureMatrix &fm) {
    out << "platform,technology,circuit";
    for (const auto &p : fm.columns) {
        out << ',' << p.to_string();
    }
    out << '\n';
    out << std::setprecision(10);
    for (size_t r = 0; r < fm.labels.size(); r++) {
        out << csv_field(fm.labels[r].platform) << ',' << csv_field(fm.labels[r].technology) << ','
            << csv_field(fm.labels[r].circuit);
        for (Eigen::Index c = 0; c < fm.values.cols(); c++) {
            out << ',' << fm.values(static_cast<Eigen::Index>(r), c);
        }
        out << '\n';
    }
}

void write_projection_csv(std::ostream &out, const FeatureMatrix &fm, const PcaResult &pca) {
    out << "label,technology,circuit";
    for (Eigen::Index c = 0; c < pca.projections.cols(); c++) {
        out << ",PC" << (c + 1);
    }
    out << '\n';
    out << std::setprecision(12);
    for (size_t r = 0; r < fm.labels.size(); r++) {
        out << csv_field(fm.labels[r].platform) << ',' << csv_field(fm.labels[r].technology) << ','
            << csv_field(fm.labels[r].circuit);
        for (Eigen::Index c = 0; c < pca.projections.cols(); c++) {
            out << ',' << pca.projections(static_cast<Eigen::Index>(r), c);
        }
        out << '\n';
    }
}

nlohmann::json pca_summary_json(const FeatureMatrix &fm, const PcaResult &pca) {
    return {{"explained_variance", pca.explained_variance},
            {"zero_variance", pca.zero_variance},
            {"rows", fm.values.rows()},
            {"features", fm.values.cols()},
            {"shots_per_sample", fm.options.shots_per_sample},
            {"n_repeat", fm.options.n_repeat},
            {"max_weight", fm.options.max_weight},
            {"n_min", fm.options.n_min},
            {"strict", fm.options.strict}};
}

}  // namespace xplat
