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

#include "xplat/estimate.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

#include "xplat/errors.h"
#include "xplat/parallel.h"

namespace xplat {

std::string protocol_name(Protocol p) {
    return p == Protocol::kCrossCorrelation ? "I" : "II";
}

Protocol parse_protocol(const std::string &s) {
    if (s == "1" || s == "I") {
        return Protocol::kCrossCorrelation;
    }
    if (s == "2" || s == "II") {
        return Protocol::kShadow;
    }
    throw std::invalid_argument("unknown protocol '" + s + "' (expected 1 or 2)");
}

Protocol default_protocol(size_t n_qubits) {
    return n_qubits > kDenseShadowMaxQubits ? Protocol::kCrossCorrelation : Protocol::kShadow;
}

size_t hamming(const std::string &s, const std::string &t) {
    if (s.size() != t.size()) {
        throw std::invalid_argument("hamming distance of strings with different lengths");
    }
    size_t d = 0;
    for (size_t k = 0; k < s.size(); k++) {
        d += s[k] != t[k];
    }
    return d;
}

namespace {

void require_nonempty(const MeasurementDataset &ds) {
    if (ds.records.empty() || ds.total_shots() == 0) {
        throw std::invalid_argument("dataset '" + ds.platform + "' is empty");
    }
}

void require_aligned(const MeasurementDataset &a, const MeasurementDataset &b) {
    if (a.n_qubits != b.n_qubits) {
        throw std::invalid_argument("datasets have different qubit counts");
    }
    if (a.records.size() != b.records.size()) {
        throw std::invalid_argument("setting mismatch: protocol I needs the same settings on both platforms");
    }
    for (size_t k = 0; k < a.records.size(); k++) {
        if (a.records[k].setting != b.records[k].setting) {
            throw std::invalid_argument("setting mismatch at record " + std::to_string(k) +
                                        ": protocol I needs the same settings on both platforms");
        }
    }
}

std::vector<double> hamming_weights(size_t n) {
    // (-2)^{-D}
    std::vector<double> w(n + 1);
    double v = 1;
    for (size_t d = 0; d <= n; d++) {
        w[d] = v;
        v *= -0.5;
    }
    return w;
}

// sum_{s,s'} w[D(s,s')] n_s n'_s'
double weighted_correlation(const std::vector<OutcomeCount> &a, const std::vector<OutcomeCount> &b,
                            const std::vector<double> &w) {
    double total = 0;
    for (const auto &x : a) {
        double row = 0;
        for (const auto &y : b) {
            row += w[hamming(x.outcome, y.outcome)] * static_cast<double>(y.count);
        }
        total += row * static_cast<double>(x.count);
    }
    return total;
}

template <typename PerSetting>
double setting_mean(size_t m_u, PerSetting &&term) {
    std::vector<double> terms(m_u);
    parallel_for(m_u, [&](size_t k) { terms[k] = term(k); });
    return pairwise_sum(terms) / static_cast<double>(m_u);
}

double purity_protocol1_impl(const MeasurementDataset &ds, bool unbiased) {
    require_nonempty(ds);
    const auto w = hamming_weights(ds.n_qubits);
    for (size_t k = 0; k < ds.records.size(); k++) {
        if (unbiased && ds.records[k].shots < 2) {
            throw std::invalid_argument("unbiased purity needs at least 2 shots per setting (record " +
                                        std::to_string(k) + ")");
        }
    }
    double mean = setting_mean(ds.m_u(), [&](size_t k) {
        const auto &r = ds.records[k];
        const double m = static_cast<double>(r.shots);
        double corr = weighted_correlation(r.counts, r.counts, w);
        // Removing the self-pairs (D = 0, weight 1) leaves only distinct shots.
        const double self = m + static_cast<double>(r.repeat_pairs);
        return unbiased ? (corr - self) / (m * m - self) : corr / (m * m);
    });
    return std::ldexp(mean, static_cast<int>(ds.n_qubits));
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd &a, const Eigen::MatrixXcd &b) {
    Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); i++) {
        for (Eigen::Index j = 0; j < a.cols(); j++) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

Eigen::Matrix2cd pauli(unsigned code) {
    Eigen::Matrix2cd m;
    switch (code) {
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

unsigned pauli_code(Basis b) {
    switch (b) {
        case Basis::kX:
            return 1;
        case Basis::kY:
            return 2;
        case Basis::kZ:
            return 3;
    }
    return 0;
}

double ipow(double base, size_t e) {
    double v = 1;
    for (size_t k = 0; k < e; k++) {
        v *= base;
    }
    return v;
}

}  // namespace

double overlap_protocol1(const MeasurementDataset &ds_i, const MeasurementDataset &ds_j) {
    require_nonempty(ds_i);
    require_nonempty(ds_j);
    require_aligned(ds_i, ds_j);
    const auto w = hamming_weights(ds_i.n_qubits);
    double mean = setting_mean(ds_i.m_u(), [&](size_t k) {
        const auto &a = ds_i.records[k];
        const auto &b = ds_j.records[k];
        return weighted_correlation(a.counts, b.counts, w) /
               (static_cast<double>(a.shots) * static_cast<double>(b.shots));
    });
    return std::ldexp(mean, static_cast<int>(ds_i.n_qubits));
}

double purity_protocol1(const MeasurementDataset &ds) {
    return purity_protocol1_impl(ds, true);
}

double purity_protocol1_plugin(const MeasurementDataset &ds) {
    return purity_protocol1_impl(ds, false);
}

MeanShadow MeanShadow::build(const MeasurementDataset &ds, size_t max_qubits) {
    require_nonempty(ds);
    const size_t n = ds.n_qubits;
    if (n > max_qubits) {
        throw CapacityError("dense mean shadow is capped at " + std::to_string(max_qubits) + " qubits, got " +
                            std::to_string(n) + "; use protocol I");
    }
    MeanShadow s;
    s.n_qubits_ = n;
    s.shots_ = ds.total_shots();
    for (const auto &rec : ds.records) {
        s.repeat_pairs_ += rec.repeat_pairs;
    }
    s.coeffs_.assign(size_t{1} << (2 * n), 0.0);

    const size_t subsets = size_t{1} << n;
    std::vector<double> weight(subsets);
    for (size_t mask = 0; mask < subsets; mask++) {
        weight[mask] = ipow(3.0, static_cast<size_t>(std::popcount(mask)));
    }
    std::vector<size_t> code(subsets);
    std::vector<double> walsh(subsets);
    for (const auto &rec : ds.records) {
        if (rec.setting.size() != n) {
            throw std::invalid_argument("setting width differs from the dataset width");
        }
        code[0] = 0;
        for (size_t mask = 1; mask < subsets; mask++) {
            size_t q = static_cast<size_t>(std::countr_zero(mask));
            code[mask] = code[mask & (mask - 1)] + (size_t{pauli_code(rec.setting.bases[q])} << (2 * q));
        }
        // walsh[mask] = sum_s n_s (-1)^{|s & mask|}
        std::fill(walsh.begin(), walsh.end(), 0.0);
        for (const auto &oc : rec.counts) {
            walsh[oc.outcome] += static_cast<double>(oc.count);
        }
        for (size_t h = 1; h < subsets; h <<= 1) {
            for (size_t i = 0; i < subsets; i += 2 * h) {
                for (size_t j = i; j < i + h; j++) {
                    double x = walsh[j], y = walsh[j + h];
                    walsh[j] = x + y;
                    walsh[j + h] = x - y;
                }
            }
        }
        // Every term is an integer, so the accumulation is exact in any order.
        for (size_t mask = 0; mask < subsets; mask++) {
            s.coeffs_[code[mask]] += weight[mask] * walsh[mask];
        }
        Group &g = s.groups_[rec.setting];
        if (g.walsh.empty()) {
            g.walsh.assign(subsets, 0.0);
        }
        g.shots += rec.shots;
        for (size_t mask = 0; mask < subsets; mask++) {
            g.walsh[mask] += walsh[mask];
        }
    }
    const double inv = 1.0 / static_cast<double>(s.shots_);
    for (double &c : s.coeffs_) {
        c *= inv;
    }
    return s;
}

double MeanShadow::overlap(const MeanShadow &other) const {
    if (other.n_qubits_ != n_qubits_) {
        throw std::invalid_argument("mean shadows of different widths");
    }
    std::vector<double> prod(coeffs_.size());
    for (size_t i = 0; i < prod.size(); i++) {
        prod[i] = coeffs_[i] * other.coeffs_[i];
    }
    return std::ldexp(pairwise_sum(prod), -static_cast<int>(n_qubits_));
}

double MeanShadow::unbiased(const MeanShadow &other, bool self) const {
    if (other.n_qubits_ != n_qubits_) {
        throw std::invalid_argument("mean shadows of different widths");
    }
    const double mm = static_cast<double>(shots_) * static_cast<double>(other.shots_);
    const double all = overlap(other) * mm;
    // Pairs sharing a setting: sum_mask 9^|mask| A[mask] A'[mask] / 2^N.
    double same = 0;
    double same_weight = 0;
    for (const auto &[setting, g] : groups_) {
        auto it = other.groups_.find(setting);
        if (it == other.groups_.end()) {
            continue;
        }
        const Group &h = it->second;
        std::vector<double> terms(g.walsh.size());
        for (size_t mask = 0; mask < terms.size(); mask++) {
            terms[mask] = ipow(9.0, static_cast<size_t>(std::popcount(mask))) * g.walsh[mask] * h.walsh[mask];
        }
        same += pairwise_sum(terms);
        same_weight += static_cast<double>(g.shots) * static_cast<double>(h.shots);
    }
    same = std::ldexp(same, -static_cast<int>(n_qubits_));
    if (same_weight >= mm) {
        throw std::invalid_argument("no pair of shadows with differing settings; need at least two distinct settings");
    }
    const double differing = (all - same) / (mm - same_weight);
    if (self) {
        // Drop each shot's pairing with itself (and with its repeats), worth 5^N.
        const double self_pairs = static_cast<double>(shots_ + repeat_pairs_);
        same -= self_pairs * ipow(5.0, n_qubits_);
        same_weight -= self_pairs;
    }
    if (same_weight <= 0) {
        return differing;
    }
    const double k = ipow(3.0, n_qubits_);
    return ((k - 1) * differing + same / same_weight) / k;
}

double MeanShadow::overlap_unbiased(const MeanShadow &other) const {
    return unbiased(other, false);
}

double MeanShadow::purity_unbiased() const {
    return unbiased(*this, true);
}

Eigen::MatrixXcd MeanShadow::dense() const {
    const Eigen::Index dim = Eigen::Index{1} << n_qubits_;
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
    for (size_t code = 0; code < coeffs_.size(); code++) {
        if (coeffs_[code] == 0) {
            continue;
        }
        Eigen::MatrixXcd p = Eigen::MatrixXcd::Identity(1, 1);
        for (size_t k = 0; k < n_qubits_; k++) {
            p = kron(pauli(static_cast<unsigned>((code >> (2 * k)) & 3)), p);
        }
        out += coeffs_[code] * p;
    }
    return out / static_cast<double>(dim);
}

double overlap_protocol2(const MeasurementDataset &ds_i, const MeasurementDataset &ds_j) {
    if (ds_i.n_qubits != ds_j.n_qubits) {
        throw std::invalid_argument("datasets have different qubit counts");
    }
    return MeanShadow::build(ds_i).overlap_unbiased(MeanShadow::build(ds_j));
}

double purity_protocol2(const MeasurementDataset &ds) {
    return MeanShadow::build(ds).purity_unbiased();
}

double purity_protocol2_plugin(const MeasurementDataset &ds) {
    MeanShadow s = MeanShadow::build(ds);
    return s.overlap(s);
}

Eigen::MatrixXcd shadow_snapshot(const MeasurementSetting &setting, uint64_t outcome) {
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(1, 1);
    for (size_t k = 0; k < setting.size(); k++) {
        Eigen::Matrix2cd u = basis_rotation(setting.bases[k]);
        Eigen::Matrix2cd proj = Eigen::Matrix2cd::Zero();
        proj((outcome >> k) & 1, (outcome >> k) & 1) = 1;
        Eigen::Matrix2cd factor = 3.0 * u.adjoint() * proj * u - Eigen::Matrix2cd::Identity();
        out = kron(factor, out);
    }
    return out;
}

double shadow_pair_trace(const MeasurementSetting &setting_a, uint64_t outcome_a, const MeasurementSetting &setting_b,
                         uint64_t outcome_b) {
    if (setting_a.size() != setting_b.size()) {
        throw std::invalid_argument("shadow pair of different widths");
    }
    double v = 1;
    for (size_t k = 0; k < setting_a.size(); k++) {
        if (setting_a.bases[k] != setting_b.bases[k]) {
            v *= 0.5;  // 9 * 1/2 - 4
        } else if (((outcome_a ^ outcome_b) >> k) & 1) {
            v *= -4.0;
        } else {
            v *= 5.0;
        }
    }
    return v;
}

double overlap_protocol2_pairwise(const MeasurementDataset &ds_i, const MeasurementDataset &ds_j) {
    require_nonempty(ds_i);
    require_nonempty(ds_j);
    if (ds_i.n_qubits != ds_j.n_qubits) {
        throw std::invalid_argument("datasets have different qubit counts");
    }
    const bool self = &ds_i == &ds_j;
    const size_t n = ds_i.n_qubits;
    // Per record of ds_i: {trace sum, pair count} split by whether settings agree.
    std::vector<double> diff_sum(ds_i.records.size()), diff_pairs(ds_i.records.size());
    std::vector<double> same_sum(ds_i.records.size()), same_pairs(ds_i.records.size());
    parallel_for(ds_i.records.size(), [&](size_t a) {
        const auto &ra = ds_i.records[a];
        for (size_t b = 0; b < ds_j.records.size(); b++) {
            const auto &rb = ds_j.records[b];
            const bool agree = rb.setting == ra.setting;
            double acc = 0;
            for (const auto &x : ra.counts) {
                for (const auto &y : rb.counts) {
                    acc += static_cast<double>(x.count) * static_cast<double>(y.count) *
                           shadow_pair_trace(ra.setting, x.outcome, rb.setting, y.outcome);
                }
            }
            double pairs = static_cast<double>(ra.shots) * static_cast<double>(rb.shots);
            if (self && a == b) {
                const double self_pairs = static_cast<double>(ra.shots + ra.repeat_pairs);
                acc -= self_pairs * ipow(5.0, n);
                pairs -= self_pairs;
            }
            (agree ? same_sum : diff_sum)[a] += acc;
            (agree ? same_pairs : diff_pairs)[a] += pairs;
        }
    });
    const double dp = pairwise_sum(diff_pairs), sp = pairwise_sum(same_pairs);
    if (dp == 0) {
        throw std::invalid_argument("no pair of shadows with differing settings");
    }
    const double differing = pairwise_sum(diff_sum) / dp;
    if (sp == 0) {
        return differing;
    }
    const double k = ipow(3.0, n);
    return ((k - 1) * differing + pairwise_sum(same_sum) / sp) / k;
}

FidelityValue fidelity(double overlap, double purity_i, double purity_j) {
    if (!(purity_i > 0) || !(purity_j > 0)) {
        throw UndefinedValueError("fidelity undefined: non-positive purity estimate (" + std::to_string(purity_i) +
                                      ", " + std::to_string(purity_j) + ")",
                                  purity_i, purity_j);
    }
    double f = overlap / std::sqrt(purity_i * purity_j);
    return {f, f < 0 || f > 1};
}

OverlapEstimates estimate_overlaps(const MeasurementDataset &ds_i, const MeasurementDataset &ds_j, Protocol protocol) {
    if (ds_i.n_qubits != ds_j.n_qubits) {
        throw std::invalid_argument("datasets have different qubit counts (" + std::to_string(ds_i.n_qubits) + " vs " +
                                    std::to_string(ds_j.n_qubits) + ")");
    }
    if (protocol == Protocol::kCrossCorrelation) {
        return {overlap_protocol1(ds_i, ds_j), purity_protocol1(ds_i), purity_protocol1(ds_j)};
    }
    MeanShadow si = MeanShadow::build(ds_i);
    MeanShadow sj = MeanShadow::build(ds_j);
    return {si.overlap_unbiased(sj), si.purity_unbiased(), sj.purity_unbiased()};
}

MeasurementDataset subsystem_restrict(const MeasurementDataset &ds, const std::vector<size_t> &qubits) {
    if (qubits.empty()) {
        throw std::invalid_argument("subsystem must contain at least one qubit");
    }
    std::vector<bool> seen(ds.n_qubits, false);
    for (size_t q : qubits) {
        if (q >= ds.n_qubits) {
            throw std::invalid_argument("subsystem qubit " + std::to_string(q) + " out of range");
        }
        if (seen[q]) {
            throw std::invalid_argument("subsystem qubit " + std::to_string(q) + " repeated");
        }
        seen[q] = true;
    }
    MeasurementDataset out = ds;
    out.n_qubits = qubits.size();
    for (auto &rec : out.records) {
        MeasurementSetting s;
        for (size_t q : qubits) {
            s.bases.push_back(rec.setting.bases[q]);
        }
        std::map<uint64_t, uint64_t> agg;
        for (const auto &oc : rec.counts) {
            uint64_t r = 0;
            for (size_t k = 0; k < qubits.size(); k++) {
                r |= ((oc.outcome >> qubits[k]) & 1) << k;
            }
            agg[r] += oc.count;
        }
        rec.setting = std::move(s);
        rec.counts.clear();
        for (auto [o, c] : agg) {
            rec.counts.push_back({o, c});
        }
    }
    return out;
}

MeasurementDataset resample_dataset(const MeasurementDataset &ds, const std::vector<size_t> &setting_indices, Rng &rng) {
    MeasurementDataset out = ds;
    out.records.clear();
    out.records.reserve(setting_indices.size());
    for (size_t idx : setting_indices) {
        const SettingRecord &src = ds.records.at(idx);
        SettingRecord rec;
        rec.setting = src.setting;
        rec.shots = src.shots;
        // Draw shots by index so repeats of one shot can be counted.
        std::vector<uint64_t> start(src.counts.size());
        uint64_t acc = 0;
        for (size_t k = 0; k < src.counts.size(); k++) {
            start[k] = acc;
            acc += src.counts[k].count;
        }
        std::vector<uint32_t> hits(src.shots, 0);
        std::uniform_int_distribution<uint64_t> pick(0, src.shots - 1);
        for (uint64_t d = 0; d < src.shots; d++) {
            hits[pick(rng)]++;
        }
        for (size_t k = 0; k < src.counts.size(); k++) {
            uint64_t x = 0;
            for (uint64_t i = start[k]; i < start[k] + src.counts[k].count; i++) {
                x += hits[i];
                rec.repeat_pairs += uint64_t{hits[i]} * (hits[i] > 0 ? hits[i] - 1 : 0);
            }
            if (x > 0) {
                rec.counts.push_back({src.counts[k].outcome, x});
            }
        }
        out.records.push_back(std::move(rec));
    }
    return out;
}

namespace {

bool settings_aligned(const MeasurementDataset &a, const MeasurementDataset &b) {
    if (a.records.size() != b.records.size()) {
        return false;
    }
    for (size_t k = 0; k < a.records.size(); k++) {
        if (a.records[k].setting != b.records[k].setting) {
            return false;
        }
    }
    return true;
}

std::vector<size_t> draw_indices(size_t m, Rng &rng) {
    std::uniform_int_distribution<size_t> pick(0, m - 1);
    std::vector<size_t> idx(m);
    for (auto &i : idx) {
        i = pick(rng);
    }
    return idx;
}

}  // namespace

BootstrapResult bootstrap_fidelity(const MeasurementDataset &ds_i, const MeasurementDataset &ds_j, Protocol protocol,
                                   size_t replicates, Rng &rng) {
    if (replicates < 2) {
        throw std::invalid_argument("bootstrap needs at least 2 replicates");
    }
    require_nonempty(ds_i);
    require_nonempty(ds_j);
    if (protocol == Protocol::kCrossCorrelation) {
        require_aligned(ds_i, ds_j);
    }
    const bool aligned = settings_aligned(ds_i, ds_j);
    const uint64_t base = rng();
    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> values(replicates, nan);
    parallel_for(replicates, [&](size_t b) {
        Rng r = make_rng(base, "bootstrap", b);
        std::vector<size_t> idx_i = draw_indices(ds_i.m_u(), r);
        std::vector<size_t> idx_j = aligned ? idx_i : draw_indices(ds_j.m_u(), r);
        MeasurementDataset rs_i = resample_dataset(ds_i, idx_i, r);
        MeasurementDataset rs_j = resample_dataset(ds_j, idx_j, r);
        OverlapEstimates e = estimate_overlaps(rs_i, rs_j, protocol);
        if (e.purity_i > 0 && e.purity_j > 0) {
            values[b] = fidelity(e.overlap, e.purity_i, e.purity_j).value;
        }
    });
    std::vector<double> kept;
    for (double v : values) {
        if (!std::isnan(v)) {
            kept.push_back(v);
        }
    }
    BootstrapResult out;
    out.replicates = kept.size();
    out.discarded = replicates - kept.size();
    if (out.discarded * 2 > replicates) {
        throw UndefinedValueError("bootstrap: " + std::to_string(out.discarded) + " of " + std::to_string(replicates) +
                                      " replicates had non-positive purity",
                                  nan, nan);
    }
    out.mean = pairwise_sum(kept) / static_cast<double>(kept.size());
    std::vector<double> sq(kept.size());
    for (size_t k = 0; k < kept.size(); k++) {
        sq[k] = (kept[k] - out.mean) * (kept[k] - out.mean);
    }
    out.std = kept.size() > 1 ? std::sqrt(pairwise_sum(sq) / static_cast<double>(kept.size() - 1)) : 0.0;
    return out;
}

FidelityEstimate estimate_fidelity(const MeasurementDataset &ds_i, const MeasurementDataset &ds_j, Protocol protocol,
                                   size_t replicates, Rng &rng) {
    FidelityEstimate e;
    e.platform_i = ds_i.platform;
    e.platform_j = ds_j.platform;
    e.protocol = protocol;
    OverlapEstimates o = estimate_overlaps(ds_i, ds_j, protocol);
    e.overlap = o.overlap;
    e.purity_i = o.purity_i;
    e.purity_j = o.purity_j;
    FidelityValue f = fidelity(o.overlap, o.purity_i, o.purity_j);
    e.fidelity = f.value;
    e.out_of_range = f.out_of_range;
    e.m_u_used = std::min(ds_i.m_u(), ds_j.m_u());
    e.m_s = ds_i.m_s() == ds_j.m_s() ? ds_i.m_s() : 0;
    e.bootstrap_requested = replicates;
    if (replicates > 0) {
        e.bootstrap = bootstrap_fidelity(ds_i, ds_j, protocol, replicates, rng);
    }
    return e;
}

nlohmann::json estimate_to_json(const FidelityEstimate &e) {
    nlohmann::json flags = nlohmann::json::array();
    if (e.out_of_range) {
        flags.push_back("out_of_range");
    }
    if (e.bootstrap.discarded > 0) {
        flags.push_back("bootstrap_discards");
    }
    return {{"pair", {e.platform_i, e.platform_j}},
            {"protocol", protocol_name(e.protocol)},
            {"overlap", e.overlap},
            {"purities", {e.purity_i, e.purity_j}},
            {"fidelity", e.fidelity},
            {"bootstrap",
             {{"B", e.bootstrap_requested},
              {"mean", e.bootstrap.mean},
              {"std", e.bootstrap.std},
              {"discarded", e.bootstrap.discarded}}},
            {"flags", flags},
            {"m_u", e.m_u_used},
            {"m_s", e.m_s}};
}

std::pair<MeasurementDataset, MeasurementDataset> split_settings(const MeasurementDataset &ds) {
    if (ds.m_u() < 2) {
        throw std::invalid_argument("splitting settings needs at least 2 settings");
    }
    MeasurementDataset even = ds, odd = ds;
    even.records.clear();
    odd.records.clear();
    for (size_t k = 0; k < ds.records.size(); k++) {
        (k % 2 == 0 ? even : odd).records.push_back(ds.records[k]);
    }
    even.platform += "/even";
    odd.platform += "/odd";
    return {std::move(even), std::move(odd)};
}

std::pair<MeasurementDataset, MeasurementDataset> split_shots(const MeasurementDataset &ds, Rng &rng) {
    MeasurementDataset a = ds, b = ds;
    a.records.clear();
    b.records.clear();
    for (const auto &rec : ds.records) {
        if (rec.shots < 4) {
            throw std::invalid_argument("splitting shots needs at least 4 shots per setting");
        }
        std::vector<uint64_t> shots;
        shots.reserve(rec.shots);
        for (const auto &oc : rec.counts) {
            shots.insert(shots.end(), oc.count, oc.outcome);
        }
        std::shuffle(shots.begin(), shots.end(), rng);
        const size_t half = shots.size() / 2;
        a.records.push_back(
            make_record(rec.setting, std::vector<uint64_t>(shots.begin(), shots.begin() + static_cast<long>(half))));
        b.records.push_back(
            make_record(rec.setting, std::vector<uint64_t>(shots.begin() + static_cast<long>(half), shots.end())));
    }
    a.platform += "/half-a";
    b.platform += "/half-b";
    return {std::move(a), std::move(b)};
}

}  // namespace xplat
