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

#include "xplat/measure.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include "xplat/errors.h"
#include "xplat/parallel.h"

namespace xplat {

char basis_char(Basis b) {
    switch (b) {
        case Basis::kX:
            return 'X';
        case Basis::kY:
            return 'Y';
        case Basis::kZ:
            return 'Z';
    }
    return '?';
}

Basis parse_basis(char c) {
    switch (c) {
        case 'X':
            return Basis::kX;
        case 'Y':
            return Basis::kY;
        case 'Z':
            return Basis::kZ;
    }
    throw std::invalid_argument(std::string("unknown measurement basis '") + c + "'");
}

std::string MeasurementSetting::to_string() const {
    std::string s;
    s.reserve(bases.size());
    for (Basis b : bases) {
        s.push_back(basis_char(b));
    }
    return s;
}

MeasurementSetting MeasurementSetting::parse(const std::string &s) {
    MeasurementSetting m;
    m.bases.reserve(s.size());
    for (char c : s) {
        m.bases.push_back(parse_basis(c));
    }
    return m;
}

std::string outcome_to_string(uint64_t outcome, size_t n) {
    std::string s(n, '0');
    for (size_t k = 0; k < n; k++) {
        if ((outcome >> k) & 1) {
            s[k] = '1';
        }
    }
    return s;
}

uint64_t parse_outcome(const std::string &s) {
    if (s.size() > 64) {
        throw std::invalid_argument("outcome strings longer than 64 bits are not supported");
    }
    uint64_t v = 0;
    for (size_t k = 0; k < s.size(); k++) {
        if (s[k] == '1') {
            v |= uint64_t{1} << k;
        } else if (s[k] != '0') {
            throw std::invalid_argument("outcome string '" + s + "' contains a non-binary character");
        }
    }
    return v;
}

void SettingRecord::validate(size_t n, size_t record_index) const {
    if (setting.size() != n) {
        throw InvariantError("record " + std::to_string(record_index) + ": setting has " +
                                 std::to_string(setting.size()) + " bases, expected " + std::to_string(n),
                             record_index);
    }
    uint64_t total = 0;
    for (const auto &oc : counts) {
        if (n < 64 && (oc.outcome >> n) != 0) {
            throw InvariantError("record " + std::to_string(record_index) + ": outcome wider than n_qubits",
                                 record_index);
        }
        total += oc.count;
    }
    if (total != shots) {
        throw InvariantError("record " + std::to_string(record_index) + ": counts sum to " + std::to_string(total) +
                                 ", expected " + std::to_string(shots) + " shots",
                             record_index);
    }
}

uint64_t MeasurementDataset::m_s() const {
    if (records.empty()) {
        return 0;
    }
    uint64_t s = records.front().shots;
    for (const auto &r : records) {
        if (r.shots != s) {
            return 0;
        }
    }
    return s;
}

uint64_t MeasurementDataset::total_shots() const {
    uint64_t t = 0;
    for (const auto &r : records) {
        t += r.shots;
    }
    return t;
}

void MeasurementDataset::validate() const {
    for (size_t i = 0; i < records.size(); i++) {
        records[i].validate(n_qubits, i);
    }
}

std::vector<OutcomeCount> counts_from_histogram(const std::vector<uint64_t> &histogram) {
    std::vector<OutcomeCount> out;
    for (size_t s = 0; s < histogram.size(); s++) {
        if (histogram[s] != 0) {
            out.push_back({s, histogram[s]});
        }
    }
    return out;
}

SettingRecord make_record(MeasurementSetting setting, const std::vector<uint64_t> &outcomes) {
    std::map<uint64_t, uint64_t> agg;
    for (uint64_t o : outcomes) {
        agg[o]++;
    }
    SettingRecord r;
    r.setting = std::move(setting);
    for (auto [o, c] : agg) {
        r.counts.push_back({o, c});
    }
    r.shots = outcomes.size();
    return r;
}

// ---- Samplers -------------------------------------------------------------------

namespace {

MeasurementSetting uniform_setting(size_t n, Rng &rng) {
    std::uniform_int_distribution<int> pick(0, 2);
    MeasurementSetting s;
    s.bases.resize(n);
    for (auto &b : s.bases) {
        b = static_cast<Basis>(pick(rng));
    }
    return s;
}

Eigen::Matrix3d half_turn(const Eigen::Vector3d &axis) {
    Eigen::Vector3d a = axis.normalized();
    return 2 * a * a.transpose() - Eigen::Matrix3d::Identity();
}

// Bloch rotation of the canonical unitary taking the basis' eigenbasis to Z.
const std::array<Eigen::Matrix3d, 3> &canonical_rotations() {
    static const std::array<Eigen::Matrix3d, 3> rots = {
        half_turn({1, 0, 1}),
        half_turn({0, 1, 1}),
        Eigen::Matrix3d::Identity(),
    };
    return rots;
}

struct DistanceTables {
    std::array<std::array<double, 3>, 3> design;
    std::array<std::array<double, 3>, 3> angle;
};

const DistanceTables &distance_tables() {
    static const DistanceTables tables = [] {
        DistanceTables t{};
        const auto &rots = canonical_rotations();
        for (int a = 0; a < 3; a++) {
            for (int b = 0; b < 3; b++) {
                double best = 0;
                for (const auto &r : bloch_design()) {
                    best = std::max(best, (rots[a] * r - rots[b] * r).norm());
                }
                t.design[a][b] = best;
                Eigen::Matrix3d rel = rots[a].transpose() * rots[b];
                double c = std::clamp((rel.trace() - 1) / 2, -1.0, 1.0);
                t.angle[a][b] = a == b ? 0.0 : std::acos(c);
            }
        }
        return t;
    }();
    return tables;
}

size_t setting_space_size(size_t n) {
    // 3^n, saturating at SIZE_MAX for large n.
    size_t v = 1;
    for (size_t k = 0; k < n; k++) {
        if (v > SIZE_MAX / 3) {
            return SIZE_MAX;
        }
        v *= 3;
    }
    return v;
}

}  // namespace

std::vector<MeasurementSetting> sample_settings_random(size_t n, size_t m_u, Rng &rng) {
    if (m_u < 1) {
        throw std::invalid_argument("m_u must be at least 1");
    }
    std::vector<MeasurementSetting> out;
    out.reserve(m_u);
    for (size_t i = 0; i < m_u; i++) {
        out.push_back(uniform_setting(n, rng));
    }
    return out;
}

std::vector<MeasurementSetting> all_pauli_settings(size_t n) {
    size_t total = setting_space_size(n);
    if (total > (size_t{1} << 24)) {
        throw CapacityError("refusing to enumerate 3^" + std::to_string(n) + " settings");
    }
    std::vector<MeasurementSetting> out;
    out.reserve(total);
    for (size_t idx = 0; idx < total; idx++) {
        MeasurementSetting s;
        s.bases.resize(n);
        size_t v = idx;
        for (size_t k = 0; k < n; k++) {
            s.bases[k] = static_cast<Basis>(v % 3);
            v /= 3;
        }
        out.push_back(std::move(s));
    }
    return out;
}

const std::vector<Eigen::Vector3d> &bloch_design() {
    static const std::vector<Eigen::Vector3d> points = [] {
        std::vector<Eigen::Vector3d> p;
        for (int x = -1; x <= 1; x++) {
            for (int y = -1; y <= 1; y++) {
                for (int z = -1; z <= 1; z++) {
                    if (x != 0 || y != 0 || z != 0) {
                        p.push_back(Eigen::Vector3d(x, y, z).normalized());
                    }
                }
            }
        }
        return p;
    }();
    return points;
}

double single_qubit_distance(Basis a, Basis b) {
    return distance_tables().design[static_cast<int>(a)][static_cast<int>(b)];
}

double setting_distance(const MeasurementSetting &a, const MeasurementSetting &b, DistanceAggregation aggregation) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("setting distance between settings of different width");
    }
    const auto &t = distance_tables();
    if (aggregation == DistanceAggregation::kSum) {
        double d = 0;
        for (size_t k = 0; k < a.size(); k++) {
            d += t.design[static_cast<int>(a.bases[k])][static_cast<int>(b.bases[k])];
        }
        return d;
    }
    double theta = 0;
    for (size_t k = 0; k < a.size(); k++) {
        theta += t.angle[static_cast<int>(a.bases[k])][static_cast<int>(b.bases[k])];
    }
    return 2 * std::sin(std::min(std::numbers::pi, theta) / 2);
}

std::vector<MeasurementSetting> sample_settings_greedy(size_t n, size_t m_u, size_t n_candidates, Rng &rng,
                                                       DistanceAggregation aggregation) {
    if (m_u < 1) {
        throw std::invalid_argument("m_u must be at least 1");
    }
    if (n_candidates < 1) {
        throw std::invalid_argument("n_candidates must be at least 1");
    }
    const size_t space = setting_space_size(n);
    const auto &table = distance_tables().design;

    std::vector<MeasurementSetting> chosen;
    std::set<MeasurementSetting> chosen_set;
    // basis_counts[k][b]: how many chosen settings measure qubit k in basis b.
    std::vector<std::array<double, 3>> basis_counts(n, {0, 0, 0});
    auto take = [&](MeasurementSetting s) {
        for (size_t k = 0; k < n; k++) {
            basis_counts[k][static_cast<int>(s.bases[k])] += 1;
        }
        chosen_set.insert(s);
        chosen.push_back(std::move(s));
    };
    auto score = [&](const MeasurementSetting &c) {
        double total = 0;
        if (aggregation == DistanceAggregation::kSum) {
            for (size_t k = 0; k < n; k++) {
                const auto &row = table[static_cast<int>(c.bases[k])];
                total += basis_counts[k][0] * row[0] + basis_counts[k][1] * row[1] + basis_counts[k][2] * row[2];
            }
        } else {
            for (const auto &u : chosen) {
                total += setting_distance(c, u, aggregation);
            }
        }
        return total;
    };

    take(uniform_setting(n, rng));
    std::vector<MeasurementSetting> candidates;
    while (chosen.size() < m_u) {
        candidates.clear();
        const size_t remaining = space == SIZE_MAX ? SIZE_MAX : space - std::min(space, chosen_set.size());
        if (remaining == 0) {
            // Every setting is taken; duplicates are unavoidable.
            for (size_t x = 0; x < n_candidates; x++) {
                candidates.push_back(uniform_setting(n, rng));
            }
        } else if (remaining <= n_candidates && space <= (size_t{1} << 20)) {
            for (auto &s : all_pauli_settings(n)) {
                if (!chosen_set.contains(s)) {
                    candidates.push_back(std::move(s));
                }
            }
            std::shuffle(candidates.begin(), candidates.end(), rng);
        } else {
            std::set<MeasurementSetting> drawn;
            const size_t want = std::min(n_candidates, remaining);
            size_t attempts = 0;
            while (candidates.size() < want && attempts < 1000 * n_candidates) {
                attempts++;
                MeasurementSetting s = uniform_setting(n, rng);
                if (chosen_set.contains(s) || drawn.contains(s)) {
                    continue;
                }
                drawn.insert(s);
                candidates.push_back(std::move(s));
            }
            if (candidates.empty()) {
                candidates.push_back(uniform_setting(n, rng));
            }
        }
        size_t best = 0;
        double best_score = score(candidates[0]);
        for (size_t x = 1; x < candidates.size(); x++) {
            double v = score(candidates[x]);
            if (v > best_score) {
                best = x;
                best_score = v;
            }
        }
        take(std::move(candidates[best]));
    }
    return chosen;
}

// ---- Acquisition ------------------------------------------------------------------

Eigen::Matrix2cd basis_rotation(Basis b) {
    switch (b) {
        case Basis::kX:
            return gates::hadamard();
        case Basis::kY:
            return gates::hadamard() * gates::s_dagger();
        case Basis::kZ:
            break;
    }
    return Eigen::Matrix2cd::Identity();
}

std::vector<double> setting_probabilities(const StateVector &state, const MeasurementSetting &setting) {
    StateVector psi = state;
    for (size_t k = 0; k < setting.size(); k++) {
        if (setting.bases[k] != Basis::kZ) {
            apply_one_qubit(basis_rotation(setting.bases[k]), k, amplitudes(psi));
        }
    }
    std::vector<double> p(static_cast<size_t>(psi.size()));
    for (size_t i = 0; i < p.size(); i++) {
        p[i] = std::norm(psi(static_cast<Eigen::Index>(i)));
    }
    return p;
}

std::vector<double> setting_probabilities(const DensityMatrix &rho, const MeasurementSetting &setting) {
    DensityMatrix r = rho;
    for (size_t k = 0; k < setting.size(); k++) {
        if (setting.bases[k] != Basis::kZ) {
            apply_unitary(r, Gate::one_qubit(k, basis_rotation(setting.bases[k])));
        }
    }
    std::vector<double> p(static_cast<size_t>(r.matrix().rows()));
    for (size_t i = 0; i < p.size(); i++) {
        p[i] = std::max(0.0, r.matrix()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)).real());
    }
    return p;
}

void apply_readout_flips(std::vector<double> &probs, size_t n, double eps) {
    if (eps == 0) {
        return;
    }
    for (size_t q = 0; q < n; q++) {
        const size_t bit = size_t{1} << q;
        for (size_t i = 0; i < probs.size(); i++) {
            if (i & bit) {
                continue;
            }
            double a = probs[i], b = probs[i | bit];
            probs[i] = (1 - eps) * a + eps * b;
            probs[i | bit] = eps * a + (1 - eps) * b;
        }
    }
}

std::vector<OutcomeCount> sample_counts(const std::vector<double> &probs, uint64_t shots, Rng &rng) {
    std::vector<double> cdf(probs.size());
    std::partial_sum(probs.begin(), probs.end(), cdf.begin());
    const double total = cdf.empty() ? 0.0 : cdf.back();
    if (!(total > 0)) {
        throw std::invalid_argument("cannot sample from an all-zero distribution");
    }
    std::uniform_real_distribution<double> unit(0.0, total);
    std::vector<uint64_t> histogram(probs.size(), 0);
    for (uint64_t s = 0; s < shots; s++) {
        double u = unit(rng);
        size_t idx = static_cast<size_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
        if (idx >= cdf.size()) {
            idx = cdf.size() - 1;
        }
        while (probs[idx] == 0 && idx > 0) {
            idx--;
        }
        histogram[idx]++;
    }
    return counts_from_histogram(histogram);
}

ShotSource::ShotSource(const PlatformProfile &platform, const Circuit &circuit, const SimulationLimits &limits)
    : platform_(platform), compiled_(compile_for_platform(circuit, platform)) {
    platform_.noise.validate();
    if (circuit.n_qubits <= limits.density_matrix_max_qubits) {
        rho_ = simulate_density_matrix(compiled_, platform_.noise, limits);
    } else {
        if (circuit.n_qubits > limits.trajectory_max_qubits) {
            throw CapacityError("trajectory simulation is capped at " + std::to_string(limits.trajectory_max_qubits) +
                                " qubits, got " + std::to_string(circuit.n_qubits));
        }
        ideal_ = run_with_insertions(compiled_, {});
    }
}

SettingRecord ShotSource::acquire(const MeasurementSetting &setting, uint64_t m_s, Rng &rng) const {
    if (m_s < 1) {
        throw std::invalid_argument("m_s must be at least 1");
    }
    const size_t n = compiled_.n_qubits;
    if (setting.size() != n) {
        throw std::invalid_argument("setting width differs from the circuit width");
    }
    SettingRecord rec;
    rec.setting = setting;
    rec.shots = m_s;
    if (rho_) {
        auto probs = setting_probabilities(*rho_, setting);
        apply_readout_flips(probs, n, platform_.noise.readout_eps);
        rec.counts = sample_counts(probs, m_s, rng);
        return rec;
    }
    std::map<std::vector<PauliInsertion>, uint64_t> patterns;
    for (uint64_t s = 0; s < m_s; s++) {
        patterns[sample_error_pattern(compiled_, platform_.noise, rng)]++;
    }
    std::vector<uint64_t> histogram(size_t{1} << n, 0);
    for (const auto &[pattern, shots] : patterns) {
        auto probs = setting_probabilities(pattern.empty() ? ideal_ : run_with_insertions(compiled_, pattern), setting);
        apply_readout_flips(probs, n, platform_.noise.readout_eps);
        for (const auto &oc : sample_counts(probs, shots, rng)) {
            histogram[oc.outcome] += oc.count;
        }
    }
    rec.counts = counts_from_histogram(histogram);
    return rec;
}

SettingRecord acquire_shots(const PlatformProfile &platform, const Circuit &circuit, const MeasurementSetting &setting,
                            uint64_t m_s, Rng &rng, const SimulationLimits &limits) {
    return ShotSource(platform, circuit, limits).acquire(setting, m_s, rng);
}

MeasurementDataset acquire_dataset(const PlatformProfile &platform, const Circuit &circuit,
                                   const std::vector<MeasurementSetting> &settings, uint64_t m_s, uint64_t seed,
                                   const SimulationLimits &limits) {
    ShotSource source(platform, circuit, limits);
    MeasurementDataset ds;
    ds.platform = platform.name;
    ds.technology = technology_name(platform.technology);
    ds.circuit_label = circuit.label;
    ds.n_qubits = circuit.n_qubits;
    ds.seed = seed;
    ds.records.resize(settings.size());
    const std::string stream = "shots:" + platform.name;
    parallel_for(settings.size(), [&](size_t k) {
        Rng rng = make_rng(seed, stream, k);
        ds.records[k] = source.acquire(settings[k], m_s, rng);
    });
    return ds;
}

MeasurementDataset subsample_settings(const MeasurementDataset &ds, size_t m_u, Rng &rng) {
    if (m_u > ds.m_u()) {
        throw std::invalid_argument("cannot subsample more settings than the dataset holds");
    }
    std::vector<size_t> idx(ds.m_u());
    std::iota(idx.begin(), idx.end(), size_t{0});
    for (size_t i = 0; i < m_u; i++) {
        std::uniform_int_distribution<size_t> pick(i, idx.size() - 1);
        std::swap(idx[i], idx[pick(rng)]);
    }
    idx.resize(m_u);
    std::sort(idx.begin(), idx.end());
    MeasurementDataset out = ds;
    out.records.clear();
    for (size_t i : idx) {
        out.records.push_back(ds.records[i]);
    }
    return out;
}

// ---- Record file --------------------------------------------------------------------

void write_dataset(std::ostream &out, const MeasurementDataset &ds) {
    nlohmann::json header = ds.extra;
    header["platform"] = ds.platform;
    header["technology"] = ds.technology;
    header["circuit_label"] = ds.circuit_label;
    header["n_qubits"] = ds.n_qubits;
    header["m_u"] = ds.m_u();
    header["m_s"] = ds.m_s();
    header["seed"] = ds.seed;
    if (!ds.timestamp.empty()) {
        header["timestamp"] = ds.timestamp;
    }
    out << header.dump() << "\n";
    const bool uniform = ds.m_s() != 0;
    for (const auto &r : ds.records) {
        nlohmann::json line;
        line["bases"] = r.setting.to_string();
        nlohmann::json counts = nlohmann::json::object();
        for (const auto &oc : r.counts) {
            counts[outcome_to_string(oc.outcome, ds.n_qubits)] = oc.count;
        }
        line["counts"] = std::move(counts);
        if (!uniform) {
            line["shots"] = r.shots;
        }
        out << line.dump() << "\n";
    }
}

void write_dataset(const std::filesystem::path &path, const MeasurementDataset &ds) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write dataset " + path.string());
    }
    write_dataset(out, ds);
}

MeasurementDataset read_dataset(std::istream &in) {
    MeasurementDataset ds;
    std::string line;
    size_t line_no = 0;
    auto parse_line = [&](const std::string &text) {
        try {
            return nlohmann::json::parse(text);
        } catch (const nlohmann::json::exception &e) {
            throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
        }
    };
    while (std::getline(in, line)) {
        line_no++;
        if (!line.empty()) {
            break;
        }
    }
    if (line.empty()) {
        throw ParseError("dataset file is empty");
    }
    nlohmann::json header = parse_line(line);
    uint64_t header_m_s = 0;
    size_t header_m_u = 0;
    try {
        ds.platform = header.at("platform").get<std::string>();
        ds.circuit_label = header.at("circuit_label").get<std::string>();
        ds.n_qubits = header.at("n_qubits").get<size_t>();
        header_m_u = header.at("m_u").get<size_t>();
        header_m_s = header.at("m_s").get<uint64_t>();
        ds.seed = header.value("seed", uint64_t{0});
        ds.technology = header.value("technology", "simulation");
        ds.timestamp = header.value("timestamp", "");
    } catch (const nlohmann::json::exception &e) {
        throw ParseError(std::string("dataset header: ") + e.what());
    }
    if (ds.n_qubits == 0 || ds.n_qubits > 64) {
        throw ParseError("dataset header: n_qubits must lie in [1, 64]");
    }
    for (const char *k : {"platform", "technology", "circuit_label", "n_qubits", "m_u", "m_s", "seed", "timestamp"}) {
        header.erase(k);
    }
    ds.extra = header;

    while (std::getline(in, line)) {
        line_no++;
        if (line.empty()) {
            continue;
        }
        const size_t index = ds.records.size();
        nlohmann::json j = parse_line(line);
        SettingRecord rec;
        try {
            std::string bases = j.at("bases").get<std::string>();
            try {
                rec.setting = MeasurementSetting::parse(bases);
            } catch (const std::invalid_argument &e) {
                throw InvariantError("record " + std::to_string(index) + ": " + e.what(), index);
            }
            rec.shots = j.contains("shots") ? j["shots"].get<uint64_t>() : header_m_s;
            std::map<uint64_t, uint64_t> agg;
            for (const auto &[key, value] : j.at("counts").items()) {
                if (key.size() != ds.n_qubits) {
                    throw InvariantError("record " + std::to_string(index) + ": outcome '" + key + "' has length " +
                                             std::to_string(key.size()) + ", expected " +
                                             std::to_string(ds.n_qubits),
                                         index);
                }
                if (!value.is_number_integer() || value.get<int64_t>() < 0) {
                    throw InvariantError(
                        "record " + std::to_string(index) + ": count for '" + key + "' is not a non-negative integer",
                        index);
                }
                uint64_t outcome;
                try {
                    outcome = parse_outcome(key);
                } catch (const std::invalid_argument &e) {
                    throw InvariantError("record " + std::to_string(index) + ": " + e.what(), index);
                }
                agg[outcome] += value.get<uint64_t>();
            }
            for (auto [o, c] : agg) {
                if (c > 0) {
                    rec.counts.push_back({o, c});
                }
            }
        } catch (const nlohmann::json::exception &e) {
            throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
        }
        rec.validate(ds.n_qubits, index);
        ds.records.push_back(std::move(rec));
    }
    if (ds.records.size() != header_m_u) {
        throw InvariantError("header declares m_u=" + std::to_string(header_m_u) + " but the file holds " +
                             std::to_string(ds.records.size()) + " records");
    }
    return ds;
}

MeasurementDataset ingest_dataset(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError("cannot open dataset " + path.string());
    }
    return read_dataset(in);
}

}  // namespace xplat
