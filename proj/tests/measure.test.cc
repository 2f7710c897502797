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

#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "oracles.h"
#include "xplat/errors.h"
#include "xplat/parallel.h"

using namespace xplat;

namespace {

PlatformProfile profile(std::string name, double p1, double p2, double eps, nlohmann::json conn = "complete") {
    PlatformProfile p;
    p.name = std::move(name);
    p.noise = {p1, p2, eps};
    p.connectivity = std::move(conn);
    return p;
}

double mean_pairwise_distance(const std::vector<MeasurementSetting> &s) {
    double total = 0;
    size_t pairs = 0;
    for (size_t i = 0; i < s.size(); i++) {
        for (size_t j = i + 1; j < s.size(); j++) {
            total += setting_distance(s[i], s[j]);
            pairs++;
        }
    }
    return total / static_cast<double>(pairs);
}

}  // namespace

TEST(setting, parse_and_print) {
    auto s = MeasurementSetting::parse("ZXY");
    EXPECT_EQ(s.bases[0], Basis::kZ);
    EXPECT_EQ(s.bases[2], Basis::kY);
    EXPECT_EQ(s.to_string(), "ZXY");
    EXPECT_THROW(MeasurementSetting::parse("ZQ"), std::invalid_argument);
    EXPECT_EQ(outcome_to_string(0b0110, 4), "0110");
    EXPECT_EQ(outcome_to_string(0b0001, 4), "1000");
    EXPECT_EQ(parse_outcome("1000"), 1u);
    EXPECT_THROW(parse_outcome("10a"), std::invalid_argument);
}

TEST(setting, all_pauli_settings_are_distinct) {
    auto all = all_pauli_settings(5);
    EXPECT_EQ(all.size(), 243u);
    std::set<std::string> seen;
    for (auto &s : all) {
        seen.insert(s.to_string());
    }
    EXPECT_EQ(seen.size(), 243u);
}

TEST(probabilities, match_rotated_density_matrix_oracle) {
    Circuit c = sample_qv_circuit(3, 2, uint64_t{12});
    StateVector psi = apply_circuit(c, zero_state(3));
    DensityMatrix rho = simulate_density_matrix(c, {0, 0.05, 0});
    for (const auto &s : all_pauli_settings(3)) {
        auto p_pure = setting_probabilities(psi, s);
        auto p_mixed = setting_probabilities(rho, s);
        auto o_pure = oracle::probabilities(psi * psi.adjoint(), s);
        auto o_mixed = oracle::probabilities(rho.matrix(), s);
        for (size_t i = 0; i < 8; i++) {
            EXPECT_NEAR(p_pure[i], o_pure[i], 1e-12);
            EXPECT_NEAR(p_mixed[i], o_mixed[i], 1e-12);
        }
    }
}

TEST(probabilities, eigenstates_are_deterministic) {
    // |+> measured in X and |+i> = S H |0> measured in Y both give outcome 0.
    Circuit c;
    c.n_qubits = 2;
    Eigen::Matrix2cd s;
    s << 1, 0, 0, Complex(0, 1);
    c.gates.push_back(Gate::one_qubit(0, gates::hadamard(), "h"));
    c.gates.push_back(Gate::one_qubit(1, gates::hadamard(), "h"));
    c.gates.push_back(Gate::one_qubit(1, s, "s"));
    StateVector psi = apply_circuit(c, zero_state(2));
    auto p = setting_probabilities(psi, MeasurementSetting::parse("XY"));
    EXPECT_NEAR(p[0], 1.0, 1e-12);
}

TEST(readout, flips_fold_into_probabilities) {
    std::vector<double> p = {1, 0, 0, 0};
    apply_readout_flips(p, 2, 0.1);
    EXPECT_NEAR(p[0], 0.81, 1e-12);
    EXPECT_NEAR(p[1], 0.09, 1e-12);
    EXPECT_NEAR(p[3], 0.01, 1e-12);
    std::vector<double> q = {0.3, 0.2, 0.4, 0.1};
    apply_readout_flips(q, 2, 0.5);
    for (double v : q) {
        EXPECT_NEAR(v, 0.25, 1e-12);
    }
}

TEST(distance, single_qubit_design_values) {
    EXPECT_NEAR(single_qubit_distance(Basis::kZ, Basis::kZ), 0.0, 1e-12);
    EXPECT_NEAR(single_qubit_distance(Basis::kZ, Basis::kX), 2.0, 1e-9);
    EXPECT_NEAR(single_qubit_distance(Basis::kZ, Basis::kY), 2.0, 1e-9);
    for (Basis a : {Basis::kX, Basis::kY, Basis::kZ}) {
        for (Basis b : {Basis::kX, Basis::kY, Basis::kZ}) {
            EXPECT_NEAR(single_qubit_distance(a, b), single_qubit_distance(b, a), 1e-12);
            EXPECT_LE(single_qubit_distance(a, b), 2.0 + 1e-12);
        }
    }
    EXPECT_EQ(bloch_design().size(), 26u);
}

TEST(distance, setting_distance_properties) {
    auto a = MeasurementSetting::parse("ZZX");
    auto b = MeasurementSetting::parse("ZXX");
    auto c = MeasurementSetting::parse("XYZ");
    EXPECT_NEAR(setting_distance(a, a), 0.0, 1e-12);
    EXPECT_NEAR(setting_distance(a, b), single_qubit_distance(Basis::kZ, Basis::kX), 1e-12);
    EXPECT_NEAR(setting_distance(a, c), setting_distance(c, a), 1e-12);
    EXPECT_LE(setting_distance(a, c), setting_distance(a, b) + setting_distance(b, c) + 1e-12);
    double exact = setting_distance(a, c, DistanceAggregation::kExactProduct);
    EXPECT_GT(exact, 0.0);
    EXPECT_LE(exact, 2.0 + 1e-12);
    EXPECT_THROW(setting_distance(a, MeasurementSetting::parse("ZZ")), std::invalid_argument);
}

TEST(greedy, spreads_settings_further_than_random) {
    double greedy_total = 0, random_total = 0;
    for (uint64_t seed = 0; seed < 10; seed++) {
        Rng r1(seed), r2(seed + 1000);
        greedy_total += mean_pairwise_distance(sample_settings_greedy(5, 20, 30, r1));
        random_total += mean_pairwise_distance(sample_settings_random(5, 20, r2));
    }
    EXPECT_GT(greedy_total, random_total);
}

TEST(greedy, no_duplicates_and_exhausts_space) {
    Rng rng(2);
    auto s = sample_settings_greedy(3, 27, 10, rng);
    std::set<std::string> seen;
    for (auto &x : s) {
        seen.insert(x.to_string());
    }
    EXPECT_EQ(seen.size(), 27u);
    Rng a(5), b(5);
    auto first = sample_settings_greedy(4, 15, 8, a);
    auto second = sample_settings_greedy(4, 15, 8, b);
    EXPECT_EQ(first, second);
}

TEST(sampling, counts_follow_probabilities) {
    Rng rng(4);
    std::vector<double> p = {0.1, 0.0, 0.6, 0.3};
    auto counts = sample_counts(p, 100000, rng);
    uint64_t total = 0;
    for (auto &oc : counts) {
        total += oc.count;
        EXPECT_NE(oc.outcome, 1u);
        EXPECT_NEAR(static_cast<double>(oc.count) / 100000, p[oc.outcome], 0.006);
    }
    EXPECT_EQ(total, 100000u);
}

TEST(acquisition, trajectory_and_density_paths_agree) {
    Circuit c = sample_qv_circuit(3, 2, uint64_t{8});
    PlatformProfile p = profile("p", 0.0, 0.2, 0.05);
    SimulationLimits trajectories{0, 13};
    ShotSource exact(p, c), traj(p, c, trajectories);
    ASSERT_TRUE(exact.uses_density_matrix());
    ASSERT_FALSE(traj.uses_density_matrix());
    auto setting = MeasurementSetting::parse("XZY");
    auto expected = oracle::flip(oracle::probabilities(exact_platform_state(p, c).matrix(), setting), 3, 0.0);
    for (const ShotSource *src : {&exact, &traj}) {
        Rng rng(31);
        auto rec = src->acquire(setting, 40000, rng);
        EXPECT_EQ(rec.shots, 40000u);
        std::vector<double> freq(8, 0.0);
        for (auto &oc : rec.counts) {
            freq[oc.outcome] = static_cast<double>(oc.count) / 40000;
        }
        for (size_t i = 0; i < 8; i++) {
            EXPECT_NEAR(freq[i], expected[i], 0.012) << "outcome " << i;
        }
    }
}

TEST(acquisition, deterministic_across_thread_counts) {
    Circuit c = sample_qv_circuit(4, 2, uint64_t{3});
    PlatformProfile p = profile("ion", 0.001, 0.02, 0.01);
    Rng srng(1);
    auto settings = sample_settings_random(4, 30, srng);
    set_thread_count(1);
    auto a = acquire_dataset(p, c, settings, 300, 99);
    set_thread_count(4);
    auto b = acquire_dataset(p, c, settings, 300, 99);
    set_thread_count(0);
    std::ostringstream sa, sb;
    write_dataset(sa, a);
    write_dataset(sb, b);
    EXPECT_EQ(sa.str(), sb.str());
}

TEST(acquisition, capacity_limits) {
    PlatformProfile p = profile("p", 0, 0, 0);
    EXPECT_THROW(ShotSource(p, build_ghz(14)), CapacityError);
    EXPECT_NO_THROW(ShotSource(p, build_ghz(9)));
    EXPECT_FALSE(ShotSource(p, build_ghz(9)).uses_density_matrix());
}

TEST(dataset_io, round_trip) {
    Circuit c = build_ghz(3);
    Rng srng(2);
    auto ds = acquire_dataset(profile("a", 0, 0.01, 0.02), c, sample_settings_random(3, 10, srng), 50, 1);
    ds.extra["note"] = "kept";
    std::stringstream io;
    write_dataset(io, ds);
    auto back = read_dataset(io);
    EXPECT_EQ(back.platform, "a");
    EXPECT_EQ(back.n_qubits, 3u);
    EXPECT_EQ(back.m_u(), 10u);
    EXPECT_EQ(back.m_s(), 50u);
    EXPECT_EQ(back.extra["note"], "kept");
    for (size_t k = 0; k < ds.records.size(); k++) {
        EXPECT_EQ(back.records[k].setting, ds.records[k].setting);
        EXPECT_EQ(back.records[k].counts, ds.records[k].counts);
    }
}

TEST(dataset_io, invariant_violations_name_the_record) {
    std::string header = R"({"platform":"a","circuit_label":"c","n_qubits":2,"m_u":2,"m_s":4})";
    std::string good = R"({"bases":"ZZ","counts":{"00":4}})";
    std::string bad = R"({"bases":"ZX","counts":{"00":1,"11":2}})";
    std::stringstream in(header + "\n" + good + "\n" + bad + "\n");
    try {
        read_dataset(in);
        FAIL() << "expected InvariantError";
    } catch (const InvariantError &e) {
        ASSERT_TRUE(e.record_index.has_value());
        EXPECT_EQ(*e.record_index, 1u);
    }
    std::stringstream wrong_len(header + "\n" + R"({"bases":"ZZ","counts":{"000":4}})" + "\n" + good + "\n");
    EXPECT_THROW(read_dataset(wrong_len), InvariantError);
    std::stringstream garbage(header + "\n{not json\n");
    EXPECT_THROW(read_dataset(garbage), ParseError);
    std::stringstream empty("");
    EXPECT_THROW(read_dataset(empty), ParseError);
}

TEST(subsample, keeps_order_and_size) {
    Circuit c = build_ghz(3);
    auto ds = acquire_dataset(profile("a", 0, 0, 0), c, all_pauli_settings(3), 10, 1);
    Rng rng(3);
    auto sub = subsample_settings(ds, 9, rng);
    EXPECT_EQ(sub.m_u(), 9u);
    auto position = [&](const MeasurementSetting &s) {
        for (size_t i = 0; i < ds.records.size(); i++) {
            if (ds.records[i].setting == s) {
                return i;
            }
        }
        return ds.records.size();
    };
    for (size_t k = 1; k < sub.records.size(); k++) {
        EXPECT_LT(position(sub.records[k - 1].setting), position(sub.records[k].setting));
    }
    EXPECT_THROW(subsample_settings(ds, 28, rng), std::invalid_argument);
}
