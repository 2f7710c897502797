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

#include <gtest/gtest.h>

#include <algorithm>

#include "oracles.h"
#include "xplat/errors.h"
#include "xplat/parallel.h"

using namespace xplat;

namespace {

PlatformProfile profile(std::string name, double p1, double p2, double eps) {
    PlatformProfile p;
    p.name = std::move(name);
    p.noise = {p1, p2, eps};
    return p;
}

// Dataset whose frequencies equal the exact outcome probabilities up to 1/scale.
MeasurementDataset near_exact_dataset(const oracle::Mat &rho, size_t n, const std::vector<MeasurementSetting> &settings,
                                      double scale = 1e7) {
    MeasurementDataset ds;
    ds.platform = "exact";
    ds.n_qubits = n;
    for (const auto &s : settings) {
        auto p = oracle::probabilities(rho, s);
        SettingRecord rec;
        rec.setting = s;
        for (size_t i = 0; i < p.size(); i++) {
            auto c = static_cast<uint64_t>(std::llround(std::max(0.0, p[i]) * scale));
            if (c > 0) {
                rec.counts.push_back({i, c});
                rec.shots += c;
            }
        }
        ds.records.push_back(rec);
    }
    return ds;
}

MeasurementDataset from_records(size_t n, std::vector<SettingRecord> records) {
    MeasurementDataset ds;
    ds.platform = "hand";
    ds.n_qubits = n;
    ds.records = std::move(records);
    return ds;
}

}  // namespace

TEST(protocol, names_and_defaults) {
    EXPECT_EQ(parse_protocol("1"), Protocol::kCrossCorrelation);
    EXPECT_EQ(parse_protocol("II"), Protocol::kShadow);
    EXPECT_THROW(parse_protocol("3"), std::invalid_argument);
    EXPECT_EQ(default_protocol(10), Protocol::kShadow);
    EXPECT_EQ(default_protocol(11), Protocol::kCrossCorrelation);
    EXPECT_EQ(hamming("0110", "0011"), 2u);
    EXPECT_EQ(hamming(uint64_t{0b0110}, uint64_t{0b0011}), 2u);
    EXPECT_THROW(hamming("01", "011"), std::invalid_argument);
}

TEST(protocol1, hand_computed_single_qubit) {
    auto ds = from_records(1, {make_record(MeasurementSetting::parse("Z"), {0, 1})});
    // 2 * (1/4 + 1/4 - 2 * 1/4 * 1/2)
    EXPECT_NEAR(purity_protocol1_plugin(ds), 0.5, 1e-15);
    // One ordered pair of distinct shots each way, weight -1/2: 2 * (-1/2).
    EXPECT_NEAR(purity_protocol1(ds), -1.0, 1e-15);
    auto one_shot = from_records(1, {make_record(MeasurementSetting::parse("Z"), {0})});
    EXPECT_THROW(purity_protocol1(one_shot), std::invalid_argument);
}

TEST(protocol1, exact_probability_identity) {
    // 2^N mean_U sum_{s,s'} (-2)^{-D} P_i(s) P_j(s') = tr[rho_i rho_j] over all 3^N Pauli settings.
    Circuit a = sample_qv_circuit(3, 2, uint64_t{1});
    Circuit b = sample_qv_circuit(3, 2, uint64_t{2});
    oracle::Mat ra = oracle::noisy_state(a, 0, 0.1);
    oracle::Mat rb = oracle::noisy_state(b, 0, 0.05);
    auto settings = all_pauli_settings(3);
    double sum = 0;
    for (const auto &s : settings) {
        auto pa = oracle::probabilities(ra, s);
        auto pb = oracle::probabilities(rb, s);
        for (size_t x = 0; x < 8; x++) {
            for (size_t y = 0; y < 8; y++) {
                sum += std::pow(-2.0, -__builtin_popcountll(x ^ y)) * pa[x] * pb[y];
            }
        }
    }
    double identity = 8 * sum / 27;
    EXPECT_NEAR(identity, oracle::trace_product(ra, rb), 1e-12);
    auto da = near_exact_dataset(ra, 3, settings);
    auto db = near_exact_dataset(rb, 3, settings);
    EXPECT_NEAR(overlap_protocol1(da, db), oracle::trace_product(ra, rb), 1e-5);
    EXPECT_NEAR(purity_protocol1(da), oracle::trace_product(ra, ra), 1e-5);
}

TEST(protocol1, requires_aligned_settings) {
    auto a = from_records(1, {make_record(MeasurementSetting::parse("Z"), {0, 1})});
    auto b = from_records(1, {make_record(MeasurementSetting::parse("X"), {0, 1})});
    EXPECT_THROW(overlap_protocol1(a, b), std::invalid_argument);
    auto empty = from_records(1, {});
    EXPECT_THROW(overlap_protocol1(empty, empty), std::invalid_argument);
}

TEST(shadow, snapshot_pair_trace_matches_dense_product) {
    Rng rng(3);
    for (int t = 0; t < 50; t++) {
        auto sa = sample_settings_random(3, 1, rng)[0];
        auto sb = sample_settings_random(3, 1, rng)[0];
        uint64_t oa = rng() & 7, ob = rng() & 7;
        double dense = oracle::trace_product(shadow_snapshot(sa, oa), shadow_snapshot(sb, ob));
        EXPECT_NEAR(shadow_pair_trace(sa, oa, sb, ob), dense, 1e-10);
    }
}

TEST(shadow, mean_shadow_matches_snapshot_average) {
    Circuit c = sample_qv_circuit(3, 2, uint64_t{5});
    Rng srng(1);
    auto ds = acquire_dataset(profile("a", 0, 0.05, 0.01), c, sample_settings_random(3, 15, srng), 7, 3);
    MeanShadow s = MeanShadow::build(ds);
    oracle::Mat avg = oracle::Mat::Zero(8, 8);
    for (const auto &rec : ds.records) {
        for (const auto &oc : rec.counts) {
            avg += static_cast<double>(oc.count) * shadow_snapshot(rec.setting, oc.outcome);
        }
    }
    avg /= static_cast<double>(ds.total_shots());
    EXPECT_LT((s.dense() - avg).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_NEAR(s.overlap(s), oracle::trace_product(avg, avg), 1e-9);
}

TEST(shadow, all_settings_average_reconstructs_state) {
    Circuit c = sample_qv_circuit(3, 2, uint64_t{9});
    oracle::Mat rho = oracle::noisy_state(c, 0, 0.08);
    auto ds = near_exact_dataset(rho, 3, all_pauli_settings(3));
    EXPECT_LT((MeanShadow::build(ds).dense() - rho).cwiseAbs().maxCoeff(), 1e-5);
}

TEST(shadow, hand_computed_pair_factors) {
    auto z = MeasurementSetting::parse("Z");
    auto x = MeasurementSetting::parse("X");
    EXPECT_DOUBLE_EQ(shadow_pair_trace(z, 0, z, 0), 5.0);
    EXPECT_DOUBLE_EQ(shadow_pair_trace(z, 0, z, 1), -4.0);
    EXPECT_DOUBLE_EQ(shadow_pair_trace(z, 0, x, 1), 0.5);
    auto ds = from_records(1, {make_record(z, {0}), make_record(x, {0})});
    EXPECT_NEAR(purity_protocol2(ds), 0.5, 1e-15);
    // Plug-in: (2 diag(2,-1)... ) -> mean of the 2x2 trace matrix [[5, .5], [.5, 5]]
    EXPECT_NEAR(purity_protocol2_plugin(ds), 2.75, 1e-15);
    // Common-setting pairs (z0, z1) give -4, differing ones 0.5: (2 * 0.5 - 4) / 3.
    auto mixed = from_records(1, {make_record(z, {0, 1}), make_record(x, {0})});
    EXPECT_NEAR(purity_protocol2(mixed), -1.0, 1e-12);
    EXPECT_NEAR(overlap_protocol2_pairwise(mixed, mixed), -1.0, 1e-12);
    auto same = from_records(1, {make_record(z, {0, 1})});
    EXPECT_THROW(purity_protocol2(same), std::invalid_argument);
}

TEST(shadow, mean_shadow_statistic_matches_pairwise_route) {
    Circuit c = sample_qv_circuit(3, 2, uint64_t{2});
    Rng srng(4);
    auto shared = sample_settings_random(3, 12, srng);
    auto other = sample_settings_random(3, 9, srng);
    auto a = acquire_dataset(profile("a", 0, 0.02, 0.01), c, shared, 25, 1);
    auto b = acquire_dataset(profile("b", 0, 0.1, 0.03), c, shared, 25, 2);
    auto d = acquire_dataset(profile("d", 0, 0.1, 0.03), c, other, 30, 3);
    EXPECT_NEAR(overlap_protocol2(a, b), overlap_protocol2_pairwise(a, b), 1e-9);
    EXPECT_NEAR(overlap_protocol2(a, d), overlap_protocol2_pairwise(a, d), 1e-9);
    EXPECT_NEAR(purity_protocol2(a), overlap_protocol2_pairwise(a, a), 1e-9);
    // One shot per distinct setting reduces to (M^2 tr - M 5^N) / (M (M - 1)).
    auto single = acquire_dataset(profile("s", 0, 0, 0), c, all_pauli_settings(3), 1, 5);
    double m = 27, tr = MeanShadow::build(single).overlap(MeanShadow::build(single));
    EXPECT_NEAR(purity_protocol2(single), (m * m * tr - m * 125) / (m * (m - 1)), 1e-9);
}

TEST(shadow, result_is_independent_of_record_order) {
    Circuit c = sample_qv_circuit(4, 2, uint64_t{2});
    Rng srng(8);
    auto a = acquire_dataset(profile("a", 0, 0.02, 0.01), c, sample_settings_random(4, 40, srng), 50, 1);
    auto b = acquire_dataset(profile("b", 0, 0.03, 0.01), c, sample_settings_random(4, 40, srng), 50, 2);
    auto shuffled = a;
    std::reverse(shuffled.records.begin(), shuffled.records.end());
    EXPECT_EQ(overlap_protocol2(a, b), overlap_protocol2(shuffled, b));
    EXPECT_EQ(purity_protocol2(a), purity_protocol2(shuffled));
    EXPECT_NEAR(overlap_protocol2(a, b), overlap_protocol2(b, a), 1e-12);
}

TEST(shadow, capacity_cap) {
    auto ds = from_records(11, {make_record(MeasurementSetting::parse("ZZZZZZZZZZZ"), {0, 1})});
    EXPECT_THROW(MeanShadow::build(ds), CapacityError);
    EXPECT_THROW(purity_protocol2(ds), CapacityError);
    EXPECT_NO_THROW(purity_protocol1(ds));
}

TEST(estimators, unbiased_purities_and_biased_plugins) {
    // N=2, all 9 settings, 10 shots each: per-acquisition noise is large, the
    // plug-in bias is of order 1/M_S.
    Circuit c = sample_qv_circuit(2, 2, uint64_t{4});
    PlatformProfile p = profile("a", 0, 0.15, 0.02);
    const double exact = exact_platform_state(p, c).purity();
    auto settings = all_pauli_settings(2);
    const int reps = 1500;
    std::vector<double> v1(reps), v2(reps), v1p(reps), v2p(reps);
    parallel_for(reps, [&](size_t r) {
        auto ds = acquire_dataset(p, c, settings, 10, 1000 + r);
        v1[r] = purity_protocol1(ds);
        v2[r] = purity_protocol2(ds);
        v1p[r] = purity_protocol1_plugin(ds);
        v2p[r] = purity_protocol2_plugin(ds);
    });
    auto z_score = [&](const std::vector<double> &v) {
        double mean = 0, var = 0;
        for (double x : v) {
            mean += x;
        }
        mean /= reps;
        for (double x : v) {
            var += (x - mean) * (x - mean);
        }
        var /= reps - 1;
        return (mean - exact) / std::sqrt(var / reps);
    };
    EXPECT_LT(std::abs(z_score(v1)), 4.0);
    EXPECT_LT(std::abs(z_score(v2)), 4.0);
    EXPECT_GT(z_score(v1p), 4.0);
    EXPECT_GT(z_score(v2p), 4.0);
}

TEST(fidelity, no_clamping_and_undefined_values) {
    auto f = fidelity(1.1, 1.0, 1.0);
    EXPECT_DOUBLE_EQ(f.value, 1.1);
    EXPECT_TRUE(f.out_of_range);
    EXPECT_FALSE(fidelity(0.5, 1.0, 1.0).out_of_range);
    try {
        fidelity(0.3, -0.2, 0.5);
        FAIL();
    } catch (const UndefinedValueError &e) {
        EXPECT_DOUBLE_EQ(e.purity_i, -0.2);
        EXPECT_DOUBLE_EQ(e.purity_j, 0.5);
    }
    EXPECT_THROW(fidelity(0.3, 0.5, 0.0), UndefinedValueError);
}

TEST(fidelity, noiseless_pair_is_one) {
    Circuit c = build_ghz(4);
    auto settings = all_pauli_settings(4);
    auto a = acquire_dataset(profile("a", 0, 0, 0), c, settings, 500, 1);
    auto b = acquire_dataset(profile("b", 0, 0, 0), c, settings, 500, 2);
    for (Protocol p : {Protocol::kCrossCorrelation, Protocol::kShadow}) {
        Rng rng(1);
        auto e = estimate_fidelity(a, b, p, 20, rng);
        EXPECT_NEAR(e.fidelity, 1.0, 0.05) << protocol_name(p);
        EXPECT_GT(e.bootstrap.std, 0.0);
        EXPECT_LT(e.bootstrap.std, 0.05);
        EXPECT_EQ(e.m_u_used, 81u);
        EXPECT_EQ(e.m_s, 500u);
    }
    auto three = acquire_dataset(profile("c", 0, 0, 0), build_ghz(3), all_pauli_settings(3), 10, 1);
    EXPECT_THROW(estimate_overlaps(a, three, Protocol::kShadow), std::invalid_argument);
}

TEST(subsystem, marginal_counts) {
    auto ds = from_records(3, {make_record(MeasurementSetting::parse("ZXY"), {0b000, 0b011, 0b101, 0b111, 0b111})});
    auto sub = subsystem_restrict(ds, {2, 0});
    ASSERT_EQ(sub.n_qubits, 2u);
    EXPECT_EQ(sub.records[0].setting.to_string(), "YZ");
    // new bit0 = old qubit 2, new bit1 = old qubit 0
    std::vector<OutcomeCount> expected = {{0b00, 1}, {0b10, 1}, {0b11, 3}};
    EXPECT_EQ(sub.records[0].counts, expected);
    EXPECT_THROW(subsystem_restrict(ds, {}), std::invalid_argument);
    EXPECT_THROW(subsystem_restrict(ds, {1, 1}), std::invalid_argument);
    EXPECT_THROW(subsystem_restrict(ds, {3}), std::invalid_argument);
}

TEST(subsystem, ghz_single_qubit_purity_is_half) {
    auto ds = acquire_dataset(profile("a", 0, 0, 0), build_ghz(5), all_pauli_settings(5), 400, 8);
    for (size_t q = 0; q < 5; q++) {
        auto sub = subsystem_restrict(ds, {q});
        EXPECT_NEAR(purity_protocol1(sub), 0.5, 0.02);
        EXPECT_NEAR(purity_protocol2(sub), 0.5, 0.02);
    }
}

TEST(bootstrap, resample_preserves_shots_and_support) {
    Circuit c = sample_qv_circuit(3, 2, uint64_t{1});
    Rng srng(2);
    auto ds = acquire_dataset(profile("a", 0, 0.02, 0), c, sample_settings_random(3, 10, srng), 100, 1);
    Rng rng(5);
    auto rs = resample_dataset(ds, {3, 3, 7}, rng);
    ASSERT_EQ(rs.m_u(), 3u);
    for (size_t k = 0; k < 3; k++) {
        const auto &src = ds.records[k == 2 ? 7 : 3];
        EXPECT_EQ(rs.records[k].shots, src.shots);
        uint64_t total = 0;
        for (const auto &oc : rs.records[k].counts) {
            total += oc.count;
            EXPECT_TRUE(std::any_of(src.counts.begin(), src.counts.end(),
                                    [&](const OutcomeCount &x) { return x.outcome == oc.outcome; }));
        }
        EXPECT_EQ(total, src.shots);
    }
    EXPECT_NO_THROW(rs.validate());
}

TEST(bootstrap, deterministic_across_thread_counts) {
    Circuit c = sample_qv_circuit(3, 2, uint64_t{1});
    auto settings = all_pauli_settings(3);
    auto a = acquire_dataset(profile("a", 0, 0.02, 0), c, settings, 200, 1);
    auto b = acquire_dataset(profile("b", 0, 0.05, 0), c, settings, 200, 2);
    for (Protocol p : {Protocol::kCrossCorrelation, Protocol::kShadow}) {
        set_thread_count(1);
        Rng r1(9);
        auto x = bootstrap_fidelity(a, b, p, 40, r1);
        set_thread_count(4);
        Rng r2(9);
        auto y = bootstrap_fidelity(a, b, p, 40, r2);
        set_thread_count(0);
        EXPECT_EQ(x.mean, y.mean);
        EXPECT_EQ(x.std, y.std);
        EXPECT_EQ(x.replicates + x.discarded, 40u);
    }
    Rng r(1);
    EXPECT_THROW(bootstrap_fidelity(a, b, Protocol::kShadow, 1, r), std::invalid_argument);
}

TEST(split, halves_are_aligned_or_disjoint) {
    Circuit c = build_ghz(3);
    auto ds = acquire_dataset(profile("a", 0, 0, 0), c, all_pauli_settings(3), 21, 1);
    auto [even, odd] = split_settings(ds);
    EXPECT_EQ(even.m_u(), 14u);
    EXPECT_EQ(odd.m_u(), 13u);
    Rng rng(2);
    auto [h1, h2] = split_shots(ds, rng);
    ASSERT_EQ(h1.m_u(), 27u);
    for (size_t k = 0; k < 27; k++) {
        EXPECT_EQ(h1.records[k].setting, h2.records[k].setting);
        EXPECT_EQ(h1.records[k].shots + h2.records[k].shots, 21u);
    }
    EXPECT_NO_THROW(overlap_protocol1(h1, h2));
}

TEST(estimate_json, fields) {
    FidelityEstimate e;
    e.platform_i = "a";
    e.platform_j = "b";
    e.protocol = Protocol::kCrossCorrelation;
    e.fidelity = 1.02;
    e.out_of_range = true;
    auto j = estimate_to_json(e);
    EXPECT_EQ(j["pair"][1], "b");
    EXPECT_EQ(j["protocol"], "I");
    EXPECT_EQ(j["flags"][0], "out_of_range");
    EXPECT_TRUE(j.contains("bootstrap"));
}
