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

#include "xplat/platforms.h"

#include <gtest/gtest.h>

#include "oracles.h"
#include "xplat/errors.h"
#include "xplat/measure.h"

using namespace xplat;

namespace {

PlatformProfile profile(double p1, double p2, double eps, nlohmann::json conn = "complete") {
    PlatformProfile p;
    p.name = "test";
    p.noise = {p1, p2, eps};
    p.connectivity = std::move(conn);
    return p;
}

}  // namespace

TEST(noise, validate_bounds) {
    EXPECT_THROW((NoiseModel{-0.1, 0, 0}.validate()), std::invalid_argument);
    EXPECT_THROW((NoiseModel{0, 1.5, 0}.validate()), std::invalid_argument);
    EXPECT_THROW((NoiseModel{0, 0, 1.2}.validate()), std::invalid_argument);
    EXPECT_NO_THROW((NoiseModel{1, 1, 0.5}.validate()));
}

TEST(density_matrix, noiseless_equals_pure_state) {
    Circuit c = sample_qv_circuit(4, 2, uint64_t{5});
    DensityMatrix rho = simulate_density_matrix(c, {});
    Eigen::VectorXcd psi = oracle::circuit_state(c);
    EXPECT_LT((rho.matrix() - psi * psi.adjoint()).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_NEAR(rho.purity(), 1.0, 1e-10);
    EXPECT_NO_THROW(rho.check_valid());
}

TEST(density_matrix, noisy_matches_pauli_sum_oracle) {
    Rng rng(8);
    for (size_t n : {2, 3, 4}) {
        Circuit c = sample_qv_circuit(n, 2, rng);
        c.gates.insert(c.gates.begin(), Gate::one_qubit(0, gates::hadamard(), "h"));
        c.gates.push_back(Gate::one_qubit(n - 1, gates::s_dagger(), "sdg"));
        const double p1 = 0.07, p2 = 0.13;
        DensityMatrix rho = simulate_density_matrix(c, {p1, p2, 0});
        oracle::Mat expected = oracle::noisy_state(c, p1, p2);
        EXPECT_LT((rho.matrix() - expected).cwiseAbs().maxCoeff(), 1e-10) << "n=" << n;
    }
}

TEST(depolarizing, full_strength_gives_maximally_mixed) {
    Circuit c = build_ghz(3);
    DensityMatrix rho = simulate_density_matrix(c, {});
    apply_depolarizing(rho, {0, 1, 2}, 1.0);
    EXPECT_LT((rho.matrix() - DensityMatrix::maximally_mixed(3).matrix()).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_NEAR(rho.purity(), 1.0 / 8, 1e-12);
}

TEST(readout_channel, matches_flipped_diagonal) {
    Circuit c = sample_qv_circuit(3, 2, uint64_t{1});
    DensityMatrix rho = simulate_density_matrix(c, {0.01, 0.03, 0});
    const double eps = 0.04;
    DensityMatrix r = apply_readout_channel(rho, eps);
    for (const auto &s : all_pauli_settings(3)) {
        auto expected = oracle::flip(oracle::probabilities(rho.matrix(), s), 3, eps);
        auto got = oracle::probabilities(r.matrix(), s);
        if (s.to_string() == "ZZZ") {
            for (size_t i = 0; i < got.size(); i++) {
                EXPECT_NEAR(got[i], expected[i], 1e-12);
            }
        }
        auto folded = setting_probabilities(rho, s);
        apply_readout_flips(folded, 3, eps);
        auto plain = oracle::flip(oracle::probabilities(rho.matrix(), s), 3, eps);
        for (size_t i = 0; i < folded.size(); i++) {
            EXPECT_NEAR(folded[i], plain[i], 1e-12);
        }
        // The channel form reproduces readout flips in every basis.
        for (size_t i = 0; i < got.size(); i++) {
            EXPECT_NEAR(got[i], plain[i], 1e-12) << s.to_string();
        }
    }
}

TEST(partial_trace, ghz_marginals) {
    DensityMatrix rho = simulate_density_matrix(build_ghz(5), {});
    DensityMatrix one = partial_trace(rho, {2});
    EXPECT_LT((one.matrix() - Eigen::Matrix2cd::Identity() / 2.0).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_NEAR(one.purity(), 0.5, 1e-12);
    DensityMatrix two = partial_trace(rho, {1, 4});
    Eigen::Matrix4cd expected = Eigen::Matrix4cd::Zero();
    expected(0, 0) = expected(3, 3) = 0.5;
    EXPECT_LT((two.matrix() - expected).cwiseAbs().maxCoeff(), 1e-12);
    Circuit c = sample_qv_circuit(4, 2, uint64_t{2});
    DensityMatrix r = simulate_density_matrix(c, {0, 0.05, 0});
    for (std::vector<size_t> keep : {std::vector<size_t>{3, 1}, std::vector<size_t>{0, 2, 3}}) {
        EXPECT_LT((partial_trace(r, keep).matrix() - oracle::reduce(r.matrix(), 4, keep)).cwiseAbs().maxCoeff(),
                  1e-12);
    }
    EXPECT_THROW(partial_trace(r, {0, 0}), std::invalid_argument);
    EXPECT_THROW(partial_trace(r, {5}), std::invalid_argument);
}

TEST(trajectories, average_converges_to_density_matrix) {
    Circuit c = sample_qv_circuit(3, 2, uint64_t{4});
    c.gates.insert(c.gates.begin(), Gate::one_qubit(1, gates::hadamard(), "h"));
    NoiseModel noise{0.2, 0.3, 0};
    DensityMatrix exact = simulate_density_matrix(c, noise);
    Rng rng(17);
    const int shots = 20000;
    Eigen::MatrixXcd avg = Eigen::MatrixXcd::Zero(8, 8);
    for (int i = 0; i < shots; i++) {
        StateVector psi = simulate_trajectory_shot(c, noise, rng);
        avg += psi * psi.adjoint();
    }
    avg /= shots;
    EXPECT_LT((avg - exact.matrix()).cwiseAbs().maxCoeff(), 0.02);
}

TEST(capacity, caps_raise_capacity_error) {
    EXPECT_THROW(simulate_density_matrix(build_ghz(9), {}), CapacityError);
    Rng rng(1);
    EXPECT_THROW(simulate_trajectory_shot(build_ghz(14), {}, rng), CapacityError);
    SimulationLimits wide{10, 13};
    EXPECT_NO_THROW(simulate_density_matrix(build_ghz(9), {}, wide));
}

TEST(overlap, exact_values) {
    DensityMatrix a = simulate_density_matrix(build_ghz(3), {});
    DensityMatrix mixed = DensityMatrix::maximally_mixed(3);
    EXPECT_NEAR(exact_fidelity(a, a), 1.0, 1e-12);
    EXPECT_NEAR(exact_overlap(a, mixed), 1.0 / 8, 1e-12);
    // F(pure, mixed) = (1/8) / sqrt(1 * 1/8)
    EXPECT_NEAR(exact_fidelity(a, mixed), std::sqrt(1.0 / 8), 1e-12);
    EXPECT_THROW(exact_overlap(a, DensityMatrix::maximally_mixed(2)), std::invalid_argument);
}

TEST(compile, complete_graph_is_identity_and_routing_preserves_state) {
    Circuit c = sample_qv_circuit(5, 3, uint64_t{6});
    Circuit same = compile_for_platform(c, profile(0, 0, 0));
    EXPECT_EQ(same.gates.size(), c.gates.size());
    Circuit routed = compile_for_platform(c, profile(0, 0, 0, "line"));
    EXPECT_GT(routed.gates.size(), c.gates.size());
    size_t swaps = 0;
    for (const auto &g : routed.gates) {
        swaps += g.name == "swap_noise";
    }
    EXPECT_EQ(routed.gates.size() - swaps, c.gates.size());
    // SWAP noise carriers are identities on the logical qubits.
    EXPECT_LT((oracle::circuit_state(routed) - oracle::circuit_state(c)).norm(), 1e-10);
    // but they carry two-qubit noise, so the line platform is noisier.
    double on_line = exact_platform_state(profile(0, 0.02, 0, "line"), c).purity();
    double on_complete = exact_platform_state(profile(0, 0.02, 0), c).purity();
    EXPECT_LT(on_line, on_complete);
}

TEST(platform_json, round_trip_and_presets) {
    PlatformProfile p = profile(0.001, 0.02, 0.01, "line");
    p.technology = Technology::kSuperconducting;
    PlatformProfile back = platform_from_json(platform_to_json(p));
    EXPECT_EQ(back.name, p.name);
    EXPECT_EQ(back.technology, p.technology);
    EXPECT_EQ(back.noise.p2, 0.02);
    EXPECT_EQ(back.connectivity, "line");
    EXPECT_THROW(platform_from_json({{"name", "x"}, {"p1", 2.0}}), std::invalid_argument);
    EXPECT_THROW(platform_from_json({{"p1", 0.0}}), std::invalid_argument);
    EXPECT_THROW(parse_technology("vacuum-tube"), std::invalid_argument);
    PlatformProfile ion = load_platform(std::string(XPLAT_CONFIG_DIR) + "/platforms/trapped-ion.json");
    EXPECT_EQ(ion.technology, Technology::kTrappedIon);
    EXPECT_TRUE(ion.graph(5).is_complete());
    PlatformProfile sc = load_platform(std::string(XPLAT_CONFIG_DIR) + "/platforms/superconducting.json");
    EXPECT_FALSE(sc.graph(5).is_complete());
}
