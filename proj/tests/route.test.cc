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

#include "xplat/route.h"

#include <gtest/gtest.h>

#include <numeric>

using namespace xplat;

namespace {

// Ordinary least squares slope and R^2 of y against x.
std::pair<double, double> linear_fit(const std::vector<double> &x, const std::vector<double> &y) {
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0, sxx = 0, syy = 0;
    for (size_t i = 0; i < x.size(); i++) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    return {sxy / sxx, sxy * sxy / (sxx * syy)};
}

Circuit two_gate_circuit(size_t n, size_t a, size_t b) {
    Circuit c;
    c.n_qubits = n;
    c.gates.push_back(Gate::two_qubit(a, b, gates::cnot(), "cx"));
    return c;
}

}  // namespace

TEST(graph, basic_queries) {
    auto line = ConnectivityGraph::line(5);
    EXPECT_EQ(line.distance(0, 4), 4u);
    EXPECT_EQ(line.shortest_path(4, 1), (std::vector<size_t>{4, 3, 2, 1}));
    EXPECT_TRUE(line.connected());
    EXPECT_FALSE(line.is_complete());
    EXPECT_TRUE(ConnectivityGraph::complete(5).is_complete());
    EXPECT_EQ(ConnectivityGraph::ring(5).distance(0, 4), 1u);
    auto t = ConnectivityGraph::t_shape7();
    EXPECT_EQ(t.edges().size(), 6u);
    EXPECT_EQ(t.degree(1), 3u);
    EXPECT_EQ(t.distance(0, 6), 4u);
    EXPECT_TRUE(line.with_edge(0, 4).adjacent(0, 4));
    EXPECT_THROW(ConnectivityGraph("bad", 3, {{0, 3}}), std::invalid_argument);
    EXPECT_THROW(ConnectivityGraph("bad", 3, {{1, 1}}), std::invalid_argument);
}

TEST(graph, json_round_trip_and_names) {
    auto t = ConnectivityGraph::t_shape7();
    auto back = graph_from_json(graph_to_json(t));
    EXPECT_EQ(back.name(), t.name());
    EXPECT_EQ(back.edges(), t.edges());
    EXPECT_EQ(graph_from_spec("line", 6).distance(0, 5), 5u);
    EXPECT_TRUE(graph_from_spec("complete", 4).is_complete());
    EXPECT_THROW(graph_from_spec("hypercube", 4), std::invalid_argument);
}

TEST(routing, complete_graph_needs_no_swaps) {
    auto g = ConnectivityGraph::complete(7);
    for (size_t d : {1, 2, 3, 4}) {
        Circuit c = sample_qv_circuit(7, d, uint64_t{d});
        RoutedCost cost = route_circuit(c, g);
        EXPECT_EQ(cost.swap_count, 0u);
        EXPECT_EQ(cost.su4_count, 3 * d);
        EXPECT_EQ(cost.native_two_qubit_count, 9 * d);
        EXPECT_EQ(cost.cnot_equivalent_total, 9 * d);
        EXPECT_EQ(cost.heuristic, kRoutingHeuristic);
    }
}

TEST(routing, line_endpoints_need_distance_minus_one_swaps) {
    // Two gates force a layout where the second pair sits far apart.
    Circuit c;
    c.n_qubits = 6;
    c.gates.push_back(Gate::two_qubit(0, 1, gates::cnot(), "cx"));
    c.gates.push_back(Gate::two_qubit(2, 3, gates::cnot(), "cx"));
    c.gates.push_back(Gate::two_qubit(4, 5, gates::cnot(), "cx"));
    c.gates.push_back(Gate::two_qubit(0, 5, gates::cnot(), "cx"));
    auto g = ConnectivityGraph::line(6);
    RoutedCircuit r = route(c, g);
    EXPECT_TRUE(verify_routing(c, g, r));
    const size_t gap = g.distance(r.initial_layout[0], r.initial_layout[5]);
    EXPECT_GE(r.swap_count, gap - 1);
    RoutedCircuit single = route(two_gate_circuit(6, 0, 5), g);
    EXPECT_EQ(single.swap_count, 0u);
}

TEST(routing, verified_on_several_topologies) {
    Rng rng(12);
    for (const auto &g : {ConnectivityGraph::line(7), ConnectivityGraph::t_shape7(), ConnectivityGraph::ring(7),
                          ConnectivityGraph::complete(7)}) {
        for (int t = 0; t < 20; t++) {
            Circuit c = sample_qv_circuit(7, 1 + t % 6, rng);
            RoutedCircuit r = route(c, g);
            EXPECT_TRUE(verify_routing(c, g, r)) << g.name();
            size_t swaps = 0;
            for (const auto &op : r.ops) {
                if (op.kind == RoutedOp::Kind::kSwap) {
                    swaps++;
                    EXPECT_TRUE(g.adjacent(op.p0, op.p1));
                }
            }
            EXPECT_EQ(swaps, r.swap_count);
        }
    }
}

TEST(routing, verifier_rejects_tampering) {
    Circuit c = sample_qv_circuit(5, 3, uint64_t{4});
    auto g = ConnectivityGraph::line(5);
    RoutedCircuit r = route(c, g);
    ASSERT_TRUE(verify_routing(c, g, r));
    for (size_t i = 0; i < r.ops.size(); i++) {
        if (r.ops[i].kind == RoutedOp::Kind::kSwap) {
            RoutedCircuit broken = r;
            broken.ops.erase(broken.ops.begin() + static_cast<std::ptrdiff_t>(i));
            EXPECT_FALSE(verify_routing(c, g, broken));
            break;
        }
    }
    RoutedCircuit reordered = r;
    reordered.ops.pop_back();
    EXPECT_FALSE(verify_routing(c, g, reordered));
}

TEST(routing, disconnected_or_mismatched_graph_throws) {
    ConnectivityGraph split("split", 4, {{0, 1}, {2, 3}});
    EXPECT_FALSE(split.connected());
    EXPECT_THROW(route(sample_qv_circuit(4, 2, uint64_t{1}), split), std::invalid_argument);
    EXPECT_THROW(route(sample_qv_circuit(5, 2, uint64_t{1}), ConnectivityGraph::line(4)), std::invalid_argument);
}

TEST(routing, deterministic) {
    Circuit c = sample_qv_circuit(7, 4, uint64_t{9});
    auto g = ConnectivityGraph::t_shape7();
    EXPECT_EQ(route_circuit(c, g).swap_count, route_circuit(c, g).swap_count);
    EXPECT_EQ(route(c, g).initial_layout, route(c, g).initial_layout);
}

TEST(overhead, complete_graph_is_exact) {
    auto pts = overhead_curve(7, {1, 2, 3}, ConnectivityGraph::complete(7), 10, 5);
    ASSERT_EQ(pts.size(), 3u);
    for (const auto &p : pts) {
        EXPECT_EQ(p.mean_total, 9.0 * static_cast<double>(p.depth));
        EXPECT_EQ(p.std_total, 0.0);
    }
}

TEST(overhead, line_grows_linearly_above_complete) {
    std::vector<size_t> depths = {1, 2, 3, 4, 5, 6};
    auto line = overhead_curve(7, depths, ConnectivityGraph::line(7), 50, 3);
    auto full = overhead_curve(7, depths, ConnectivityGraph::complete(7), 50, 3);
    std::vector<double> x, y;
    // Greedy placement seats the first layer on edges, so depth 1 is free.
    EXPECT_EQ(line[0].mean_total, full[0].mean_total);
    for (size_t i = 0; i < depths.size(); i++) {
        if (depths[i] > 1) {
            EXPECT_GT(line[i].mean_total, full[i].mean_total);
        }
        x.push_back(static_cast<double>(depths[i]));
        y.push_back(line[i].mean_total);
    }
    auto [slope, r2] = linear_fit(x, y);
    EXPECT_GT(slope, 9.0);
    EXPECT_GT(r2, 0.95);
}

TEST(overhead, same_seed_same_curve) {
    auto a = overhead_curve(5, {2, 4}, ConnectivityGraph::line(5), 8, 11);
    auto b = overhead_curve(5, {2, 4}, ConnectivityGraph::line(5), 8, 11);
    for (size_t i = 0; i < a.size(); i++) {
        EXPECT_EQ(a[i].mean_total, b[i].mean_total);
    }
}

TEST(overhead, extra_edges_do_not_raise_mean_cost) {
    // Empirical check over the shared circuit sample: line -> ring -> complete.
    std::vector<size_t> depths = {2, 4, 6};
    auto line = overhead_curve(7, depths, ConnectivityGraph::line(7), 50, 21);
    auto ring = overhead_curve(7, depths, ConnectivityGraph::ring(7), 50, 21);
    auto full = overhead_curve(7, depths, ConnectivityGraph::complete(7), 50, 21);
    for (size_t i = 0; i < depths.size(); i++) {
        EXPECT_LE(ring[i].mean_total, line[i].mean_total);
        EXPECT_LE(full[i].mean_total, ring[i].mean_total);
    }
}
