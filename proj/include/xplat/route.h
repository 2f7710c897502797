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

#ifndef XPLAT_ROUTE_H
#define XPLAT_ROUTE_H

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "xplat/circuits.h"

namespace xplat {

/// Undirected qubit coupling graph.
class ConnectivityGraph {
   public:
    ConnectivityGraph() = default;
    /// Throws std::invalid_argument for out-of-range or self-loop edges.
    ConnectivityGraph(std::string name, size_t n, std::vector<std::pair<size_t, size_t>> edges);

    static ConnectivityGraph complete(size_t n);
    static ConnectivityGraph line(size_t n);
    static ConnectivityGraph ring(size_t n);
    /// 7-qubit T/H-shaped heavy-hex fragment:
    /// 0-1, 1-2, 1-3, 3-5, 4-5, 5-6.
    static ConnectivityGraph t_shape7();

    const std::string &name() const {
        return name_;
    }
    size_t n() const {
        return n_;
    }
    const std::vector<std::pair<size_t, size_t>> &edges() const {
        return edges_;
    }
    const std::vector<size_t> &neighbors(size_t v) const {
        return adjacency_[v];
    }
    size_t degree(size_t v) const {
        return adjacency_[v].size();
    }
    bool adjacent(size_t a, size_t b) const;
    bool connected() const;
    bool is_complete() const;
    /// Hop distance; SIZE_MAX when unreachable.
    size_t distance(size_t a, size_t b) const;
    /// Vertices of a shortest path from a to b inclusive. Among equal-length
    /// paths the lexicographically smallest by vertex index is returned.
    std::vector<size_t> shortest_path(size_t a, size_t b) const;

    /// A copy with one extra edge (no-op if already present).
    ConnectivityGraph with_edge(size_t a, size_t b) const;

   private:
    void build();

    std::string name_;
    size_t n_ = 0;
    std::vector<std::pair<size_t, size_t>> edges_;
    std::vector<std::vector<size_t>> adjacency_;
    std::vector<size_t> dist_;
};

/// {name, n, edges:[[a,b],...]}
nlohmann::json graph_to_json(const ConnectivityGraph &g);
ConnectivityGraph graph_from_json(const nlohmann::json &j);
/// Accepts either a graph object or one of the shorthand names "complete",
/// "line", "ring", "t-shaped" (sized to n).
ConnectivityGraph graph_from_spec(const nlohmann::json &j, size_t n);

/// One step of a routed execution. Swap ops exchange the logical qubits held by
/// two adjacent physical qubits; gate ops execute circuit.gates[gate_index] on
/// the physical qubits (p0, p1).
struct RoutedOp {
    enum class Kind { kGate, kSwap };
    Kind kind;
    size_t gate_index = 0;
    size_t p0 = 0;
    size_t p1 = 0;
};

struct RoutedCircuit {
    /// initial_layout[logical] = physical.
    std::vector<size_t> initial_layout;
    std::vector<RoutedOp> ops;
    size_t swap_count = 0;
};

inline constexpr const char *kRoutingHeuristic = "greedy-shortest-path-light-endpoint";

struct RoutedCost {
    std::string circuit_label;
    std::string graph_name;
    size_t depth = 0;
    size_t su4_count = 0;
    /// 3 CNOTs per two-qubit gate.
    size_t native_two_qubit_count = 0;
    size_t swap_count = 0;
    /// 3 per two-qubit gate plus 3 per SWAP.
    size_t cnot_equivalent_total = 0;
    std::string heuristic = kRoutingHeuristic;
};

/// Greedy placement of the first ASAP layer's pairs onto edges, then for each
/// non-adjacent gate the lower-degree endpoint walks a shortest path until the
/// pair is adjacent. Throws std::invalid_argument if the graph is disconnected
/// or sizes disagree.
RoutedCircuit route(const Circuit &circuit, const ConnectivityGraph &graph);

/// Replays the routed ops with SWAPs as relabelings and checks that every
/// original two-qubit gate runs, in order, on adjacent physical qubits holding
/// its logical targets.
bool verify_routing(const Circuit &circuit, const ConnectivityGraph &graph, const RoutedCircuit &routed);

RoutedCost route_circuit(const Circuit &circuit, const ConnectivityGraph &graph);

struct OverheadPoint {
    size_t depth;
    double mean_total;
    double std_total;
};

/// Mean CNOT-equivalent count of routed QV(n, d) circuits over `trials` random
/// circuits per depth. Circuit t at depth d is drawn from substream
/// ("route", d * 2^32 + t) of `seed`, so graphs compared under the same seed see
/// the same circuits.
std::vector<OverheadPoint> overhead_curve(size_t n, const std::vector<size_t> &depths, const ConnectivityGraph &graph,
                                          size_t trials, uint64_t seed);

}  // namespace xplat

#endif
