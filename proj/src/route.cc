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

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <set>
#include <stdexcept>

#include "xplat/parallel.h"

namespace xplat {

namespace {
constexpr size_t kUnreachable = std::numeric_limits<size_t>::max();
}

ConnectivityGraph::ConnectivityGraph(std::string name, size_t n, std::vector<std::pair<size_t, size_t>> edges)
    : name_(std::move(name)), n_(n) {
    std::set<std::pair<size_t, size_t>> unique;
    for (auto [a, b] : edges) {
        if (a >= n || b >= n) {
            throw std::invalid_argument("graph edge references a vertex >= n");
        }
        if (a == b) {
            throw std::invalid_argument("graph edge is a self loop");
        }
        unique.insert({std::min(a, b), std::max(a, b)});
    }
    edges_.assign(unique.begin(), unique.end());
    build();
}

void ConnectivityGraph::build() {
    adjacency_.assign(n_, {});
    for (auto [a, b] : edges_) {
        adjacency_[a].push_back(b);
        adjacency_[b].push_back(a);
    }
    for (auto &adj : adjacency_) {
        std::sort(adj.begin(), adj.end());
    }
    dist_.assign(n_ * n_, kUnreachable);
    for (size_t s = 0; s < n_; s++) {
        std::deque<size_t> queue{s};
        dist_[s * n_ + s] = 0;
        while (!queue.empty()) {
            size_t v = queue.front();
            queue.pop_front();
            for (size_t w : adjacency_[v]) {
                if (dist_[s * n_ + w] == kUnreachable) {
                    dist_[s * n_ + w] = dist_[s * n_ + v] + 1;
                    queue.push_back(w);
                }
            }
        }
    }
}

ConnectivityGraph ConnectivityGraph::complete(size_t n) {
    std::vector<std::pair<size_t, size_t>> e;
    for (size_t a = 0; a < n; a++) {
        for (size_t b = a + 1; b < n; b++) {
            e.emplace_back(a, b);
        }
    }
    return ConnectivityGraph("complete", n, std::move(e));
}

ConnectivityGraph ConnectivityGraph::line(size_t n) {
    std::vector<std::pair<size_t, size_t>> e;
    for (size_t a = 0; a + 1 < n; a++) {
        e.emplace_back(a, a + 1);
    }
    return ConnectivityGraph("line", n, std::move(e));
}

ConnectivityGraph ConnectivityGraph::ring(size_t n) {
    std::vector<std::pair<size_t, size_t>> e;
    for (size_t a = 0; a < n; a++) {
        e.emplace_back(a, (a + 1) % n);
    }
    return ConnectivityGraph("ring", n, std::move(e));
}

ConnectivityGraph ConnectivityGraph::t_shape7() {
    return ConnectivityGraph("t-shaped", 7, {{0, 1}, {1, 2}, {1, 3}, {3, 5}, {4, 5}, {5, 6}});
}

bool ConnectivityGraph::adjacent(size_t a, size_t b) const {
    return distance(a, b) == 1;
}

bool ConnectivityGraph::connected() const {
    for (size_t v = 0; v < n_; v++) {
        if (dist_[v] == kUnreachable) {
            return false;
        }
    }
    return true;
}

bool ConnectivityGraph::is_complete() const {
    return edges_.size() == n_ * (n_ - 1) / 2;
}

size_t ConnectivityGraph::distance(size_t a, size_t b) const {
    return dist_[a * n_ + b];
}

std::vector<size_t> ConnectivityGraph::shortest_path(size_t a, size_t b) const {
    if (distance(a, b) == kUnreachable) {
        throw std::invalid_argument("no path between vertices");
    }
    std::vector<size_t> path{a};
    size_t v = a;
    while (v != b) {
        for (size_t w : adjacency_[v]) {
            if (distance(w, b) + 1 == distance(v, b)) {
                v = w;
                break;
            }
        }
        path.push_back(v);
    }
    return path;
}

ConnectivityGraph ConnectivityGraph::with_edge(size_t a, size_t b) const {
    auto e = edges_;
    e.emplace_back(a, b);
    return ConnectivityGraph(name_ + "+" + std::to_string(a) + "-" + std::to_string(b), n_, std::move(e));
}

nlohmann::json graph_to_json(const ConnectivityGraph &g) {
    nlohmann::json edges = nlohmann::json::array();
    for (auto [a, b] : g.edges()) {
        edges.push_back({a, b});
    }
    return {{"name", g.name()}, {"n", g.n()}, {"edges", edges}};
}

ConnectivityGraph graph_from_json(const nlohmann::json &j) {
    try {
        std::vector<std::pair<size_t, size_t>> edges;
        for (const auto &e : j.at("edges")) {
            if (e.size() != 2) {
                throw std::invalid_argument("graph edge must have two endpoints");
            }
            edges.emplace_back(e[0].get<size_t>(), e[1].get<size_t>());
        }
        return ConnectivityGraph(j.value("name", "custom"), j.at("n").get<size_t>(), std::move(edges));
    } catch (const nlohmann::json::exception &e) {
        throw std::invalid_argument(std::string("malformed graph json: ") + e.what());
    }
}

ConnectivityGraph graph_from_spec(const nlohmann::json &j, size_t n) {
    if (j.is_object()) {
        auto g = graph_from_json(j);
        if (g.n() != n) {
            throw std::invalid_argument("graph '" + g.name() + "' has " + std::to_string(g.n()) +
                                        " vertices, expected " + std::to_string(n));
        }
        return g;
    }
    std::string name = j.get<std::string>();
    if (name == "complete" || name == "all-to-all") {
        return ConnectivityGraph::complete(n);
    }
    if (name == "line") {
        return ConnectivityGraph::line(n);
    }
    if (name == "ring") {
        return ConnectivityGraph::ring(n);
    }
    if (name == "t-shaped") {
        if (n != 7) {
            throw std::invalid_argument("t-shaped graph is defined for 7 qubits only");
        }
        return ConnectivityGraph::t_shape7();
    }
    throw std::invalid_argument("unknown connectivity '" + name + "'");
}

namespace {

std::vector<size_t> initial_layout(const Circuit &circuit, const ConnectivityGraph &graph) {
    const size_t n = circuit.n_qubits;
    std::vector<std::pair<size_t, size_t>> first_layer;
    std::vector<bool> touched(n, false);
    for (const auto &g : circuit.gates) {
        if (g.kind != Gate::Kind::kTwoQubit) {
            continue;
        }
        size_t a = g.targets[0], b = g.targets[1];
        if (!touched[a] && !touched[b]) {
            first_layer.emplace_back(a, b);
        }
        touched[a] = touched[b] = true;
    }

    std::vector<size_t> layout(n, kUnreachable);
    std::vector<bool> occupied(n, false);
    auto occupied_neighbors = [&](size_t v) {
        size_t c = 0;
        for (size_t w : graph.neighbors(v)) {
            c += occupied[w];
        }
        return c;
    };
    for (auto [la, lb] : first_layer) {
        size_t best_score = 0;
        std::pair<size_t, size_t> best{kUnreachable, kUnreachable};
        for (auto [p, q] : graph.edges()) {
            if (occupied[p] || occupied[q]) {
                continue;
            }
            size_t score = occupied_neighbors(p) + occupied_neighbors(q);
            if (best.first == kUnreachable || score > best_score) {
                best = {p, q};
                best_score = score;
            }
        }
        if (best.first == kUnreachable) {
            // No free edge left: nearest pair of free vertices.
            size_t best_d = kUnreachable;
            for (size_t p = 0; p < n; p++) {
                for (size_t q = 0; q < n; q++) {
                    if (p != q && !occupied[p] && !occupied[q] && graph.distance(p, q) < best_d) {
                        best_d = graph.distance(p, q);
                        best = {p, q};
                    }
                }
            }
        }
        layout[la] = best.first;
        layout[lb] = best.second;
        occupied[best.first] = occupied[best.second] = true;
    }
    size_t next_free = 0;
    for (size_t l = 0; l < n; l++) {
        if (layout[l] != kUnreachable) {
            continue;
        }
        while (occupied[next_free]) {
            next_free++;
        }
        layout[l] = next_free;
        occupied[next_free] = true;
    }
    return layout;
}

}  // namespace

RoutedCircuit route(const Circuit &circuit, const ConnectivityGraph &graph) {
    if (circuit.n_qubits != graph.n()) {
        throw std::invalid_argument("circuit and graph disagree on the number of qubits");
    }
    if (!graph.connected()) {
        throw std::invalid_argument("connectivity graph '" + graph.name() + "' is disconnected");
    }
    RoutedCircuit out;
    out.initial_layout = initial_layout(circuit, graph);
    std::vector<size_t> layout = out.initial_layout;
    std::vector<size_t> occupant(graph.n());
    for (size_t l = 0; l < layout.size(); l++) {
        occupant[layout[l]] = l;
    }
    for (size_t gi = 0; gi < circuit.gates.size(); gi++) {
        const Gate &g = circuit.gates[gi];
        if (g.kind == Gate::Kind::kOneQubit) {
            out.ops.push_back({RoutedOp::Kind::kGate, gi, layout[g.targets[0]], layout[g.targets[0]]});
            continue;
        }
        size_t la = g.targets[0], lb = g.targets[1];
        while (!graph.adjacent(layout[la], layout[lb])) {
            bool move_a = graph.degree(layout[la]) <= graph.degree(layout[lb]);
            size_t mover = move_a ? la : lb;
            size_t other = move_a ? lb : la;
            auto path = graph.shortest_path(layout[mover], layout[other]);
            size_t p = path[0], q = path[1];
            size_t lq = occupant[q];
            std::swap(occupant[p], occupant[q]);
            layout[mover] = q;
            layout[lq] = p;
            out.ops.push_back({RoutedOp::Kind::kSwap, gi, p, q});
            out.swap_count++;
        }
        out.ops.push_back({RoutedOp::Kind::kGate, gi, layout[la], layout[lb]});
    }
    return out;
}

bool verify_routing(const Circuit &circuit, const ConnectivityGraph &graph, const RoutedCircuit &routed) {
    const size_t n = graph.n();
    if (routed.initial_layout.size() != circuit.n_qubits || circuit.n_qubits != n) {
        return false;
    }
    std::vector<size_t> occupant(n, kUnreachable);
    for (size_t l = 0; l < n; l++) {
        size_t p = routed.initial_layout[l];
        if (p >= n || occupant[p] != kUnreachable) {
            return false;
        }
        occupant[p] = l;
    }
    size_t next_gate = 0;
    for (const auto &op : routed.ops) {
        if (op.kind == RoutedOp::Kind::kSwap) {
            if (!graph.adjacent(op.p0, op.p1)) {
                return false;
            }
            std::swap(occupant[op.p0], occupant[op.p1]);
            continue;
        }
        if (op.gate_index != next_gate) {
            return false;
        }
        const Gate &g = circuit.gates[op.gate_index];
        if (g.kind == Gate::Kind::kOneQubit) {
            if (occupant[op.p0] != g.targets[0]) {
                return false;
            }
        } else if (!graph.adjacent(op.p0, op.p1) || occupant[op.p0] != g.targets[0] ||
                   occupant[op.p1] != g.targets[1]) {
            return false;
        }
        next_gate++;
    }
    return next_gate == circuit.gates.size();
}

RoutedCost route_circuit(const Circuit &circuit, const ConnectivityGraph &graph) {
    RoutedCircuit r = route(circuit, graph);
    RoutedCost cost;
    cost.circuit_label = circuit.label;
    cost.graph_name = graph.name();
    cost.depth = circuit.depth.value_or(0);
    cost.su4_count = circuit.two_qubit_gate_count();
    cost.native_two_qubit_count = 3 * cost.su4_count;
    cost.swap_count = r.swap_count;
    cost.cnot_equivalent_total = cost.native_two_qubit_count + 3 * cost.swap_count;
    return cost;
}

std::vector<OverheadPoint> overhead_curve(size_t n, const std::vector<size_t> &depths, const ConnectivityGraph &graph,
                                          size_t trials, uint64_t seed) {
    if (trials < 1) {
        throw std::invalid_argument("overhead curve needs at least one trial");
    }
    std::vector<OverheadPoint> out;
    for (size_t d : depths) {
        std::vector<double> totals(trials);
        parallel_for(trials, [&](size_t t) {
            Rng rng = make_rng(seed, "route", (uint64_t{d} << 32) | t);
            Circuit c = sample_qv_circuit(n, d, rng);
            totals[t] = static_cast<double>(route_circuit(c, graph).cnot_equivalent_total);
        });
        double mean = pairwise_sum(totals) / static_cast<double>(trials);
        std::vector<double> sq(trials);
        for (size_t t = 0; t < trials; t++) {
            sq[t] = (totals[t] - mean) * (totals[t] - mean);
        }
        double var = trials > 1 ? pairwise_sum(sq) / static_cast<double>(trials - 1) : 0.0;
        out.push_back({d, mean, std::sqrt(var)});
    }
    return out;
}

}  // namespace xplat
