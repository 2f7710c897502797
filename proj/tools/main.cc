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

#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "xplat/errors.h"
#include "xplat/parallel.h"
#include "xplat/pipeline.h"

#ifndef XPLAT_CONFIG_DIR
#define XPLAT_CONFIG_DIR ""
#endif

namespace {

// "1..6" or "1,2,4".
std::vector<size_t> parse_depths(const std::string &s) {
    std::vector<size_t> out;
    auto dots = s.find("..");
    if (dots != std::string::npos) {
        size_t lo = std::stoul(s.substr(0, dots));
        size_t hi = std::stoul(s.substr(dots + 2));
        if (lo > hi) {
            throw std::invalid_argument("empty depth range " + s);
        }
        for (size_t d = lo; d <= hi; d++) {
            out.push_back(d);
        }
        return out;
    }
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, ',')) {
        out.push_back(std::stoul(item));
    }
    return out;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Cross-platform state comparison from randomized measurements."};
    app.require_subcommand(1);

    xplat::GlobalOptions global;
    global.config_dir = XPLAT_CONFIG_DIR;
    if (const char *env = std::getenv("XPLAT_CONFIG_DIR")) {
        global.config_dir = env;
    }
    uint64_t seed = 0;
    std::string out_dir = "runs/default";
    std::string config_dir = global.config_dir.string();
    auto *seed_opt = app.add_option("--seed", seed, "Master seed of the run");
    app.add_option("--out", out_dir, "Run directory")->capture_default_str();
    app.add_option("--threads", global.threads, "Worker threads (0 = all cores)");
    app.add_option("--config-dir", config_dir, "Directory holding platforms/ and graphs/ presets")->capture_default_str();

    // gen
    auto *gen = app.add_subcommand("gen", "Write the test circuit");
    size_t ghz_n = 0, qv_n = 0, depth = 0;
    auto *ghz_opt = gen->add_option("--ghz", ghz_n, "GHZ state on N qubits");
    auto *qv_opt = gen->add_option("--qv", qv_n, "Quantum-volume circuit on N qubits");
    gen->add_option("--d", depth, "QV depth");
    ghz_opt->excludes(qv_opt);
    gen->require_option(1, 2);

    // acquire
    auto *acq = app.add_subcommand("acquire", "Emulate platforms and record randomized measurements");
    xplat::AcquireOptions acquire;
    size_t mu = 0, candidates = 0;
    uint64_t ms = 0;
    std::string sampler;
    acq->add_option("--platform", acquire.platforms, "Platform config file or preset name (repeatable)");
    auto *mu_opt = acq->add_option("--mu", mu, "Number of measurement settings M_U (default 100)");
    auto *ms_opt = acq->add_option("--ms", ms, "Shots per setting M_S (default 2000)");
    auto *sampler_opt = acq->add_option("--sampler", sampler, "random | greedy")->check(CLI::IsMember({"random", "greedy"}));
    auto *cand_opt = acq->add_option("--candidates", candidates, "Candidates per greedy step (default 200)");

    // estimate
    auto *est = app.add_subcommand("estimate", "All-pairs cross-platform fidelities with bootstrap errors");
    std::string protocol;
    size_t bootstrap = 0;
    est->add_option("--protocol", protocol, "1 | 2 (default: 2 up to 10 qubits, else 1)")
        ->check(CLI::IsMember({"1", "2", "I", "II"}));
    auto *boot_opt = est->add_option("--bootstrap", bootstrap, "Bootstrap replicates B (default 100)");

    // subsystem
    auto *sub = app.add_subcommand("subsystem", "Fidelities of qubit subsets versus subset size");
    xplat::SubsystemOptions subsystem;
    std::string sub_protocol;
    sub->add_option("--protocol", sub_protocol, "1 | 2")->check(CLI::IsMember({"1", "2", "I", "II"}));
    sub->add_option("--max-size", subsystem.max_size, "Largest subset size (0 = all)");
    sub->add_option("--subsets", subsystem.max_subsets, "Random subsets per size when there are more (0 = all)")
        ->capture_default_str();

    // pca
    auto *pca_cmd = app.add_subcommand("pca", "Pauli-expectation features and principal components");
    xplat::PcaOptions pca;
    std::vector<std::string> extra;
    pca_cmd->add_option("--dataset", extra, "Additional dataset file (repeatable)");
    pca_cmd->add_option("--shots-per-sample", pca.features.shots_per_sample)->capture_default_str();
    pca_cmd->add_option("--repeats", pca.features.n_repeat)->capture_default_str();
    pca_cmd->add_option("--weight", pca.features.max_weight, "Pauli weight cap")->capture_default_str();
    pca_cmd->add_option("--n-min", pca.features.n_min, "Matching shots required per string")->capture_default_str();
    pca_cmd->add_flag("--strict", pca.features.strict, "Disjoint samples across repeats");
    pca_cmd->add_option("--components", pca.components)->capture_default_str();

    // route
    auto *route_cmd = app.add_subcommand("route", "SWAP overhead of QV circuits on connectivity graphs");
    xplat::RouteOptions route;
    std::string depths = "1..6";
    route_cmd->add_option("--graph", route.graphs, "Graph file, preset or name (repeatable)");
    route_cmd->add_option("--n", route.n, "Qubits (default: the run's circuit)");
    route_cmd->add_option("--depths", depths, "e.g. 1..6 or 1,2,4")->capture_default_str();
    route_cmd->add_option("--trials", route.trials)->capture_default_str();

    // report
    auto *report = app.add_subcommand("report", "Bundle every artifact of a run into report.json");

    CLI11_PARSE(app, argc, argv);

    global.run_dir = out_dir;
    global.config_dir = config_dir;
    if (seed_opt->count() > 0) {
        global.seed = seed;
    }
    xplat::set_thread_count(global.threads);

    try {
        std::vector<std::string> written;
        if (gen->parsed()) {
            xplat::GenOptions o;
            if (ghz_opt->count() > 0) {
                o.circuit = {"ghz", ghz_n, 0};
            } else {
                o.circuit = {"qv", qv_n, depth};
            }
            written = xplat::cmd_gen(global, o);
        } else if (acq->parsed()) {
            if (mu_opt->count() > 0) {
                acquire.m_u = mu;
            }
            if (ms_opt->count() > 0) {
                acquire.m_s = ms;
            }
            if (sampler_opt->count() > 0) {
                acquire.sampler = sampler;
            }
            if (cand_opt->count() > 0) {
                acquire.greedy_candidates = candidates;
            }
            written = xplat::cmd_acquire(global, acquire);
        } else if (est->parsed()) {
            xplat::EstimateOptions o;
            if (!protocol.empty()) {
                o.protocol = xplat::parse_protocol(protocol);
            }
            if (boot_opt->count() > 0) {
                o.bootstrap = bootstrap;
            }
            written = xplat::cmd_estimate(global, o);
        } else if (sub->parsed()) {
            if (!sub_protocol.empty()) {
                subsystem.protocol = xplat::parse_protocol(sub_protocol);
            }
            written = xplat::cmd_subsystem(global, subsystem);
        } else if (pca_cmd->parsed()) {
            pca.datasets.assign(extra.begin(), extra.end());
            written = xplat::cmd_pca(global, pca);
        } else if (route_cmd->parsed()) {
            route.depths = parse_depths(depths);
            written = xplat::cmd_route(global, route);
        } else if (report->parsed()) {
            written = xplat::cmd_report(global);
        }
        for (const auto &w : written) {
            std::cout << (global.run_dir / w).string() << "\n";
        }
    } catch (const xplat::InvariantError &e) {
        std::cerr << "invariant violation: " << e.what() << "\n";
        return 2;
    } catch (const xplat::ParseError &e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const xplat::CapacityError &e) {
        std::cerr << "capacity exceeded: " << e.what() << "\n";
        return 3;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
