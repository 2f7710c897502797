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

#ifndef XPLAT_PIPELINE_H
#define XPLAT_PIPELINE_H

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "xplat/analyze.h"
#include "xplat/estimate.h"
#include "xplat/platforms.h"

namespace xplat {

struct CircuitSpec {
    /// "ghz" or "qv"
    std::string kind = "ghz";
    size_t n = 0;
    size_t depth = 0;
};

/// Parameters of a run. Lives at <run>/manifest.json; every command reads it,
/// merges its own flags in and writes it back.
struct RunManifest {
    std::string run_id;
    uint64_t seed = 0;
    std::optional<CircuitSpec> circuit;
    std::vector<PlatformProfile> platforms;
    size_t m_u = 100;
    uint64_t m_s = 2000;
    /// "random" or "greedy"
    std::string sampler = "random";
    size_t greedy_candidates = 200;
    std::optional<Protocol> protocol;
    size_t bootstrap = 100;
    /// Wall-clock bookkeeping; excluded from the hash.
    nlohmann::json timestamps = nlohmann::json::object();
};

nlohmann::json manifest_to_json(const RunManifest &m, bool with_timestamps = true);
RunManifest manifest_from_json(const nlohmann::json &j);
/// FNV-1a 64 of the manifest JSON without timestamps, as 16 hex digits.
std::string manifest_hash(const RunManifest &m);

/// Exclusive handle on a run directory through an O_EXCL lock file. Throws
/// std::runtime_error if another invocation holds it.
class RunLock {
   public:
    explicit RunLock(const std::filesystem::path &run_dir);
    ~RunLock();
    RunLock(const RunLock &) = delete;
    RunLock &operator=(const RunLock &) = delete;

   private:
    std::filesystem::path path_;
};

/// Writes through a sibling temporary file and a rename.
void write_file_atomic(const std::filesystem::path &path, const std::string &content);

/// Resolves a platform argument: an existing file, else a preset name under
/// `config_dir`/platforms.
PlatformProfile resolve_platform(const std::string &arg, const std::filesystem::path &config_dir);
/// Resolves a graph argument: an existing JSON file, else a named graph for n
/// qubits (complete, line, ring, t-shaped).
ConnectivityGraph resolve_graph(const std::string &arg, size_t n, const std::filesystem::path &config_dir);

struct GlobalOptions {
    std::filesystem::path run_dir = "runs/default";
    std::optional<uint64_t> seed;
    int threads = 0;
    std::filesystem::path config_dir;
};

struct GenOptions {
    CircuitSpec circuit;
};

struct AcquireOptions {
    std::vector<std::string> platforms;
    std::optional<size_t> m_u;
    std::optional<uint64_t> m_s;
    std::optional<std::string> sampler;
    std::optional<size_t> greedy_candidates;
};

struct EstimateOptions {
    std::optional<Protocol> protocol;
    std::optional<size_t> bootstrap;
};

struct SubsystemOptions {
    std::optional<Protocol> protocol;
    /// Largest subsystem size; 0 means all qubits.
    size_t max_size = 0;
    /// Random subsets per size when there are more; 0 keeps every subset.
    size_t max_subsets = 20;
};

struct PcaOptions {
    /// Extra dataset files beyond the run's own.
    std::vector<std::filesystem::path> datasets;
    FeatureOptions features;
    size_t components = 2;
};

struct RouteOptions {
    std::vector<std::string> graphs = {"complete", "line"};
    size_t n = 0;
    std::vector<size_t> depths = {1, 2, 3, 4, 5, 6};
    size_t trials = 50;
};

/// Each command returns the paths it wrote, relative to the run directory.
std::vector<std::string> cmd_gen(const GlobalOptions &g, const GenOptions &o);
std::vector<std::string> cmd_acquire(const GlobalOptions &g, const AcquireOptions &o);
std::vector<std::string> cmd_estimate(const GlobalOptions &g, const EstimateOptions &o);
std::vector<std::string> cmd_subsystem(const GlobalOptions &g, const SubsystemOptions &o);
std::vector<std::string> cmd_pca(const GlobalOptions &g, const PcaOptions &o);
std::vector<std::string> cmd_route(const GlobalOptions &g, const RouteOptions &o);
std::vector<std::string> cmd_report(const GlobalOptions &g);

}  // namespace xplat

#endif
