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

#include "xplat/pipeline.h"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include "xplat/errors.h"
#include "xplat/parallel.h"
#include "xplat/route.h"

namespace fs = std::filesystem;

namespace xplat {

// ---- Manifest -------------------------------------------------------------------------

nlohmann::json manifest_to_json(const RunManifest &m, bool with_timestamps) {
    nlohmann::json j;
    j["run_id"] = m.run_id;
    j["seed"] = m.seed;
    if (m.circuit) {
        j["circuit"] = {{"kind", m.circuit->kind}, {"n", m.circuit->n}, {"d", m.circuit->depth}, {"seed", m.seed}};
    } else {
        j["circuit"] = nullptr;
    }
    j["platforms"] = nlohmann::json::array();
    for (const auto &p : m.platforms) {
        j["platforms"].push_back(platform_to_json(p));
    }
    j["m_u"] = m.m_u;
    j["m_s"] = m.m_s;
    j["sampler"] = m.sampler;
    j["greedy_candidates"] = m.greedy_candidates;
    j["protocol"] = m.protocol ? nlohmann::json(protocol_name(*m.protocol)) : nlohmann::json(nullptr);
    j["bootstrap"] = m.bootstrap;
    if (with_timestamps) {
        j["timestamps"] = m.timestamps;
    }
    return j;
}

RunManifest manifest_from_json(const nlohmann::json &j) {
    RunManifest m;
    try {
        m.run_id = j.at("run_id").get<std::string>();
        m.seed = j.at("seed").get<uint64_t>();
        if (!j.at("circuit").is_null()) {
            const auto &c = j["circuit"];
            m.circuit = CircuitSpec{c.at("kind").get<std::string>(), c.at("n").get<size_t>(), c.value("d", size_t{0})};
        }
        for (const auto &p : j.at("platforms")) {
            m.platforms.push_back(platform_from_json(p));
        }
        m.m_u = j.at("m_u").get<size_t>();
        m.m_s = j.at("m_s").get<uint64_t>();
        m.sampler = j.at("sampler").get<std::string>();
        m.greedy_candidates = j.value("greedy_candidates", size_t{200});
        if (j.contains("protocol") && !j["protocol"].is_null()) {
            m.protocol = parse_protocol(j["protocol"].get<std::string>());
        }
        m.bootstrap = j.at("bootstrap").get<size_t>();
        m.timestamps = j.value("timestamps", nlohmann::json::object());
    } catch (const nlohmann::json::exception &e) {
        throw ParseError(std::string("malformed manifest: ") + e.what());
    }
    return m;
}

std::string manifest_hash(const RunManifest &m) {
    std::ostringstream out;
    out << std::hex << std::setw(16) << std::setfill('0') << fnv1a64(manifest_to_json(m, false).dump());
    return out.str();
}

// ---- Files ----------------------------------------------------------------------------

RunLock::RunLock(const fs::path &run_dir) : path_(run_dir / ".lock") {
    fs::create_directories(run_dir);
    int fd = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
    if (fd < 0) {
        throw std::runtime_error("run directory " + run_dir.string() + " is locked by another invocation (" +
                                 path_.string() + " exists)");
    }
    std::string pid = std::to_string(::getpid()) + "\n";
    [[maybe_unused]] auto written = ::write(fd, pid.data(), pid.size());
    ::close(fd);
}

RunLock::~RunLock() {
    std::error_code ec;
    fs::remove(path_, ec);
}

void write_file_atomic(const fs::path &path, const std::string &content) {
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path());
    }
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw std::runtime_error("cannot write " + tmp.string());
        }
        out << content;
        out.flush();
        if (!out) {
            throw std::runtime_error("write failed for " + tmp.string());
        }
    }
    fs::rename(tmp, path);
}

PlatformProfile resolve_platform(const std::string &arg, const fs::path &config_dir) {
    if (fs::is_regular_file(arg)) {
        return load_platform(arg);
    }
    fs::path preset = config_dir / "platforms" / (arg + ".json");
    if (!config_dir.empty() && fs::is_regular_file(preset)) {
        return load_platform(preset);
    }
    throw std::invalid_argument("platform '" + arg + "' is neither a file nor a preset in " +
                                (config_dir / "platforms").string());
}

ConnectivityGraph resolve_graph(const std::string &arg, size_t n, const fs::path &config_dir) {
    auto load = [&](const fs::path &p) {
        std::ifstream in(p);
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(in);
        } catch (const nlohmann::json::exception &e) {
            throw ParseError("graph " + p.string() + ": " + e.what());
        }
        return graph_from_spec(j, n);
    };
    if (fs::is_regular_file(arg)) {
        return load(arg);
    }
    fs::path preset = config_dir / "graphs" / (arg + ".json");
    if (!config_dir.empty() && fs::is_regular_file(preset)) {
        return load(preset);
    }
    return graph_from_spec(nlohmann::json(arg), n);
}

namespace {

std::string utc_now() {
    std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string fmt(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    std::ostringstream out;
    out << std::setprecision(10) << v;
    return out.str();
}

void check_platform_name(const std::string &name) {
    if (name.empty() || name == "." || name == ".." ||
        name.find_first_not_of("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789._-") !=
            std::string::npos) {
        throw std::invalid_argument("platform name '" + name + "' must use only letters, digits, '.', '_' or '-'");
    }
}

// An open run: its directory, lock and manifest. Outputs are staged in memory
// and only land on disk in commit(), together with the updated manifest.
class Run {
   public:
    Run(const GlobalOptions &g, bool create) : dir_(g.run_dir), lock_(g.run_dir) {
        fs::path mpath = dir_ / "manifest.json";
        if (fs::exists(mpath)) {
            std::ifstream in(mpath);
            try {
                manifest_ = manifest_from_json(nlohmann::json::parse(in));
            } catch (const nlohmann::json::exception &e) {
                throw ParseError("manifest " + mpath.string() + ": " + e.what());
            }
            if (g.seed && *g.seed != manifest_.seed) {
                throw std::invalid_argument("run " + dir_.string() + " was created with seed " +
                                            std::to_string(manifest_.seed) + ", not " + std::to_string(*g.seed));
            }
        } else if (create) {
            manifest_.run_id = fs::absolute(dir_).lexically_normal().filename().string();
            if (manifest_.run_id.empty()) {
                manifest_.run_id = "run";
            }
            manifest_.seed = g.seed.value_or(0);
            manifest_.timestamps["created"] = utc_now();
        } else {
            throw std::invalid_argument("no manifest in " + dir_.string() + "; run 'gen' first");
        }
    }

    RunManifest &manifest() {
        return manifest_;
    }
    const fs::path &dir() const {
        return dir_;
    }
    std::string hash() const {
        return manifest_hash(manifest_);
    }

    Circuit circuit() const {
        if (!manifest_.circuit) {
            throw std::invalid_argument("run has no circuit; run 'gen' first");
        }
        fs::path p = dir_ / "circuits" / "circuit.json";
        std::ifstream in(p);
        if (!in) {
            throw std::invalid_argument("missing circuit file " + p.string());
        }
        try {
            return circuit_from_json(nlohmann::json::parse(in));
        } catch (const nlohmann::json::exception &e) {
            throw ParseError("circuit " + p.string() + ": " + e.what());
        }
    }

    MeasurementDataset dataset(const std::string &platform) const {
        fs::path p = dir_ / "datasets" / (platform + ".jsonl");
        if (!fs::exists(p)) {
            throw std::invalid_argument("missing dataset " + p.string() + "; run 'acquire' first");
        }
        return ingest_dataset(p);
    }

    std::vector<MeasurementDataset> all_datasets() const {
        if (manifest_.platforms.empty()) {
            throw std::invalid_argument("run has no platforms; run 'acquire' first");
        }
        std::vector<MeasurementDataset> out;
        for (const auto &p : manifest_.platforms) {
            out.push_back(dataset(p.name));
        }
        for (const auto &ds : out) {
            if (ds.n_qubits != out.front().n_qubits) {
                throw InvariantError("datasets '" + out.front().platform + "' and '" + ds.platform +
                                     "' have different qubit counts (" + std::to_string(out.front().n_qubits) +
                                     " vs " + std::to_string(ds.n_qubits) + ")");
            }
        }
        return out;
    }

    void stage(const std::string &rel, std::string content) {
        staged_.emplace_back(rel, std::move(content));
    }

    std::vector<std::string> commit() {
        manifest_.timestamps["updated"] = utc_now();
        std::vector<std::string> written;
        for (auto &[rel, content] : staged_) {
            write_file_atomic(dir_ / rel, content);
            written.push_back(rel);
        }
        write_file_atomic(dir_ / "manifest.json", manifest_to_json(manifest_).dump(2) + "\n");
        staged_.clear();
        return written;
    }

    std::string csv_header() const {
        return "# manifest_hash=" + hash() + "\n";
    }

   private:
    fs::path dir_;
    RunLock lock_;
    RunManifest manifest_;
    std::vector<std::pair<std::string, std::string>> staged_;
};

Protocol pick_protocol(const std::optional<Protocol> &flag, const RunManifest &m, size_t n) {
    if (flag) {
        return *flag;
    }
    if (m.protocol) {
        return *m.protocol;
    }
    return default_protocol(n);
}

nlohmann::json undefined_entry(const std::string &a, const std::string &b, Protocol protocol,
                               const UndefinedValueError &e) {
    return {{"pair", {a, b}},
            {"protocol", protocol_name(protocol)},
            {"fidelity", nullptr},
            {"purities", {e.purity_i, e.purity_j}},
            {"flags", {"undefined"}},
            {"error", e.what()}};
}

std::vector<std::vector<size_t>> all_subsets(size_t n, size_t size) {
    std::vector<std::vector<size_t>> out;
    std::vector<size_t> idx(size);
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
        out.push_back(idx);
        size_t i = size;
        while (i > 0 && idx[i - 1] == n - size + i - 1) {
            i--;
        }
        if (i == 0) {
            return out;
        }
        idx[i - 1]++;
        for (size_t j = i; j < size; j++) {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

double binomial(size_t n, size_t k) {
    double v = 1;
    for (size_t i = 1; i <= k; i++) {
        v = v * static_cast<double>(n - k + i) / static_cast<double>(i);
    }
    return v;
}

std::string subset_name(const std::vector<size_t> &s) {
    std::string out;
    for (size_t k = 0; k < s.size(); k++) {
        out += (k ? "-" : "") + std::to_string(s[k]);
    }
    return out;
}

}  // namespace

// ---- Commands ---------------------------------------------------------------------------

std::vector<std::string> cmd_gen(const GlobalOptions &g, const GenOptions &o) {
    Run run(g, true);
    const CircuitSpec &spec = o.circuit;
    Circuit circuit;
    if (spec.kind == "ghz") {
        if (spec.n < 2) {
            throw std::invalid_argument("GHZ needs at least 2 qubits");
        }
        circuit = build_ghz(spec.n);
    } else if (spec.kind == "qv") {
        if (spec.n < 2 || spec.depth < 1) {
            throw std::invalid_argument("QV needs n >= 2 and d >= 1");
        }
        Rng rng = make_rng(run.manifest().seed, "circuit");
        circuit = sample_qv_circuit(spec.n, spec.depth, rng);
    } else {
        throw std::invalid_argument("unknown circuit kind '" + spec.kind + "' (expected ghz or qv)");
    }
    run.manifest().circuit = spec;
    nlohmann::json j = circuit_to_json(circuit);
    j["manifest_hash"] = run.hash();
    j["run_id"] = run.manifest().run_id;
    run.stage("circuits/circuit.json", j.dump(2) + "\n");
    return run.commit();
}

std::vector<std::string> cmd_acquire(const GlobalOptions &g, const AcquireOptions &o) {
    Run run(g, false);
    RunManifest &m = run.manifest();
    Circuit circuit = run.circuit();
    if (o.m_u) {
        m.m_u = *o.m_u;
    }
    if (o.m_s) {
        m.m_s = *o.m_s;
    }
    if (o.sampler) {
        if (*o.sampler != "random" && *o.sampler != "greedy") {
            throw std::invalid_argument("sampler must be random or greedy");
        }
        m.sampler = *o.sampler;
    }
    if (o.greedy_candidates) {
        m.greedy_candidates = *o.greedy_candidates;
    }
    if (m.m_u == 0 || m.m_s == 0) {
        throw std::invalid_argument("M_U and M_S must be positive");
    }
    std::vector<std::string> targets;
    for (const auto &arg : o.platforms) {
        PlatformProfile p = resolve_platform(arg, g.config_dir);
        check_platform_name(p.name);
        auto it = std::find_if(m.platforms.begin(), m.platforms.end(), [&](auto &q) { return q.name == p.name; });
        if (it != m.platforms.end()) {
            *it = p;
        } else {
            m.platforms.push_back(p);
        }
        targets.push_back(p.name);
    }
    if (targets.empty()) {
        for (const auto &p : m.platforms) {
            targets.push_back(p.name);
        }
    }
    if (targets.empty()) {
        throw std::invalid_argument("no platform given; pass --platform");
    }

    // One settings list per circuit, shared by every platform.
    Rng srng = make_rng(m.seed, "settings:" + circuit.label);
    std::vector<MeasurementSetting> settings = m.sampler == "greedy"
                                                   ? sample_settings_greedy(circuit.n_qubits, m.m_u,
                                                                            m.greedy_candidates, srng)
                                                   : sample_settings_random(circuit.n_qubits, m.m_u, srng);
    const std::string hash = run.hash();
    for (const auto &name : targets) {
        const auto &p = *std::find_if(m.platforms.begin(), m.platforms.end(), [&](auto &q) { return q.name == name; });
        MeasurementDataset ds = acquire_dataset(p, circuit, settings, m.m_s, m.seed);
        ds.extra["manifest_hash"] = hash;
        ds.extra["run_id"] = m.run_id;
        ds.extra["sampler"] = m.sampler;
        std::ostringstream out;
        write_dataset(out, ds);
        run.stage("datasets/" + name + ".jsonl", out.str());
    }
    return run.commit();
}

std::vector<std::string> cmd_estimate(const GlobalOptions &g, const EstimateOptions &o) {
    Run run(g, false);
    RunManifest &m = run.manifest();
    std::vector<MeasurementDataset> data = run.all_datasets();
    const size_t n = data.front().n_qubits;
    if (m.circuit && m.circuit->n != n) {
        throw InvariantError("datasets have " + std::to_string(n) + " qubits but the circuit has " +
                             std::to_string(m.circuit->n));
    }
    const Protocol protocol = pick_protocol(o.protocol, m, n);
    m.protocol = protocol;
    if (o.bootstrap) {
        m.bootstrap = *o.bootstrap;
    }
    const size_t k = data.size();
    const std::string diag_method = "shot-halves";

    std::vector<std::pair<size_t, size_t>> pairs;
    for (size_t i = 0; i < k; i++) {
        for (size_t j = i; j < k; j++) {
            pairs.emplace_back(i, j);
        }
    }
    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<nlohmann::json> entries(pairs.size());
    std::vector<double> f(k * k, nan), sd(k * k, nan);
    for (size_t t = 0; t < pairs.size(); t++) {
        auto [i, j] = pairs[t];
        const std::string &a = data[i].platform;
        const std::string &b = data[j].platform;
        Rng brng = make_rng(m.seed, "bootstrap:" + a + "|" + b);
        try {
            FidelityEstimate e;
            if (i == j) {
                Rng srng = make_rng(m.seed, "split:" + a);
                auto halves = split_shots(data[i], srng);
                e = estimate_fidelity(halves.first, halves.second, protocol, m.bootstrap, brng);
                e.platform_i = e.platform_j = a;
            } else {
                e = estimate_fidelity(data[i], data[j], protocol, m.bootstrap, brng);
            }
            entries[t] = estimate_to_json(e);
            if (i == j) {
                entries[t]["diagonal_method"] = diag_method;
            }
            f[i * k + j] = f[j * k + i] = e.fidelity;
            sd[i * k + j] = sd[j * k + i] = m.bootstrap > 0 ? e.bootstrap.std : nan;
        } catch (const UndefinedValueError &e) {
            entries[t] = undefined_entry(a, b, protocol, e);
        }
    }

    const std::string hash = run.hash();
    nlohmann::json out = {{"manifest_hash", hash},
                          {"run_id", m.run_id},
                          {"circuit", data.front().circuit_label},
                          {"n_qubits", n},
                          {"protocol", protocol_name(protocol)},
                          {"bootstrap", m.bootstrap},
                          {"diagonal_method", diag_method},
                          {"estimates", entries}};
    auto matrix_csv = [&](const std::vector<double> &v) {
        std::string s = run.csv_header() + "platform";
        for (const auto &d : data) {
            s += "," + d.platform;
        }
        s += "\n";
        for (size_t i = 0; i < k; i++) {
            s += data[i].platform;
            for (size_t j = 0; j < k; j++) {
                s += "," + fmt(v[i * k + j]);
            }
            s += "\n";
        }
        return s;
    };
    run.stage("estimates/fidelities.json", out.dump(2) + "\n");
    run.stage("estimates/matrix.csv", matrix_csv(f));
    run.stage("estimates/matrix_std.csv", matrix_csv(sd));
    return run.commit();
}

std::vector<std::string> cmd_subsystem(const GlobalOptions &g, const SubsystemOptions &o) {
    Run run(g, false);
    RunManifest &m = run.manifest();
    std::vector<MeasurementDataset> data = run.all_datasets();
    if (data.size() < 2) {
        throw std::invalid_argument("subsystem fidelities need at least two platforms");
    }
    const size_t n = data.front().n_qubits;
    const size_t max_size = o.max_size == 0 ? n : std::min(o.max_size, n);

    struct Job {
        size_t i, j;
        std::vector<size_t> subset;
    };
    std::vector<Job> jobs;
    for (size_t s = 1; s <= max_size; s++) {
        std::vector<std::vector<size_t>> subsets;
        if (o.max_subsets == 0 || binomial(n, s) <= static_cast<double>(o.max_subsets)) {
            subsets = all_subsets(n, s);
        } else {
            Rng rng = make_rng(m.seed, "subsystem", s);
            std::set<std::vector<size_t>> chosen;
            while (chosen.size() < o.max_subsets) {
                std::vector<size_t> q(n);
                std::iota(q.begin(), q.end(), 0);
                std::shuffle(q.begin(), q.end(), rng);
                q.resize(s);
                std::sort(q.begin(), q.end());
                chosen.insert(q);
            }
            subsets.assign(chosen.begin(), chosen.end());
        }
        for (size_t i = 0; i < data.size(); i++) {
            for (size_t j = i + 1; j < data.size(); j++) {
                for (const auto &sub : subsets) {
                    jobs.push_back({i, j, sub});
                }
            }
        }
    }

    const double nan = std::numeric_limits<double>::quiet_NaN();
    struct Row {
        OverlapEstimates e;
        double fidelity;
        Protocol protocol;
    };
    std::vector<Row> rows(jobs.size());
    parallel_for(jobs.size(), [&](size_t t) {
        const Job &job = jobs[t];
        Protocol p = pick_protocol(o.protocol, m, job.subset.size());
        OverlapEstimates e = estimate_overlaps(subsystem_restrict(data[job.i], job.subset),
                                               subsystem_restrict(data[job.j], job.subset), p);
        double fid = nan;
        if (e.purity_i > 0 && e.purity_j > 0) {
            fid = fidelity(e.overlap, e.purity_i, e.purity_j).value;
        }
        rows[t] = {e, fid, p};
    });

    std::string csv = run.csv_header() + "platform_i,platform_j,size,subset,protocol,overlap,purity_i,purity_j,fidelity\n";
    std::map<std::tuple<size_t, size_t, size_t>, std::vector<double>> by_size;
    for (size_t t = 0; t < jobs.size(); t++) {
        const Job &job = jobs[t];
        const Row &r = rows[t];
        csv += data[job.i].platform + "," + data[job.j].platform + "," + std::to_string(job.subset.size()) + "," +
               subset_name(job.subset) + "," + protocol_name(r.protocol) + "," + fmt(r.e.overlap) + "," +
               fmt(r.e.purity_i) + "," + fmt(r.e.purity_j) + "," + fmt(r.fidelity) + "\n";
        if (!std::isnan(r.fidelity)) {
            by_size[{job.i, job.j, job.subset.size()}].push_back(r.fidelity);
        }
    }
    std::string mean_csv = run.csv_header() + "platform_i,platform_j,size,mean_fidelity,subsets\n";
    for (const auto &[key, values] : by_size) {
        auto [i, j, s] = key;
        mean_csv += data[i].platform + "," + data[j].platform + "," + std::to_string(s) + "," +
                    fmt(pairwise_sum(values) / static_cast<double>(values.size())) + "," +
                    std::to_string(values.size()) + "\n";
    }
    run.stage("analysis/subsystem.csv", csv);
    run.stage("analysis/subsystem_mean.csv", mean_csv);
    return run.commit();
}

std::vector<std::string> cmd_pca(const GlobalOptions &g, const PcaOptions &o) {
    Run run(g, false);
    std::vector<MeasurementDataset> data;
    if (!run.manifest().platforms.empty()) {
        data = run.all_datasets();
    }
    for (const auto &p : o.datasets) {
        data.push_back(ingest_dataset(p));
    }
    if (data.empty()) {
        throw std::invalid_argument("no datasets for PCA");
    }
    Rng rng = make_rng(run.manifest().seed, "pca");
    FeatureMatrix fm = build_feature_matrix(data, o.features, rng);
    PcaResult pca = pca_project(fm.values, o.components);

    nlohmann::json summary = pca_summary_json(fm, pca);
    summary["manifest_hash"] = run.hash();
    summary["run_id"] = run.manifest().run_id;
    // Cluster quality along each axis, for every labelling with two or more groups.
    auto groups = [&](auto key) {
        std::map<std::string, int> ids;
        std::vector<int> labels;
        for (const auto &l : fm.labels) {
            labels.push_back(ids.emplace(key(l), static_cast<int>(ids.size())).first->second);
        }
        return std::make_pair(ids.size(), labels);
    };
    nlohmann::json sil = nlohmann::json::object();
    for (auto [name, grouping] : {std::make_pair("circuit", groups([](const RowLabel &l) { return l.circuit; })),
                                  std::make_pair("technology", groups([](const RowLabel &l) { return l.technology; })),
                                  std::make_pair("platform", groups([](const RowLabel &l) { return l.platform; }))}) {
        if (grouping.first < 2) {
            continue;
        }
        nlohmann::json per_axis = nlohmann::json::array();
        for (Eigen::Index c = 0; c < pca.projections.cols(); c++) {
            per_axis.push_back(silhouette_score(pca.projections.col(c), grouping.second));
        }
        sil[name] = per_axis;
    }
    summary["silhouette"] = sil;

    std::ostringstream features, projections;
    features << run.csv_header();
    write_feature_csv(features, fm);
    projections << run.csv_header();
    write_projection_csv(projections, fm, pca);
    run.stage("analysis/features.csv", features.str());
    run.stage("analysis/pca.csv", projections.str());
    run.stage("analysis/pca.json", summary.dump(2) + "\n");
    return run.commit();
}

std::vector<std::string> cmd_route(const GlobalOptions &g, const RouteOptions &o) {
    Run run(g, true);
    size_t n = o.n;
    if (n == 0) {
        if (!run.manifest().circuit) {
            throw std::invalid_argument("route needs --n when the run has no circuit");
        }
        n = run.manifest().circuit->n;
    }
    if (o.trials == 0 || o.depths.empty()) {
        throw std::invalid_argument("route needs at least one depth and one trial");
    }
    const uint64_t seed = derive_seed(run.manifest().seed, "route");
    for (const auto &arg : o.graphs) {
        ConnectivityGraph graph = resolve_graph(arg, n, g.config_dir);
        std::vector<OverheadPoint> curve = overhead_curve(n, o.depths, graph, o.trials, seed);
        std::string csv = run.csv_header() + "# heuristic=" + kRoutingHeuristic + " n=" + std::to_string(n) +
                          " trials=" + std::to_string(o.trials) + "\nd,mean_total,std_total,graph\n";
        for (const auto &pt : curve) {
            csv += std::to_string(pt.depth) + "," + fmt(pt.mean_total) + "," + fmt(pt.std_total) + "," +
                   graph.name() + "\n";
        }
        run.stage("analysis/route_" + graph.name() + ".csv", csv);
    }
    return run.commit();
}

std::vector<std::string> cmd_report(const GlobalOptions &g) {
    Run run(g, false);
    std::vector<fs::path> files;
    for (const auto &entry : fs::recursive_directory_iterator(run.dir())) {
        if (!entry.is_regular_file()) {
            continue;
        }
        fs::path rel = fs::relative(entry.path(), run.dir());
        std::string s = rel.generic_string();
        if (s == "manifest.json" || s == "report.json" || s == ".lock" || entry.path().extension() == ".tmp") {
            continue;
        }
        files.push_back(rel);
    }
    std::sort(files.begin(), files.end());
    nlohmann::json bundle = {{"run_id", run.manifest().run_id},
                             {"manifest_hash", run.hash()},
                             {"manifest", manifest_to_json(run.manifest(), false)}};
    nlohmann::json contents = nlohmann::json::object();
    for (const auto &rel : files) {
        std::ifstream in(run.dir() / rel, std::ios::binary);
        std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        if (rel.extension() == ".json") {
            try {
                contents[rel.generic_string()] = nlohmann::json::parse(text);
                continue;
            } catch (const nlohmann::json::exception &) {
            }
        }
        contents[rel.generic_string()] = text;
    }
    bundle["files"] = contents;
    run.stage("report.json", bundle.dump(2) + "\n");
    return run.commit();
}

}  // namespace xplat
