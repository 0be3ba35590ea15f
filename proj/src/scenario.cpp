#include "guardsim/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace guardsim {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& what) {
    throw ValidationError(field + ": " + what);
}

const json& section(const json& root, const char* name, bool required) {
    static const json empty = json::object();
    if (!root.contains(name)) {
        if (required) fail(name, "missing section");
        return empty;
    }
    const json& s = root.at(name);
    if (!s.is_object()) fail(name, "must be an object");
    return s;
}

void reject_unknown(const json& obj, const std::string& prefix, std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : obj.items()) {
        const bool known = std::any_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; });
        if (!known) fail(prefix.empty() ? key : prefix + "." + key, "unknown key");
    }
}

template <typename T>
T read(const json& obj, const std::string& prefix, const char* key, std::optional<T> fallback) {
    const std::string field = prefix + "." + key;
    if (!obj.contains(key)) {
        if (!fallback) fail(field, "missing required key");
        return *fallback;
    }
    const json& v = obj.at(key);
    if constexpr (std::is_same_v<T, std::string>) {
        if (!v.is_string()) fail(field, "expected a string");
        return v.get<std::string>();
    } else if constexpr (std::is_integral_v<T>) {
        if (!v.is_number_integer()) fail(field, "expected an integer");
        if constexpr (std::is_unsigned_v<T>) {
            if (v.is_number_unsigned()) return v.get<T>();
            if (v.get<std::int64_t>() < 0) fail(field, "must be non-negative");
            return static_cast<T>(v.get<std::int64_t>());
        } else {
            const auto x = v.get<std::int64_t>();
            if (x < std::numeric_limits<T>::min() || x > std::numeric_limits<T>::max()) fail(field, "out of range");
            return static_cast<T>(x);
        }
    } else {
        if (!v.is_number()) fail(field, "expected a number");
        return v.get<T>();
    }
}

}  // namespace

Scenario parse_scenario(std::string_view json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("config: invalid JSON: ") + e.what());
    }
    if (!root.is_object()) fail("config", "top level must be an object");
    reject_unknown(root, "", {"topology", "traffic", "policy", "run"});

    Scenario sc;
    SimConfig& cfg = sc.sim;

    const json& topo = section(root, "topology", true);
    reject_unknown(topo, "topology", {"num_cells", "neighbors"});
    const int cells = read<int>(topo, "topology", "num_cells", std::nullopt);
    if (cells < 1) fail("topology.num_cells", "must be a positive integer");
    cfg.topology = Topology::ring(cells);
    if (topo.contains("neighbors")) {
        const json& n = topo.at("neighbors");
        if (!n.is_array()) fail("topology.neighbors", "expected an array of arrays");
        cfg.topology.neighbors.clear();
        for (std::size_t i = 0; i < n.size(); ++i) {
            const std::string field = "topology.neighbors[" + std::to_string(i) + "]";
            if (!n[i].is_array()) fail(field, "expected an array of cell indices");
            std::vector<int> list;
            for (const auto& x : n[i]) {
                if (!x.is_number_integer()) fail(field, "expected integer cell indices");
                list.push_back(x.get<int>());
            }
            cfg.topology.neighbors.push_back(std::move(list));
        }
    }

    const json& traffic = section(root, "traffic", true);
    reject_unknown(traffic, "traffic", {"lambda_new", "mu", "eta", "lambda_handoff"});
    cfg.traffic.lambda_new = read<double>(traffic, "traffic", "lambda_new", std::nullopt);
    cfg.traffic.mu = read<double>(traffic, "traffic", "mu", std::nullopt);
    cfg.traffic.eta = read<double>(traffic, "traffic", "eta", std::nullopt);
    cfg.traffic.lambda_handoff = read<double>(traffic, "traffic", "lambda_handoff", 0.0);

    const json& pol = section(root, "policy", true);
    reject_unknown(pol, "policy", {"kind", "C", "GCh0", "Th", "A_u", "A_d", "N", "Cmin", "Cmax", "t"});
    PolicyParams& p = cfg.policy;
    p.kind = parse_policy_kind(read<std::string>(pol, "policy", "kind", std::nullopt));
    p.capacity = read<int>(pol, "policy", "C", std::nullopt);
    p.initial_guard = read<int>(pol, "policy", "GCh0", p.kind == PolicyKind::FCA ? 0 : 10);
    p.threshold = read<double>(pol, "policy", "Th", 0.2);
    p.increase_factor = read<double>(pol, "policy", "A_u", 0.9);
    p.decrease_factor = read<double>(pol, "policy", "A_d", 0.6);
    p.consecutive_calls = read<int>(pol, "policy", "N", 10);
    switch (p.kind) {
        case PolicyKind::FCA:
            p.guard_min = read<int>(pol, "policy", "Cmin", 0);
            p.guard_max = read<int>(pol, "policy", "Cmax", 0);
            break;
        case PolicyKind::StaticGuard:
            p.guard_min = read<int>(pol, "policy", "Cmin", p.initial_guard);
            p.guard_max = read<int>(pol, "policy", "Cmax", p.initial_guard);
            break;
        case PolicyKind::ACAS:
            p.guard_min = read<int>(pol, "policy", "Cmin", 0);
            p.guard_max = read<int>(pol, "policy", "Cmax", p.capacity - 1);
            break;
    }
    p.window_s = read<double>(pol, "policy", "t", 10.0);

    const json& run = section(root, "run", true);
    reject_unknown(run, "run", {"duration_s", "seed", "replications", "warmup_fraction", "snapshot_period_s"});
    cfg.duration_s = read<double>(run, "run", "duration_s", std::nullopt);
    cfg.seed = read<std::uint64_t>(run, "run", "seed", std::nullopt);
    sc.replications = read<int>(run, "run", "replications", 1);
    if (sc.replications < 1) fail("run.replications", "must be a positive integer");
    cfg.warmup_fraction = read<double>(run, "run", "warmup_fraction", 0.1);
    if (run.contains("snapshot_period_s"))
        cfg.snapshot_period_s = read<double>(run, "run", "snapshot_period_s", std::nullopt);

    cfg.validate();
    return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("config", "cannot read '" + path.string() + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_scenario(text.str());
}

int replication_threads() {
    if (const char* env = std::getenv("GUARDSIM_THREADS")) {
        int n = 0;
        const auto [ptr, ec] = std::from_chars(env, env + std::char_traits<char>::length(env), n);
        if (ec == std::errc() && n > 0) return n;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<ReplicationResult> run_replications(const SimConfig& base, int replications, int threads,
                                                bool keep_timeseries_of_first_only) {
    std::vector<ReplicationResult> results(static_cast<std::size_t>(replications));
    auto run_one = [&](int k) {
        SimConfig cfg = base;
        cfg.seed = base.seed + static_cast<std::uint64_t>(k);
        cfg.record_timeseries = base.record_timeseries && (k == 0 || !keep_timeseries_of_first_only);
        Engine engine(cfg);
        auto& r = results[static_cast<std::size_t>(k)];
        r.replicate = k;
        r.policy = cfg.policy.kind;
        r.seed = cfg.seed;
        r.result = engine.run();
        r.timeseries = engine.timeseries();
    };
    const int workers = std::clamp(threads, 1, replications);
    if (workers == 1) {
        for (int k = 0; k < replications; ++k) run_one(k);
        return results;
    }
    std::atomic<int> next{0};
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (int k = next++; k < replications; k = next++) run_one(k);
            } catch (...) {
                errors[static_cast<std::size_t>(w)] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return results;
}

std::vector<PolicyParams> comparison_policies(const PolicyParams& shared) {
    return {fca_params(shared), static_guard_params(shared, shared.initial_guard), acas_params(shared)};
}

std::vector<ReplicationResult> run_comparison(const Scenario& scenario, int threads) {
    std::vector<ReplicationResult> all;
    for (const auto& policy : comparison_policies(scenario.sim.policy)) {
        SimConfig cfg = scenario.sim;
        cfg.policy = policy;
        auto part = run_replications(cfg, scenario.replications, threads);
        std::move(part.begin(), part.end(), std::back_inserter(all));
    }
    return all;
}

std::string format_probability(double p) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", p);
    return buf;
}

std::string format_real(double x) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, ptr);
}

namespace {

double mean_of(const std::vector<double>& xs) {
    double s = 0.0;
    for (double x : xs) s += x;
    return xs.empty() ? 0.0 : s / static_cast<double>(xs.size());
}

double stddev_of(const std::vector<double>& xs) {
    if (xs.size() < 2) return 0.0;
    const double m = mean_of(xs);
    double s = 0.0;
    for (double x : xs) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(xs.size() - 1));
}

}  // namespace

std::vector<SummaryRow> summarize(const std::vector<ReplicationResult>& results) {
    std::vector<SummaryRow> rows;
    std::vector<PolicyKind> order;
    for (const auto& r : results)
        if (std::find(order.begin(), order.end(), r.policy) == order.end()) order.push_back(r.policy);

    for (PolicyKind kind : order) {
        const std::string label(to_string(kind));
        std::vector<double> pb, ph, util, guard;
        SummaryRow pooled{"pooled", label};
        double busy = 0.0, capacity_time = 0.0;
        for (const auto& r : results) {
            if (r.policy != kind) continue;
            const auto& t = r.result.total_after_warmup;
            SummaryRow row{std::to_string(r.replicate), label, t.Nc, t.Hc, t.Rn, t.Rh, t.H, t.Pb, t.Ph,
                           t.utilization, 0.0};
            double g = 0.0;
            for (int x : r.result.final_guard) g += x;
            row.final_GCh = g / static_cast<double>(r.result.final_guard.size());
            rows.push_back(row);
            pb.push_back(row.Pb);
            ph.push_back(row.Ph);
            util.push_back(row.utilization);
            guard.push_back(row.final_GCh);
            pooled.Nc += t.Nc;
            pooled.Hc += t.Hc;
            pooled.Rn += t.Rn;
            pooled.Rh += t.Rh;
            pooled.H += t.H;
            busy += t.busy_time_integral;
            capacity_time += t.capacity * t.span_s;
        }
        rows.push_back(SummaryRow{"mean", label, 0, 0, 0, 0, 0, mean_of(pb), mean_of(ph), mean_of(util),
                                  mean_of(guard)});
        rows.push_back(SummaryRow{"stddev", label, 0, 0, 0, 0, 0, stddev_of(pb), stddev_of(ph), stddev_of(util),
                                  stddev_of(guard)});
        pooled.Pb = ratio_or_zero(static_cast<double>(pooled.Rn), static_cast<double>(pooled.Nc + pooled.Rn));
        pooled.Ph = ratio_or_zero(static_cast<double>(pooled.Rh), static_cast<double>(pooled.H));
        pooled.utilization = ratio_or_zero(busy, capacity_time);
        pooled.final_GCh = mean_of(guard);
        rows.push_back(pooled);
    }
    return rows;
}

void write_timeseries_csv(std::ostream& out, const std::vector<ReplicationResult>& results, bool header) {
    if (header) out << kTimeseriesHeader << '\n';
    for (const auto& r : results) {
        if (r.replicate != 0) continue;
        const std::string label(to_string(r.policy));
        for (const auto& s : r.timeseries) {
            out << format_real(s.time) << ',' << (s.cell ? std::to_string(*s.cell) : std::string("all")) << ','
                << label << ',' << s.Oc << ',' << s.GCh << ',' << s.Nc << ',' << s.Hc << ',' << s.Rn << ','
                << s.Rh << ',' << s.H << ',' << format_probability(s.Pb) << ',' << format_probability(s.Ph)
                << ',' << format_probability(s.utilization) << '\n';
        }
    }
}

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows) {
    out << kSummaryHeader << '\n';
    for (const auto& r : rows) {
        const bool counts = r.replicate != "mean" && r.replicate != "stddev";
        out << r.replicate << ',' << r.policy << ',';
        if (counts)
            out << r.Nc << ',' << r.Hc << ',' << r.Rn << ',' << r.Rh << ',' << r.H << ',';
        else
            out << ",,,,,";
        out << format_probability(r.Pb) << ',' << format_probability(r.Ph) << ','
            << format_probability(r.utilization) << ',' << format_probability(r.final_GCh) << '\n';
    }
}

std::vector<SummaryRow> parse_summary_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kSummaryHeader)
        throw std::runtime_error("summary csv: unexpected header");
    std::vector<SummaryRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) f.push_back(cell);
        if (!line.empty() && line.back() == ',') f.emplace_back();
        if (f.size() != 11) throw std::runtime_error("summary csv: expected 11 fields in '" + line + "'");
        auto as_int = [](const std::string& s) -> std::int64_t { return s.empty() ? 0 : std::stoll(s); };
        rows.push_back(SummaryRow{f[0], f[1], as_int(f[2]), as_int(f[3]), as_int(f[4]), as_int(f[5]),
                                  as_int(f[6]), std::stod(f[7]), std::stod(f[8]), std::stod(f[9]),
                                  std::stod(f[10])});
    }
    return rows;
}

}  // namespace guardsim
