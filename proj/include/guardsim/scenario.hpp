#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "guardsim/engine.hpp"

namespace guardsim {

/// A scenario file: one simulation configuration plus replication settings.
struct Scenario {
    SimConfig sim;
    int replications = 1;
};

/// Parse the JSON scenario format. Unknown keys and invariant violations raise
/// ValidationError with a dotted field path, e.g. "policy.A_u: ...".
Scenario parse_scenario(std::string_view json_text);
Scenario load_scenario(const std::filesystem::path& path);

struct ReplicationResult {
    int replicate = 0;
    PolicyKind policy = PolicyKind::ACAS;
    std::uint64_t seed = 0;
    RunResult result;
    std::vector<MetricsSnapshot> timeseries;
};

/// Worker count for replications: GUARDSIM_THREADS if set and positive,
/// otherwise the hardware concurrency.
int replication_threads();

/// Run `replications` independent engines with seeds base, base+1, ...
/// Results come back in replicate order regardless of scheduling.
std::vector<ReplicationResult> run_replications(const SimConfig& base, int replications, int threads,
                                                bool keep_timeseries_of_first_only = true);

/// The three policies of a comparison, all sharing `shared`'s thresholds.
std::vector<PolicyParams> comparison_policies(const PolicyParams& shared);

/// Same traffic and seeds under FCA, static guard and ACAS.
std::vector<ReplicationResult> run_comparison(const Scenario& scenario, int threads);

/// One row of the summary table.
struct SummaryRow {
    std::string replicate;  ///< index, or "mean", "stddev", "pooled"
    std::string policy;
    std::int64_t Nc = 0, Hc = 0, Rn = 0, Rh = 0, H = 0;
    double Pb = 0.0, Ph = 0.0, utilization = 0.0, final_GCh = 0.0;
};

inline constexpr std::string_view kTimeseriesHeader = "time,cell,policy,Oc,GCh,Nc,Hc,Rn,Rh,H,Pb,Ph,utilization";
inline constexpr std::string_view kSummaryHeader = "replicate,policy,Nc,Hc,Rn,Rh,H,Pb,Ph,utilization,final_GCh";

/// Replicate rows (post-warm-up, all cells pooled) followed by mean, stddev
/// and pooled rows for every policy present, in first-appearance order.
std::vector<SummaryRow> summarize(const std::vector<ReplicationResult>& results);

void write_timeseries_csv(std::ostream& out, const std::vector<ReplicationResult>& results, bool header = true);
void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows);
std::vector<SummaryRow> parse_summary_csv(std::istream& in);

/// Fixed 6-decimal formatting used for probabilities.
std::string format_probability(double p);
/// Shortest round-trip formatting for other reals.
std::string format_real(double x);

}  // namespace guardsim
