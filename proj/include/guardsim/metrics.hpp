#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace guardsim {

/// Counter update applied by `record`.
enum class Outcome {
    NewAdmitted,
    NewRejected,
    HandoffAdmitted,
    HandoffRejected,
    HandoffOut,  ///< call left this cell for a neighbour
    Released,    ///< call completed or was dropped while handing off
    None,        ///< only advance the occupancy integral
};

/// Cumulative per-cell counters plus the time integral of occupancy.
///
/// Nc/Hc/Rn/Rh/H count admissions and rejections since the start and never
/// decrease. The separate active gauges track how many live calls in the cell
/// entered it as new or as handoff calls, so that Oc = active_new + active_handoff.
struct MetricsCounters {
    std::int64_t Nc = 0;
    std::int64_t Hc = 0;
    std::int64_t Rn = 0;
    std::int64_t Rh = 0;
    std::int64_t H = 0;
    std::int64_t handoff_out = 0;
    double busy_time_integral = 0.0;
    double last_update_time = 0.0;

    /// Advance the integral with the pre-event occupancy, then apply the
    /// counter delta. Throws std::logic_error on time regression.
    void record(Outcome outcome, int occupancy_before, double time);

    /// Integral value extended to `time` at constant occupancy, without mutating.
    double integral_at(int occupancy, double time) const;

    bool operator==(const MetricsCounters&) const = default;
};

/// One time-series row. `cell` is empty for aggregate rows.
struct MetricsSnapshot {
    double time = 0.0;
    std::optional<int> cell;
    int Oc = 0;
    int GCh = 0;
    int capacity = 0;
    std::int64_t Nc = 0;
    std::int64_t Hc = 0;
    std::int64_t Rn = 0;
    std::int64_t Rh = 0;
    std::int64_t H = 0;
    double busy_time_integral = 0.0;
    /// Length of the interval the ratios and utilization cover.
    double span_s = 0.0;
    double Pb = 0.0;
    double Ph = 0.0;
    double utilization = 0.0;
};

/// Blocking ratios and utilization from raw counts; 0 for empty denominators.
double ratio_or_zero(double numerator, double denominator) noexcept;

/// Snapshot of counters accumulated since time 0.
MetricsSnapshot snapshot(const MetricsCounters& counters, double time, int guard, int occupancy,
                         int capacity, std::optional<int> cell = std::nullopt);

/// Snapshot of the counter increase between `baseline` (taken at
/// `baseline_time`) and `counters` at `time`. Used for warm-up exclusion.
MetricsSnapshot snapshot_since(const MetricsCounters& counters, const MetricsCounters& baseline,
                               double baseline_time, double time, int guard, int occupancy,
                               int capacity, std::optional<int> cell = std::nullopt);

/// Pool per-cell snapshots taken at the same time: counters are summed and the
/// ratios recomputed from the sums. Throws std::invalid_argument on an empty
/// input or mismatched times.
MetricsSnapshot aggregate(std::span<const MetricsSnapshot> cells);

}  // namespace guardsim
