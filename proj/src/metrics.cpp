#include "guardsim/metrics.hpp"

#include <stdexcept>
#include <string>

namespace guardsim {

void MetricsCounters::record(Outcome outcome, int occupancy_before, double time) {
    if (time < last_update_time)
        throw std::logic_error("metrics time regression: " + std::to_string(time) + " < " +
                               std::to_string(last_update_time));
    busy_time_integral += occupancy_before * (time - last_update_time);
    last_update_time = time;
    switch (outcome) {
        case Outcome::NewAdmitted: ++Nc; break;
        case Outcome::NewRejected: ++Rn; break;
        case Outcome::HandoffAdmitted: ++Hc; ++H; break;
        case Outcome::HandoffRejected: ++Rh; ++H; break;
        case Outcome::HandoffOut: ++handoff_out; break;
        case Outcome::Released:
        case Outcome::None: break;
    }
}

double MetricsCounters::integral_at(int occupancy, double time) const {
    return busy_time_integral + occupancy * (time - last_update_time);
}

double ratio_or_zero(double numerator, double denominator) noexcept {
    return denominator > 0.0 ? numerator / denominator : 0.0;
}

namespace {

void finish(MetricsSnapshot& s) {
    s.Pb = ratio_or_zero(static_cast<double>(s.Rn), static_cast<double>(s.Nc + s.Rn));
    s.Ph = ratio_or_zero(static_cast<double>(s.Rh), static_cast<double>(s.H));
    s.utilization = ratio_or_zero(s.busy_time_integral, s.capacity * s.span_s);
}

}  // namespace

MetricsSnapshot snapshot(const MetricsCounters& counters, double time, int guard, int occupancy,
                         int capacity, std::optional<int> cell) {
    return snapshot_since(counters, MetricsCounters{}, 0.0, time, guard, occupancy, capacity, cell);
}

MetricsSnapshot snapshot_since(const MetricsCounters& counters, const MetricsCounters& baseline,
                               double baseline_time, double time, int guard, int occupancy,
                               int capacity, std::optional<int> cell) {
    MetricsSnapshot s;
    s.time = time;
    s.cell = cell;
    s.Oc = occupancy;
    s.GCh = guard;
    s.capacity = capacity;
    s.Nc = counters.Nc - baseline.Nc;
    s.Hc = counters.Hc - baseline.Hc;
    s.Rn = counters.Rn - baseline.Rn;
    s.Rh = counters.Rh - baseline.Rh;
    s.H = counters.H - baseline.H;
    s.busy_time_integral = counters.integral_at(occupancy, time) - baseline.busy_time_integral;
    s.span_s = time - baseline_time;
    finish(s);
    return s;
}

MetricsSnapshot aggregate(std::span<const MetricsSnapshot> cells) {
    if (cells.empty()) throw std::invalid_argument("aggregate: no snapshots");
    MetricsSnapshot s;
    s.time = cells.front().time;
    s.span_s = cells.front().span_s;
    for (const auto& c : cells) {
        if (c.time != s.time) throw std::invalid_argument("aggregate: snapshot times differ");
        s.Oc += c.Oc;
        s.GCh += c.GCh;
        s.capacity += c.capacity;
        s.Nc += c.Nc;
        s.Hc += c.Hc;
        s.Rn += c.Rn;
        s.Rh += c.Rh;
        s.H += c.H;
        s.busy_time_integral += c.busy_time_integral;
    }
    finish(s);
    return s;
}

}  // namespace guardsim
