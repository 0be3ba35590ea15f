#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <queue>
#include <unordered_map>
#include <vector>

#include "guardsim/metrics.hpp"
#include "guardsim/policy.hpp"
#include "guardsim/rng.hpp"

namespace guardsim {

/// Per-cell traffic rates, identical in every cell.
struct TrafficConfig {
    double lambda_new = 0.1;  ///< new-call arrivals per second
    double mu = 0.01;         ///< call completion rate; mean holding time 1/mu
    double eta = 0.01;        ///< cell residence rate; 0 disables mobility handoffs
    /// Extra Poisson stream of handoff requests from outside the modelled
    /// region. Zero in the usual closed-network setup.
    double lambda_handoff = 0.0;

    void validate() const;
    bool operator==(const TrafficConfig&) const = default;
};

struct Topology {
    int num_cells = 6;
    std::vector<std::vector<int>> neighbors;

    /// Ring with wraparound; one cell has no neighbours, two cells point at each other.
    static Topology ring(int num_cells);

    void validate(bool needs_neighbors) const;
    bool operator==(const Topology&) const = default;
};

struct SimConfig {
    Topology topology = Topology::ring(6);
    TrafficConfig traffic;
    PolicyParams policy;
    double duration_s = 3600.0;
    std::uint64_t seed = 42;
    /// Fraction of the run excluded from the post-warm-up report.
    double warmup_fraction = 0.1;
    /// Time-series cadence; defaults to the policy window.
    std::optional<double> snapshot_period_s;
    bool record_timeseries = true;

    void validate() const;
    double snapshot_period() const { return snapshot_period_s.value_or(policy.window_s); }
};

enum class CallEntry { New, Handoff };

struct Call {
    std::uint64_t id = 0;
    CallEntry entry = CallEntry::New;
    int cell = 0;
    double completion_time = 0.0;
};

enum class EventKind { NewArrival, HandoffArrival, Completion, ResidenceExpiry, MeasureTick, Snapshot };

struct Event {
    double time = 0.0;
    std::uint64_t seq = 0;
    EventKind kind = EventKind::NewArrival;
    int cell = -1;
    std::uint64_t call = 0;
};

/// What one step did. `cell` is where the event happened (the source cell for
/// a residence expiry), `target` the handoff destination.
struct EventRecord {
    double time = 0.0;
    EventKind kind = EventKind::NewArrival;
    int cell = -1;
    int target = -1;
    std::uint64_t call = 0;
    std::optional<Decision> decision;
    bool ignored = false;  ///< lazily cancelled event
    int guard_before = 0;
    int guard_after = 0;

    bool operator==(const EventRecord&) const = default;
};

struct CellState {
    int occupancy = 0;
    int active_new = 0;
    int active_handoff = 0;
    PolicyState policy;
    MetricsCounters counters;
    MetricsCounters warmup_baseline;
};

struct RunResult {
    std::vector<MetricsSnapshot> cells;  ///< since time 0
    MetricsSnapshot total;
    std::vector<MetricsSnapshot> cells_after_warmup;
    MetricsSnapshot total_after_warmup;
    std::vector<int> final_guard;
};

/// Discrete-event simulation of a cellular network with per-cell admission
/// policies. Single-threaded; independent instances share nothing.
class Engine {
public:
    /// Replaces the random streams: returns an exponential variate for the
    /// given rate, or a neighbour index when purpose is NeighborChoice (rate
    /// is then the number of options). Used to script event times in tests.
    using Sampler = std::function<double(int cell, StreamPurpose purpose, double rate)>;

    /// Validates the configuration (ValidationError naming the field).
    explicit Engine(SimConfig config, Sampler sampler = {});

    /// Handle the next event if it is due no later than the configured
    /// duration; nullopt once the run is over.
    std::optional<EventRecord> step();
    /// Step until the next event lies beyond `time` (capped at the duration).
    void run_until(double time);
    /// Step to the end and report.
    RunResult run();
    /// Report at the current clock (or at the duration once finished).
    RunResult report() const;

    /// Change rates mid-run. Timers already scheduled keep their old draws.
    void set_traffic(const TrafficConfig& traffic);

    /// Throws std::logic_error if occupancy bookkeeping is inconsistent.
    void check_invariants() const;

    double now() const noexcept { return now_; }
    bool finished() const;
    const SimConfig& config() const noexcept { return config_; }
    const std::vector<CellState>& cells() const noexcept { return cells_; }
    const std::unordered_map<std::uint64_t, Call>& live_calls() const noexcept { return calls_; }
    const std::vector<MetricsSnapshot>& timeseries() const noexcept { return timeseries_; }
    std::vector<Event> pending_events() const;
    std::uint64_t new_arrivals(int cell) const { return arrivals_[static_cast<std::size_t>(cell)]; }

private:
    struct Later {
        bool operator()(const Event& a, const Event& b) const noexcept {
            return a.time != b.time ? a.time > b.time : a.seq > b.seq;
        }
    };
    struct CellStreams {
        RandomStream arrivals;
        RandomStream durations;
        RandomStream residence;
        RandomStream neighbor;
        RandomStream handoff_arrivals;
    };

    void schedule(double time, EventKind kind, int cell, std::uint64_t call = 0);
    void on_new_arrival(const Event& ev, EventRecord& rec);
    void on_handoff_arrival(const Event& ev, EventRecord& rec);
    void on_completion(const Event& ev, EventRecord& rec);
    void on_residence_expiry(const Event& ev, EventRecord& rec);
    void on_measure_tick(const Event& ev, EventRecord& rec);
    void on_snapshot(const Event& ev);
    void enter_cell(Call& call, int cell, CallEntry entry);
    void leave_cell(const Call& call, Outcome outcome);
    Call* find_call(std::uint64_t id);
    void capture_warmup_baseline();
    double end_time() const;
    double draw(int cell, StreamPurpose purpose, double rate);

    SimConfig config_;
    Sampler sampler_;
    std::vector<CellState> cells_;
    std::vector<CellStreams> streams_;
    std::vector<std::uint64_t> arrivals_;
    std::priority_queue<Event, std::vector<Event>, Later> queue_;
    std::unordered_map<std::uint64_t, Call> calls_;
    std::vector<MetricsSnapshot> timeseries_;
    std::uint64_t next_seq_ = 0;
    std::uint64_t next_call_ = 0;
    double now_ = 0.0;
    double warmup_time_ = 0.0;
    bool warmup_captured_ = false;
    bool exhausted_ = false;
};

}  // namespace guardsim
