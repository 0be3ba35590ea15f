#include "guardsim/engine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace guardsim {

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& what) {
    throw ValidationError(field + ": " + what);
}

bool finite_non_negative(double x) { return std::isfinite(x) && x >= 0.0; }

}  // namespace

void TrafficConfig::validate() const {
    if (!finite_non_negative(lambda_new)) fail("traffic.lambda_new", "must be a finite non-negative rate");
    if (!(std::isfinite(mu) && mu > 0.0)) fail("traffic.mu", "must be a finite positive rate");
    if (!finite_non_negative(eta)) fail("traffic.eta", "must be a finite non-negative rate");
    if (!finite_non_negative(lambda_handoff))
        fail("traffic.lambda_handoff", "must be a finite non-negative rate");
}

Topology Topology::ring(int num_cells) {
    Topology t;
    t.num_cells = num_cells;
    t.neighbors.resize(static_cast<std::size_t>(std::max(num_cells, 0)));
    for (int c = 0; c < num_cells; ++c) {
        const int prev = (c + num_cells - 1) % num_cells;
        const int next = (c + 1) % num_cells;
        auto& list = t.neighbors[static_cast<std::size_t>(c)];
        if (next != c) list.push_back(next);
        if (prev != c && prev != next) list.push_back(prev);
    }
    return t;
}

void Topology::validate(bool needs_neighbors) const {
    if (num_cells < 1) fail("topology.num_cells", "must be a positive integer");
    if (neighbors.size() != static_cast<std::size_t>(num_cells))
        fail("topology.neighbors", "expected one list per cell (" + std::to_string(num_cells) + ")");
    for (int c = 0; c < num_cells; ++c) {
        const auto& list = neighbors[static_cast<std::size_t>(c)];
        const std::string field = "topology.neighbors[" + std::to_string(c) + "]";
        if (needs_neighbors && list.empty()) fail(field, "must not be empty when eta > 0");
        for (std::size_t i = 0; i < list.size(); ++i) {
            const int n = list[i];
            if (n < 0 || n >= num_cells) fail(field, "neighbour " + std::to_string(n) + " is not a valid cell");
            if (n == c) fail(field, "self-loop");
            if (std::find(list.begin(), list.begin() + static_cast<std::ptrdiff_t>(i), n) !=
                list.begin() + static_cast<std::ptrdiff_t>(i))
                fail(field, "duplicate neighbour " + std::to_string(n));
        }
    }
}

void SimConfig::validate() const {
    traffic.validate();
    topology.validate(traffic.eta > 0.0);
    policy.validate();
    if (!(std::isfinite(duration_s) && duration_s > 0.0)) fail("run.duration_s", "must be positive");
    if (!(warmup_fraction >= 0.0 && warmup_fraction < 1.0)) fail("run.warmup_fraction", "must lie in [0, 1)");
    if (snapshot_period_s && !(std::isfinite(*snapshot_period_s) && *snapshot_period_s > 0.0))
        fail("run.snapshot_period_s", "must be positive");
}

Engine::Engine(SimConfig config, Sampler sampler) : config_(std::move(config)), sampler_(std::move(sampler)) {
    config_.validate();
    const auto n = static_cast<std::size_t>(config_.topology.num_cells);
    cells_.reserve(n);
    streams_.reserve(n);
    arrivals_.assign(n, 0);
    for (std::size_t c = 0; c < n; ++c) {
        cells_.push_back(CellState{0, 0, 0, PolicyState(config_.policy), {}, {}});
        streams_.push_back(CellStreams{
            RandomStream(config_.seed, c, StreamPurpose::Arrivals),
            RandomStream(config_.seed, c, StreamPurpose::Durations),
            RandomStream(config_.seed, c, StreamPurpose::Residence),
            RandomStream(config_.seed, c, StreamPurpose::NeighborChoice),
            RandomStream(config_.seed, c, StreamPurpose::HandoffArrivals),
        });
    }
    warmup_time_ = config_.warmup_fraction * config_.duration_s;

    const auto& traffic = config_.traffic;
    for (int c = 0; c < config_.topology.num_cells; ++c) {
        if (traffic.lambda_new > 0.0)
            schedule(draw(c, StreamPurpose::Arrivals, traffic.lambda_new), EventKind::NewArrival, c);
        if (traffic.lambda_handoff > 0.0)
            schedule(draw(c, StreamPurpose::HandoffArrivals, traffic.lambda_handoff), EventKind::HandoffArrival,
                     c);
    }
    for (int c = 0; c < config_.topology.num_cells; ++c)
        schedule(config_.policy.window_s, EventKind::MeasureTick, c);
    if (config_.record_timeseries) schedule(config_.snapshot_period(), EventKind::Snapshot, -1);
}

void Engine::schedule(double time, EventKind kind, int cell, std::uint64_t call) {
    queue_.push(Event{time, next_seq_++, kind, cell, call});
}

double Engine::draw(int cell, StreamPurpose purpose, double rate) {
    if (sampler_) return sampler_(cell, purpose, rate);
    auto& s = streams_[static_cast<std::size_t>(cell)];
    switch (purpose) {
        case StreamPurpose::Arrivals: return s.arrivals.exponential(rate);
        case StreamPurpose::Durations: return s.durations.exponential(rate);
        case StreamPurpose::Residence: return s.residence.exponential(rate);
        case StreamPurpose::NeighborChoice:
            return static_cast<double>(s.neighbor.below(static_cast<std::uint64_t>(rate)));
        case StreamPurpose::HandoffArrivals: return s.handoff_arrivals.exponential(rate);
    }
    throw std::logic_error("unknown stream purpose");
}

double Engine::end_time() const { return config_.duration_s; }

bool Engine::finished() const {
    return exhausted_ || queue_.empty() || queue_.top().time > end_time();
}

std::optional<EventRecord> Engine::step() {
    if (finished()) {
        exhausted_ = true;
        return std::nullopt;
    }
    const Event ev = queue_.top();
    queue_.pop();
    if (ev.time < now_) throw std::logic_error("event time went backwards");
    if (!warmup_captured_ && ev.time > warmup_time_) capture_warmup_baseline();
    now_ = ev.time;

    EventRecord rec;
    rec.time = ev.time;
    rec.kind = ev.kind;
    rec.cell = ev.cell;
    rec.call = ev.call;
    if (ev.cell >= 0)
        rec.guard_before = rec.guard_after = cells_[static_cast<std::size_t>(ev.cell)].policy.guard();
    switch (ev.kind) {
        case EventKind::NewArrival: on_new_arrival(ev, rec); break;
        case EventKind::HandoffArrival: on_handoff_arrival(ev, rec); break;
        case EventKind::Completion: on_completion(ev, rec); break;
        case EventKind::ResidenceExpiry: on_residence_expiry(ev, rec); break;
        case EventKind::MeasureTick: on_measure_tick(ev, rec); break;
        case EventKind::Snapshot: on_snapshot(ev); break;
    }
    return rec;
}

void Engine::run_until(double time) {
    const double limit = std::min(time, end_time());
    while (!queue_.empty() && queue_.top().time <= limit) step();
    if (!warmup_captured_ && limit >= warmup_time_ && limit > 0.0) {
        // Baseline at the exact warm-up boundary needs no event there.
        if (queue_.empty() || queue_.top().time > warmup_time_) capture_warmup_baseline();
    }
}

RunResult Engine::run() {
    while (step()) {
    }
    if (!warmup_captured_) capture_warmup_baseline();
    return report();
}

void Engine::capture_warmup_baseline() {
    for (auto& cell : cells_) {
        cell.warmup_baseline = cell.counters;
        cell.warmup_baseline.busy_time_integral = cell.counters.integral_at(cell.occupancy, warmup_time_);
        cell.warmup_baseline.last_update_time = warmup_time_;
    }
    warmup_captured_ = true;
}

RunResult Engine::report() const {
    const double t = finished() ? end_time() : now_;
    RunResult r;
    const int capacity = config_.policy.capacity;
    for (std::size_t c = 0; c < cells_.size(); ++c) {
        const auto& cell = cells_[c];
        const int id = static_cast<int>(c);
        r.cells.push_back(snapshot(cell.counters, t, cell.policy.guard(), cell.occupancy, capacity, id));
        if (warmup_captured_) {
            r.cells_after_warmup.push_back(snapshot_since(cell.counters, cell.warmup_baseline, warmup_time_, t,
                                                          cell.policy.guard(), cell.occupancy, capacity, id));
        } else {
            MetricsCounters base = cell.counters;
            base.busy_time_integral = cell.counters.integral_at(cell.occupancy, t);
            r.cells_after_warmup.push_back(
                snapshot_since(cell.counters, base, t, t, cell.policy.guard(), cell.occupancy, capacity, id));
        }
        r.final_guard.push_back(cell.policy.guard());
    }
    r.total = aggregate(r.cells);
    r.total_after_warmup = aggregate(r.cells_after_warmup);
    return r;
}

void Engine::set_traffic(const TrafficConfig& traffic) {
    traffic.validate();
    config_.topology.validate(traffic.eta > 0.0);
    const TrafficConfig old = config_.traffic;
    config_.traffic = traffic;
    // Arrival streams are memoryless, so pending arrivals can simply be
    // replaced by fresh draws at the new rate.
    const bool new_changed = old.lambda_new != traffic.lambda_new;
    const bool handoff_changed = old.lambda_handoff != traffic.lambda_handoff;
    if (!new_changed && !handoff_changed) return;
    std::vector<Event> keep;
    while (!queue_.empty()) {
        const Event ev = queue_.top();
        queue_.pop();
        if ((new_changed && ev.kind == EventKind::NewArrival) ||
            (handoff_changed && ev.kind == EventKind::HandoffArrival))
            continue;
        keep.push_back(ev);
    }
    for (const auto& ev : keep) queue_.push(ev);
    for (int c = 0; c < config_.topology.num_cells; ++c) {
        if (new_changed && traffic.lambda_new > 0.0)
            schedule(now_ + draw(c, StreamPurpose::Arrivals, traffic.lambda_new), EventKind::NewArrival, c);
        if (handoff_changed && traffic.lambda_handoff > 0.0)
            schedule(now_ + draw(c, StreamPurpose::HandoffArrivals, traffic.lambda_handoff),
                     EventKind::HandoffArrival, c);
    }
}

Call* Engine::find_call(std::uint64_t id) {
    if (id >= next_call_) throw std::logic_error("event references unknown call " + std::to_string(id));
    auto it = calls_.find(id);
    return it == calls_.end() ? nullptr : &it->second;
}

void Engine::enter_cell(Call& call, int cell_index, CallEntry entry) {
    auto& cell = cells_[static_cast<std::size_t>(cell_index)];
    cell.counters.record(entry == CallEntry::New ? Outcome::NewAdmitted : Outcome::HandoffAdmitted,
                         cell.occupancy, now_);
    ++cell.occupancy;
    ++(entry == CallEntry::New ? cell.active_new : cell.active_handoff);
    call.cell = cell_index;
    call.entry = entry;
    if (config_.traffic.eta > 0.0) {
        schedule(now_ + draw(cell_index, StreamPurpose::Residence, config_.traffic.eta),
                 EventKind::ResidenceExpiry, cell_index, call.id);
    }
}

void Engine::leave_cell(const Call& call, Outcome outcome) {
    auto& cell = cells_[static_cast<std::size_t>(call.cell)];
    cell.counters.record(outcome, cell.occupancy, now_);
    --cell.occupancy;
    --(call.entry == CallEntry::New ? cell.active_new : cell.active_handoff);
}

void Engine::on_new_arrival(const Event& ev, EventRecord& rec) {
    const auto c = static_cast<std::size_t>(ev.cell);
    auto& cell = cells_[c];
    schedule(now_ + draw(ev.cell, StreamPurpose::Arrivals, config_.traffic.lambda_new), EventKind::NewArrival,
             ev.cell);
    ++arrivals_[c];

    const Decision d = cell.policy.admit_new(cell.occupancy);
    rec.decision = d;
    if (d == Decision::Reject) {
        cell.counters.record(Outcome::NewRejected, cell.occupancy, now_);
        return;
    }
    Call call;
    call.id = next_call_++;
    call.completion_time = now_ + draw(ev.cell, StreamPurpose::Durations, config_.traffic.mu);
    rec.call = call.id;
    schedule(call.completion_time, EventKind::Completion, ev.cell, call.id);
    enter_cell(call, ev.cell, CallEntry::New);
    calls_.emplace(call.id, call);
}

void Engine::on_handoff_arrival(const Event& ev, EventRecord& rec) {
    const auto c = static_cast<std::size_t>(ev.cell);
    auto& cell = cells_[c];
    schedule(now_ + draw(ev.cell, StreamPurpose::HandoffArrivals, config_.traffic.lambda_handoff),
             EventKind::HandoffArrival, ev.cell);

    const Decision d = cell.policy.admit_handoff(cell.occupancy);
    const AdaptationReport adapt = cell.policy.on_handoff_event(d);
    rec.decision = d;
    rec.target = ev.cell;
    rec.guard_before = adapt.old_guard;
    rec.guard_after = adapt.new_guard;
    if (d == Decision::Reject) {
        cell.counters.record(Outcome::HandoffRejected, cell.occupancy, now_);
        return;
    }
    Call call;
    call.id = next_call_++;
    call.completion_time = now_ + draw(ev.cell, StreamPurpose::Durations, config_.traffic.mu);
    rec.call = call.id;
    schedule(call.completion_time, EventKind::Completion, ev.cell, call.id);
    enter_cell(call, ev.cell, CallEntry::Handoff);
    calls_.emplace(call.id, call);
}

void Engine::on_completion(const Event& ev, EventRecord& rec) {
    Call* call = find_call(ev.call);
    if (!call) {
        rec.ignored = true;
        return;
    }
    rec.cell = call->cell;
    leave_cell(*call, Outcome::Released);
    calls_.erase(ev.call);
}

void Engine::on_residence_expiry(const Event& ev, EventRecord& rec) {
    Call* call = find_call(ev.call);
    if (!call) {
        rec.ignored = true;
        return;
    }
    const int source = call->cell;
    const auto& options = config_.topology.neighbors[static_cast<std::size_t>(source)];
    if (options.empty()) throw std::logic_error("residence expiry in a cell without neighbours");
    const auto pick = static_cast<std::size_t>(
        draw(source, StreamPurpose::NeighborChoice, static_cast<double>(options.size())));
    if (pick >= options.size()) throw std::logic_error("neighbour choice out of range");
    const int target = options[pick];
    auto& dest = cells_[static_cast<std::size_t>(target)];

    const Decision d = dest.policy.admit_handoff(dest.occupancy);
    const AdaptationReport adapt = dest.policy.on_handoff_event(d);
    rec.cell = source;
    rec.target = target;
    rec.decision = d;
    rec.guard_before = adapt.old_guard;
    rec.guard_after = adapt.new_guard;

    if (d == Decision::Admit) {
        leave_cell(*call, Outcome::HandoffOut);
        enter_cell(*call, target, CallEntry::Handoff);
    } else {
        // Dropped mid-conversation; its completion event becomes a no-op.
        dest.counters.record(Outcome::HandoffRejected, dest.occupancy, now_);
        leave_cell(*call, Outcome::Released);
        calls_.erase(ev.call);
    }
}

void Engine::on_measure_tick(const Event& ev, EventRecord&) {
    cells_[static_cast<std::size_t>(ev.cell)].policy.on_measure_tick();
    schedule(now_ + config_.policy.window_s, EventKind::MeasureTick, ev.cell);
}

void Engine::on_snapshot(const Event&) {
    const std::size_t first = timeseries_.size();
    const int capacity = config_.policy.capacity;
    for (std::size_t c = 0; c < cells_.size(); ++c) {
        const auto& cell = cells_[c];
        timeseries_.push_back(
            snapshot(cell.counters, now_, cell.policy.guard(), cell.occupancy, capacity, static_cast<int>(c)));
    }
    const MetricsSnapshot total =
        aggregate(std::span<const MetricsSnapshot>(timeseries_.data() + first, cells_.size()));
    timeseries_.push_back(total);
    schedule(now_ + config_.snapshot_period(), EventKind::Snapshot, -1);
}

void Engine::check_invariants() const {
    std::vector<int> live(cells_.size(), 0);
    for (const auto& [id, call] : calls_) {
        if (call.cell < 0 || call.cell >= static_cast<int>(cells_.size()))
            throw std::logic_error("call " + std::to_string(id) + " in invalid cell");
        ++live[static_cast<std::size_t>(call.cell)];
    }
    for (std::size_t c = 0; c < cells_.size(); ++c) {
        const auto& cell = cells_[c];
        const auto& p = cell.policy.params();
        const std::string where = "cell " + std::to_string(c) + ": ";
        if (cell.occupancy < 0 || cell.occupancy > p.capacity)
            throw std::logic_error(where + "occupancy out of range");
        if (cell.occupancy != cell.active_new + cell.active_handoff)
            throw std::logic_error(where + "Oc != active new + active handoff");
        if (cell.occupancy != live[c]) throw std::logic_error(where + "Oc != live calls in cell");
        if (cell.counters.H != cell.counters.Hc + cell.counters.Rh) throw std::logic_error(where + "H != Hc + Rh");
        if (cell.counters.Nc + cell.counters.Rn != static_cast<std::int64_t>(arrivals_[c]))
            throw std::logic_error(where + "Nc + Rn != new arrivals");
        if (cell.policy.guard() < p.guard_min || cell.policy.guard() > p.guard_max)
            throw std::logic_error(where + "guard outside clamps");
        if (cell.policy.window_rejected() > cell.policy.window_handoffs())
            throw std::logic_error(where + "window rejections exceed window handoffs");
    }
}

std::vector<Event> Engine::pending_events() const {
    auto copy = queue_;
    std::vector<Event> out;
    out.reserve(copy.size());
    while (!copy.empty()) {
        out.push_back(copy.top());
        copy.pop();
    }
    return out;
}

}  // namespace guardsim
