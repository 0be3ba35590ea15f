#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace guardsim {

/// Raised when user-supplied parameters break a documented invariant. The
/// message starts with the offending field name.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class PolicyKind { FCA, StaticGuard, ACAS };

std::string_view to_string(PolicyKind kind) noexcept;
PolicyKind parse_policy_kind(std::string_view text);

/// Per-base-station admission parameters.
///
/// `capacity` channels are split into `capacity - guard` open-access channels
/// (new and handoff calls) and `guard` channels reserved for handoffs. For ACAS
/// the guard count moves inside [guard_min, guard_max] driven by the windowed
/// handoff rejection ratio compared with `increase_factor * threshold` and
/// `decrease_factor * threshold`.
struct PolicyParams {
    PolicyKind kind = PolicyKind::ACAS;
    int capacity = 20;
    int initial_guard = 10;
    double threshold = 0.2;
    double increase_factor = 0.9;
    double decrease_factor = 0.6;
    int consecutive_calls = 10;
    int guard_min = 0;
    int guard_max = 19;
    double window_s = 10.0;

    /// Throws ValidationError naming the first violated field.
    void validate() const;

    bool operator==(const PolicyParams&) const = default;
};

/// Parameters for the FCA baseline: no guard channels at all.
PolicyParams fca_params(const PolicyParams& shared);
/// Parameters for a static guard-channel policy pinned at `guard`.
PolicyParams static_guard_params(const PolicyParams& shared, int guard);
/// ACAS with the shared thresholds; clamps default to [0, capacity - 1].
PolicyParams acas_params(const PolicyParams& shared);

enum class Decision { Admit, Reject };

enum class AdaptationRule { None, Increment, Decrement };

struct AdaptationReport {
    int old_guard = 0;
    int new_guard = 0;
    AdaptationRule rule = AdaptationRule::None;
};

/// Admission state machine for one base station.
class PolicyState {
public:
    explicit PolicyState(const PolicyParams& params);

    /// Admit iff occupancy < capacity - guard.
    Decision admit_new(int occupancy) const;
    /// Admit iff occupancy < capacity.
    Decision admit_handoff(int occupancy) const;

    /// Feed the outcome of one handoff attempt into the window counters and,
    /// for ACAS, run the increment/decrement rules. At most one rule fires.
    AdaptationReport on_handoff_event(Decision outcome);

    /// Close the tumbling measurement window. The consecutive-call streak
    /// survives.
    void on_measure_tick() noexcept;

    const PolicyParams& params() const noexcept { return params_; }
    int guard() const noexcept { return guard_; }
    int open_access() const noexcept { return params_.capacity - guard_; }
    std::int64_t window_rejected() const noexcept { return window_rejected_; }
    std::int64_t window_handoffs() const noexcept { return window_handoffs_; }
    int streak() const noexcept { return streak_; }

private:
    void check_occupancy(int occupancy) const;

    PolicyParams params_;
    int guard_;
    std::int64_t window_rejected_ = 0;
    std::int64_t window_handoffs_ = 0;
    int streak_ = 0;
};

}  // namespace guardsim
