#include "guardsim/policy.hpp"

#include <algorithm>
#include <cmath>

namespace guardsim {

namespace {

[[noreturn]] void fail(std::string_view field, std::string_view what) {
    throw ValidationError(std::string(field) + ": " + std::string(what));
}

}  // namespace

std::string_view to_string(PolicyKind kind) noexcept {
    switch (kind) {
        case PolicyKind::FCA: return "fca";
        case PolicyKind::StaticGuard: return "static";
        case PolicyKind::ACAS: return "acas";
    }
    return "?";
}

PolicyKind parse_policy_kind(std::string_view text) {
    if (text == "fca" || text == "FCA") return PolicyKind::FCA;
    if (text == "static" || text == "StaticGuard" || text == "static_guard") return PolicyKind::StaticGuard;
    if (text == "acas" || text == "ACAS") return PolicyKind::ACAS;
    fail("policy.kind", "expected one of fca, static, acas; got '" + std::string(text) + "'");
}

void PolicyParams::validate() const {
    if (capacity < 1) fail("policy.C", "must be a positive integer");
    if (initial_guard < 0 || initial_guard > capacity - 1)
        fail("policy.GCh0", "must lie in [0, C-1]");
    if (!(threshold > 0.0 && threshold <= 1.0)) fail("policy.Th", "must lie in (0, 1]");
    if (!(increase_factor > 0.0 && increase_factor <= 1.0)) fail("policy.A_u", "must lie in (0, 1]");
    if (!(decrease_factor > 0.0 && decrease_factor <= increase_factor))
        fail("policy.A_d", "must lie in (0, A_u]");
    if (consecutive_calls < 1) fail("policy.N", "must be a positive integer");
    if (guard_min < 0 || guard_min > initial_guard) fail("policy.Cmin", "must lie in [0, GCh0]");
    if (guard_max < initial_guard || guard_max > capacity - 1)
        fail("policy.Cmax", "must lie in [GCh0, C-1]");
    if (!(window_s > 0.0) || !std::isfinite(window_s)) fail("policy.t", "must be a positive number of seconds");
    switch (kind) {
        case PolicyKind::FCA:
            if (initial_guard != 0 || guard_min != 0 || guard_max != 0)
                fail("policy.GCh0", "FCA requires GCh0 = Cmin = Cmax = 0");
            break;
        case PolicyKind::StaticGuard:
            if (guard_min != initial_guard || guard_max != initial_guard)
                fail("policy.Cmin", "static guard policy requires Cmin = Cmax = GCh0");
            break;
        case PolicyKind::ACAS: break;
    }
}

PolicyParams fca_params(const PolicyParams& shared) {
    PolicyParams p = shared;
    p.kind = PolicyKind::FCA;
    p.initial_guard = p.guard_min = p.guard_max = 0;
    return p;
}

PolicyParams static_guard_params(const PolicyParams& shared, int guard) {
    PolicyParams p = shared;
    p.kind = PolicyKind::StaticGuard;
    p.initial_guard = p.guard_min = p.guard_max = guard;
    return p;
}

PolicyParams acas_params(const PolicyParams& shared) {
    PolicyParams p = shared;
    p.kind = PolicyKind::ACAS;
    if (shared.kind != PolicyKind::ACAS) {
        p.guard_min = 0;
        p.guard_max = p.capacity - 1;
    }
    return p;
}

PolicyState::PolicyState(const PolicyParams& params) : params_(params), guard_(params.initial_guard) {
    params_.validate();
}

void PolicyState::check_occupancy(int occupancy) const {
    if (occupancy < 0 || occupancy > params_.capacity)
        throw std::logic_error("occupancy " + std::to_string(occupancy) + " outside [0, " +
                               std::to_string(params_.capacity) + "]");
}

Decision PolicyState::admit_new(int occupancy) const {
    check_occupancy(occupancy);
    return occupancy < params_.capacity - guard_ ? Decision::Admit : Decision::Reject;
}

Decision PolicyState::admit_handoff(int occupancy) const {
    check_occupancy(occupancy);
    return occupancy < params_.capacity ? Decision::Admit : Decision::Reject;
}

AdaptationReport PolicyState::on_handoff_event(Decision outcome) {
    ++window_handoffs_;
    if (outcome == Decision::Reject) ++window_rejected_;

    AdaptationReport report{guard_, guard_, AdaptationRule::None};
    if (params_.kind != PolicyKind::ACAS) return report;

    const double ratio = static_cast<double>(window_rejected_) / static_cast<double>(window_handoffs_);
    if (outcome == Decision::Reject && ratio >= params_.increase_factor * params_.threshold) {
        guard_ = std::min(guard_ + 1, params_.guard_max);
        streak_ = 0;
        report.rule = AdaptationRule::Increment;
    } else if (ratio <= params_.decrease_factor * params_.threshold) {
        if (++streak_ >= params_.consecutive_calls) {
            guard_ = std::max(guard_ - 1, params_.guard_min);
            streak_ = 0;
            report.rule = AdaptationRule::Decrement;
        }
    } else {
        streak_ = 0;
    }
    report.new_guard = guard_;
    return report;
}

void PolicyState::on_measure_tick() noexcept {
    window_rejected_ = 0;
    window_handoffs_ = 0;
}

}  // namespace guardsim
