#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "guardsim/metrics.hpp"

using namespace guardsim;

TEST_CASE("record: counter deltas") {
    MetricsCounters m;
    m.record(Outcome::NewAdmitted, 0, 1.0);
    CHECK(m.Nc == 1);
    m.record(Outcome::HandoffRejected, 1, 2.0);
    CHECK(m.Rh == 1);
    CHECK(m.H == 1);
    m.record(Outcome::HandoffAdmitted, 1, 2.0);
    CHECK(m.Hc == 1);
    CHECK(m.H == 2);
    m.record(Outcome::NewRejected, 2, 3.0);
    CHECK(m.Rn == 1);
    m.record(Outcome::HandoffOut, 2, 3.0);
    CHECK(m.handoff_out == 1);
    CHECK(m.H == m.Hc + m.Rh);
}

TEST_CASE("record: occupancy integral is a rectangle sum") {
    MetricsCounters m;
    m.record(Outcome::None, 0, 5.0);
    m.record(Outcome::None, 20, 15.0);
    CHECK(m.busy_time_integral == doctest::Approx(200.0));
    CHECK(m.integral_at(3, 17.0) == doctest::Approx(206.0));
}

TEST_CASE("record: time regression is an internal error") {
    MetricsCounters m;
    m.record(Outcome::None, 0, 5.0);
    CHECK_THROWS_AS(m.record(Outcome::None, 0, 4.0), std::logic_error);
}

TEST_CASE("snapshot: ratios and zero-denominator convention") {
    MetricsCounters m;
    m.Nc = 15;
    m.Rn = 5;
    auto s = snapshot(m, 10.0, 3, 0, 20, 0);
    CHECK(s.Pb == doctest::Approx(0.25));
    CHECK(s.Ph == 0.0);
    CHECK(s.utilization == 0.0);
    CHECK(s.GCh == 3);
    CHECK(*s.cell == 0);
}

TEST_CASE("snapshot: utilization is 1 with the cell pinned full") {
    MetricsCounters m;
    m.record(Outcome::None, 0, 0.0);
    auto s = snapshot(m, 50.0, 0, 20, 20);
    CHECK(s.utilization == doctest::Approx(1.0));
}

TEST_CASE("snapshot_since: excludes the warm-up interval") {
    MetricsCounters base;
    base.Nc = 10;
    base.Rn = 10;
    base.busy_time_integral = 100.0;
    base.last_update_time = 10.0;
    MetricsCounters now = base;
    now.Nc = 13;
    now.Rn = 11;
    now.busy_time_integral = 140.0;
    now.last_update_time = 20.0;
    const auto s = snapshot_since(now, base, 10.0, 20.0, 0, 0, 4);
    CHECK(s.Nc == 3);
    CHECK(s.Rn == 1);
    CHECK(s.Pb == doctest::Approx(0.25));
    CHECK(s.utilization == doctest::Approx(1.0));
}

TEST_CASE("aggregate: pooled, not averaged") {
    MetricsCounters a, b;
    a.Nc = 10;
    b.Rn = 10;
    const std::vector<MetricsSnapshot> cells{snapshot(a, 5.0, 1, 2, 20, 0), snapshot(b, 5.0, 2, 3, 20, 1)};
    const auto t = aggregate(cells);
    CHECK(t.Pb == doctest::Approx(0.5));
    CHECK_FALSE(t.cell.has_value());
    CHECK(t.Oc == 5);
    CHECK(t.GCh == 3);
    CHECK(t.capacity == 40);
}

TEST_CASE("aggregate: identity and symmetry") {
    MetricsCounters a;
    a.Nc = 7;
    a.Rn = 3;
    a.Hc = 4;
    a.Rh = 1;
    a.H = 5;
    a.busy_time_integral = 30.0;
    a.last_update_time = 10.0;
    const auto one = snapshot(a, 10.0, 2, 3, 20, 0);
    const auto single = aggregate(std::vector<MetricsSnapshot>{one});
    CHECK(single.Pb == one.Pb);
    CHECK(single.Ph == one.Ph);
    CHECK(single.utilization == one.utilization);
    const auto pair = aggregate(std::vector<MetricsSnapshot>{one, one});
    CHECK(pair.Pb == doctest::Approx(one.Pb));
    CHECK(pair.Ph == doctest::Approx(one.Ph));
    CHECK(pair.utilization == doctest::Approx(one.utilization));
}

TEST_CASE("aggregate: errors") {
    CHECK_THROWS_AS(aggregate(std::vector<MetricsSnapshot>{}), std::invalid_argument);
    MetricsSnapshot x, y;
    x.time = 1.0;
    y.time = 2.0;
    CHECK_THROWS_AS(aggregate(std::vector<MetricsSnapshot>{x, y}), std::invalid_argument);
}

TEST_CASE("property: aggregate ratios equal ratios of sums") {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> count(0, 50);
    for (int trial = 0; trial < 10000; ++trial) {
        const int n = std::uniform_int_distribution<int>(1, 8)(rng);
        std::vector<MetricsSnapshot> cells;
        std::int64_t nc = 0, rn = 0, rh = 0, h = 0;
        for (int c = 0; c < n; ++c) {
            MetricsCounters m;
            m.Nc = count(rng);
            m.Rn = count(rng);
            m.Hc = count(rng);
            m.Rh = count(rng);
            m.H = m.Hc + m.Rh;
            m.busy_time_integral = std::uniform_real_distribution<double>(0.0, 200.0)(rng);
            m.last_update_time = 10.0;
            nc += m.Nc;
            rn += m.Rn;
            rh += m.Rh;
            h += m.H;
            const auto s = snapshot(m, 10.0, 0, 0, 20, c);
            REQUIRE(s.utilization >= 0.0);
            REQUIRE(s.utilization <= 1.0);
            cells.push_back(s);
        }
        const auto t = aggregate(cells);
        REQUIRE(t.Pb == doctest::Approx(ratio_or_zero(double(rn), double(nc + rn))));
        REQUIRE(t.Ph == doctest::Approx(ratio_or_zero(double(rh), double(h))));
        REQUIRE(t.Pb >= 0.0);
        REQUIRE(t.Pb <= 1.0);
        REQUIRE(t.Ph <= 1.0);
    }
}
