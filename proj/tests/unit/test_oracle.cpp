#include <numeric>

#include "doctest.h"
#include "guardsim/oracle.hpp"
#include "guardsim/policy.hpp"
#include "reference_oracles.hpp"

using namespace guardsim;
using guardsim::testing::erlang_b_truncated_poisson;
using guardsim::testing::guard_channel_reference;

TEST_CASE("erlang_b: worked values") {
    CHECK(erlang_b(0, 7.3) == 1.0);
    // Two-state chain pi0 = pi1.
    CHECK(erlang_b(1, 1.0) == doctest::Approx(0.5).epsilon(1e-15));
    // pi ∝ (1, 1, 1/2).
    CHECK(erlang_b(2, 1.0) == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(erlang_b(5, 0.0) == 0.0);
}

TEST_CASE("erlang_b: negative inputs are rejected") {
    CHECK_THROWS_AS(erlang_b(-1, 1.0), ValidationError);
    CHECK_THROWS_AS(erlang_b(2, -1.0), ValidationError);
}

TEST_CASE("erlang_b: recurrence agrees with truncated Poisson normalisation") {
    double worst = 0.0;
    for (int c = 0; c <= 100; ++c)
        for (int ai = 1; ai <= 100; ++ai) {
            const double a = ai;
            worst = std::max(worst, std::abs(erlang_b(c, a) - erlang_b_truncated_poisson(c, a)));
        }
    CHECK(worst < 1e-12);
}

TEST_CASE("erlang_b: strictly monotone in load and channels") {
    for (int c = 1; c <= 40; ++c)
        for (double a = 0.5; a < 60.0; a += 0.5) {
            CHECK(erlang_b(c, a + 0.5) > erlang_b(c, a));
            CHECK(erlang_b(c + 1, a) < erlang_b(c, a));
        }
}

TEST_CASE("guard_channel_stationary: hand-solved two-channel chain") {
    // Detailed balance: pi1 = 2 pi0, pi2 = pi1 / 2 = pi0.
    const auto r = guard_channel_stationary(2, 1, 1.0, 1.0, 1.0);
    REQUIRE(r.state_probs.size() == 3);
    CHECK(r.state_probs[0] == doctest::Approx(0.25));
    CHECK(r.state_probs[1] == doctest::Approx(0.5));
    CHECK(r.state_probs[2] == doctest::Approx(0.25));
    CHECK(r.Ph == doctest::Approx(0.25));
    CHECK(r.Pb == doctest::Approx(0.75));
}

TEST_CASE("guard_channel_stationary: no guard reduces to Erlang-B") {
    for (int c : {1, 5, 20, 60})
        for (double ln : {0.5, 3.0, 12.0}) {
            const auto r = guard_channel_stationary(c, 0, ln, 2.0, 0.7);
            const double b = erlang_b(c, (ln + 2.0) / 0.7);
            CHECK(r.Pb == doctest::Approx(b).epsilon(1e-12));
            CHECK(r.Ph == doctest::Approx(b).epsilon(1e-12));
        }
}

TEST_CASE("guard_channel_stationary: guard states unreachable without handoffs") {
    const auto r = guard_channel_stationary(20, 5, 9.0, 0.0, 1.0);
    CHECK(r.Ph == 0.0);
    CHECK(r.Pb == doctest::Approx(erlang_b(15, 9.0)).epsilon(1e-12));
}

TEST_CASE("guard_channel_stationary: matches explicit generator solve") {
    for (int c : {1, 2, 7, 20, 35})
        for (int g = 0; g < c; g += 3)
            for (double lh : {0.0, 0.4, 5.0}) {
                const auto r = guard_channel_stationary(c, g, 6.0, lh, 0.5);
                const auto ref = guard_channel_reference(c, g, 6.0, lh, 0.5);
                CHECK(r.Pb == doctest::Approx(ref.Pb).epsilon(1e-10));
                CHECK(r.Ph == doctest::Approx(ref.Ph).epsilon(1e-10));
            }
}

TEST_CASE("guard_channel_stationary: large C stays finite and normalised") {
    const auto r = guard_channel_stationary(1000, 50, 900.0, 100.0, 1.0);
    const double total = std::accumulate(r.state_probs.begin(), r.state_probs.end(), 0.0);
    CHECK(std::abs(total - 1.0) < 1e-12);
    CHECK(std::isfinite(r.Pb));
    CHECK(r.Ph <= r.Pb);
}

TEST_CASE("guard_channel_stationary: normalisation and guard monotonicity over a grid") {
    for (int c = 1; c <= 30; ++c)
        for (double ln : {0.2, 2.0, 10.0, 40.0})
            for (double lh : {0.0, 0.5, 5.0}) {
                double prev_pb = -1.0, prev_ph = 2.0;
                for (int g = 0; g < c; ++g) {
                    const auto r = guard_channel_stationary(c, g, ln, lh, 1.0);
                    const double total = std::accumulate(r.state_probs.begin(), r.state_probs.end(), 0.0);
                    CHECK(std::abs(total - 1.0) < 1e-12);
                    CHECK(r.Ph <= r.Pb);
                    CHECK(r.Pb >= prev_pb - 1e-15);
                    CHECK(r.Ph <= prev_ph + 1e-15);
                    prev_pb = r.Pb;
                    prev_ph = r.Ph;
                }
            }
}

TEST_CASE("guard_channel_stationary: invalid arguments") {
    CHECK_THROWS_AS(guard_channel_stationary(0, 0, 1.0, 1.0, 1.0), ValidationError);
    CHECK_THROWS_AS(guard_channel_stationary(5, 5, 1.0, 1.0, 1.0), ValidationError);
    CHECK_THROWS_AS(guard_channel_stationary(5, -1, 1.0, 1.0, 1.0), ValidationError);
    CHECK_THROWS_AS(guard_channel_stationary(5, 1, -1.0, 1.0, 1.0), ValidationError);
    CHECK_THROWS_AS(guard_channel_stationary(5, 1, 1.0, 1.0, 0.0), ValidationError);
    CHECK_THROWS_AS(guard_channel_stationary(5, 1, 0.0, 0.0, 1.0), ValidationError);
}
