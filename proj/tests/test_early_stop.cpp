#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "blm/early_stop.hpp"
#include "blm/error.hpp"

using namespace blm;

namespace {

std::vector<StopDecision> run(const StopConfig& cfg, const std::vector<double>& xs) {
    StopMonitor m(cfg);
    std::vector<StopDecision> out;
    for (double x : xs) {
        out.push_back(m.observe(x));
        if (out.back() == StopDecision::Stop) break;
    }
    return out;
}

// First index i where each of the last `patience` observations failed to
// beat the running best, computed directly from the sequence.
std::optional<std::size_t> first_stop(const std::vector<double>& xs, int patience, bool maximize, double delta) {
    std::vector<bool> improved(xs.size());
    double best = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double v = maximize ? xs[i] : -xs[i];
        improved[i] = i == 0 || v > best + delta;
        if (improved[i]) best = v;
    }
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i + 1 < static_cast<std::size_t>(patience)) continue;
        bool all_bad = true;
        for (std::size_t j = i + 1 - patience; j <= i; ++j) all_bad = all_bad && !improved[j];
        if (all_bad) return i;
    }
    return std::nullopt;
}

}  // namespace

TEST_CASE("stream example") {
    const auto d = run({2, StopMode::Max, 0.0}, {0.5, 0.6, 0.55, 0.58});
    CHECK(d == std::vector<StopDecision>{StopDecision::Improved, StopDecision::Improved, StopDecision::Continue,
                                         StopDecision::Stop});
    StopMonitor m({2, StopMode::Max, 0.0});
    for (double x : {0.5, 0.6, 0.55}) m.observe(x);
    const auto before = m.best();
    CHECK(m.observe(0.58) == StopDecision::Stop);
    CHECK(m.stopped());
    CHECK(m.bad_count() == 2);
    CHECK(m.best().value == 0.6);
    CHECK(m.best().step == 1);
    CHECK(m.best().value == before.value);
    CHECK(m.step() == 4);
    CHECK(to_string(StopDecision::Improved) == "IMPROVED");
    CHECK(to_string(StopDecision::Continue) == "CONTINUE");
    CHECK(to_string(StopDecision::Stop) == "STOP");
}

TEST_CASE("increasing and constant streams") {
    StopMonitor up({3, StopMode::Max, 0.0});
    for (int i = 0; i < 1000; ++i) CHECK(up.observe(i * 0.001) == StopDecision::Improved);
    CHECK_FALSE(up.stopped());

    for (int p : {1, 2, 5, 15}) {
        const auto d = run({p, StopMode::Max, 0.0}, std::vector<double>(100, 0.7));
        CHECK(d.size() == static_cast<std::size_t>(p + 1));
        CHECK(d.back() == StopDecision::Stop);
    }
}

TEST_CASE("single observation and min mode") {
    StopMonitor m({15, StopMode::Min, 0.0});
    CHECK_THROWS_AS(m.best(), Error);
    m.observe(2.5);
    CHECK(m.best().value == 2.5);
    CHECK(m.best().step == 0);
    CHECK(m.observe(2.0) == StopDecision::Improved);
    CHECK(m.observe(2.1) == StopDecision::Continue);
    CHECK(m.best().value == 2.0);
}

TEST_CASE("min_delta") {
    StopMonitor m({5, StopMode::Max, 0.25});
    m.observe(1.0);
    CHECK(m.observe(1.25) == StopDecision::Continue);  // a gain of exactly min_delta is not enough
    CHECK(m.observe(1.5) == StopDecision::Improved);
    CHECK(m.bad_count() == 0);
}

TEST_CASE("errors") {
    StopMonitor m({1, StopMode::Max, 0.0});
    CHECK_THROWS_AS(m.observe(std::nan("")), Error);
    try {
        m.observe(std::numeric_limits<double>::infinity());
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::InvalidValue);
    }
    m.observe(1.0);
    CHECK(m.observe(0.5) == StopDecision::Stop);
    try {
        m.observe(2.0);
        FAIL("observe after stop");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Usage);
    }
    CHECK_THROWS_AS(StopMonitor({0, StopMode::Max, 0.0}), Error);
    CHECK_THROWS_AS(StopMonitor({2, StopMode::Max, -1.0}), Error);
    CHECK_THROWS_AS(StopMonitor({2, StopMode::Max, std::nan("")}), Error);
}

TEST_CASE("random streams stop at the first all-bad window") {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<int> pat(1, 6);
    std::uniform_int_distribution<int> coarse(0, 4);
    for (int trial = 0; trial < 2000; ++trial) {
        const int p = pat(rng);
        const bool maximize = trial % 2 == 0;
        const double delta = trial % 3 == 0 ? 0.05 : 0.0;
        std::vector<double> xs(40);
        for (std::size_t i = 0; i < xs.size(); ++i)
            xs[i] = trial % 4 == 0 ? coarse(rng) * 0.1 : u(rng) + 0.02 * static_cast<double>(i);
        const auto d = run({p, maximize ? StopMode::Max : StopMode::Min, delta}, xs);
        const auto expected = first_stop(xs, p, maximize, delta);
        if (expected) {
            REQUIRE(d.size() == *expected + 1);
            CHECK(d.back() == StopDecision::Stop);
        } else {
            CHECK(d.size() == xs.size());
            CHECK(d.back() != StopDecision::Stop);
        }
        // a strictly increasing transform leaves the decisions unchanged
        if (delta == 0.0) {
            std::vector<double> t(xs.size());
            for (std::size_t i = 0; i < xs.size(); ++i) t[i] = std::exp(3.0 * xs[i]) - 7.0;
            CHECK(run({p, maximize ? StopMode::Max : StopMode::Min, 0.0}, t) == d);
        }
        CHECK(run({p, maximize ? StopMode::Max : StopMode::Min, delta}, xs) == d);
    }
}
