#include <doctest.h>

#include <cmath>
#include <random>

#include "blm/criteria.hpp"
#include "blm/error.hpp"

using namespace blm;

TEST_CASE("eic") {
    CHECK(eic(0.5, 0.98) == doctest::Approx(-1.48).epsilon(1e-15));
    CHECK(eic(1.0, 1.0) == -2.0);
    CHECK(eic(0.0, 0.0) == 0.0);
}

TEST_CASE("eic_scaled with default constants") {
    for (double a : {0.0, 0.25, 0.5, 0.731, 1.0}) {
        CHECK(eic_scaled(a, 0.9462) == -a);
        CHECK(eic_scaled(a, 0.9999) == -a - 1.0);
    }
    CHECK(eic_scaled(0.0, 0.9462 + 0.0537 / 2) == doctest::Approx(-0.5).epsilon(1e-12));
    const ScalingConstants c;
    CHECK(c.mlh_range == doctest::Approx(0.0537).epsilon(1e-12));
    CHECK_THROWS_AS(eic_scaled(0.5, 0.97, ScalingConstants{0.9, 0.0}), Error);
    CHECK_THROWS_AS(eic_scaled(0.5, 0.97, ScalingConstants{0.9, -1.0}), Error);
    const auto custom = ScalingConstants::from_extremes(0.5, 0.9);
    CHECK(eic_scaled(0.2, 0.9, custom) == -0.2 - 1.0);
}

TEST_CASE("eic_scaled maps the default MLH range onto -A - [0, 1]") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> mlh(0.9462, 0.9999);
    std::uniform_real_distribution<double> acc(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        const double a = acc(rng);
        const double term = -a - eic_scaled(a, mlh(rng));
        CHECK(term >= -1e-12);
        CHECK(term <= 1.0 + 1e-12);
    }
}

TEST_CASE("eic_sr") {
    CHECK(eic_sr(0.3, 1.0) == 0.0);
    CHECK(eic_sr(1.0, std::exp(-1.0)) == doctest::Approx(1.0).epsilon(1e-15));
    // -ln(0.99) / 0.5 to 40 digits
    CHECK(std::fabs(eic_sr(0.5, 0.99) - 0.020100671707002900310) < 1e-12);
    CHECK_THROWS_AS(eic_sr(0.5, 0.0), Error);
    CHECK_THROWS_AS(eic_sr(0.5, -0.3), Error);
    CHECK_THROWS_AS(eic_sr(0.0, 0.9), Error);
    try {
        eic_sr(0.5, -0.1);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Domain);
    }
}

TEST_CASE("-eic is strictly increasing in both arguments") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        const double a = u(rng), m = u(rng), da = 1e-6 + u(rng) * 0.1, dm = 1e-6 + u(rng) * 0.1;
        CHECK(-eic(a + da, m) > -eic(a, m));
        CHECK(-eic(a, m + dm) > -eic(a, m));
    }
}

TEST_CASE("aic and bic as printed") {
    CHECK(aic(1.0, 3) == 6.0);
    CHECK(bic(1.0, 2, 1) == 0.0);
    CHECK(bic(1.0, 2, 10) == doctest::Approx(9.2103403719761827).epsilon(1e-14));
    CHECK(aic(std::exp(-2.0), 1) == doctest::Approx(6.0).epsilon(1e-15));
    CHECK_THROWS_AS(aic(0.0, 1), Error);
    CHECK_THROWS_AS(bic(-1.0, 1, 5), Error);
    CHECK_THROWS_AS(bic(1.0, 1, 0), Error);
}

TEST_CASE("run record validation") {
    RunRecord ok{3, 0.9, 0.97, 0.6};
    CHECK_NOTHROW(ok.validate());
    CHECK_THROWS_AS((RunRecord{-1, 0.5, 0.9, {}}).validate(), Error);
    CHECK_THROWS_AS((RunRecord{0, 1.5, 0.9, {}}).validate(), Error);
    CHECK_THROWS_AS((RunRecord{0, 0.5, 1.1, {}}).validate(), Error);
    CHECK_THROWS_AS((RunRecord{0, 0.5, 0.9, 2.0}).validate(), Error);
}

namespace {

std::vector<RunRecord> random_records(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> acc(0.1, 1.0), mlh(0.94, 1.0), val(0.3, 0.7);
    std::vector<RunRecord> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back({static_cast<std::int64_t>(i), acc(rng), mlh(rng), val(rng)});
    return out;
}

const CorrelationRow& find(const std::vector<CorrelationRow>& rows, std::string_view name) {
    for (const auto& r : rows)
        if (r.metric == name) return r;
    FAIL("row not found");
    return rows.front();
}

}  // namespace

TEST_CASE("correlation table rows") {
    auto records = random_records(40, 3);
    for (auto& r : records) r.val_accuracy = r.train_accuracy;
    auto rows = correlation_table(records);
    REQUIRE(rows.size() == 5);
    CHECK(rows[0].metric == "A");
    CHECK(*find(rows, "A").spearman == doctest::Approx(1.0));

    for (auto& r : records) r.val_accuracy = r.mlh;
    rows = correlation_table(records);
    CHECK(*find(rows, "MLH").spearman == doctest::Approx(1.0));
    for (const char* name : {"-EIC", "-EIC_scaled", "-EIC_SR"}) CHECK(find(rows, name).spearman.has_value());
}

TEST_CASE("correlation table: -EIC_SR row is empty outside its domain") {
    auto records = random_records(10, 4);
    records[2].train_accuracy = 0.0;
    const auto rows = correlation_table(records);
    CHECK_FALSE(find(rows, "-EIC_SR").spearman.has_value());
    CHECK(find(rows, "A").spearman.has_value());
}

TEST_CASE("correlation table errors") {
    auto records = random_records(5, 5);
    records[1].val_accuracy.reset();
    CHECK_THROWS_AS(correlation_table(records), Error);
    CHECK_THROWS_AS(correlation_table(std::span(records).first(2)), Error);
    // constant accuracy gives an empty row, not an error
    auto flat = random_records(6, 6);
    for (auto& r : flat) r.train_accuracy = 1.0;
    CHECK_FALSE(find(correlation_table(flat), "A").spearman.has_value());
}
