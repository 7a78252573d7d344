#include <doctest.h>

#include <cmath>

#include "scanguard/core.hpp"
#include "scanguard/rng.hpp"
#include "test_helpers.hpp"

using namespace scanguard;

namespace {

PriceSeries make_series(std::vector<double> prices, std::vector<double> volumes = {}) {
    PriceSeries s;
    s.store_id = "s1";
    s.item_id = "i1";
    if (volumes.empty())
        volumes.assign(prices.size(), 1.0);
    for (std::size_t i = 0; i < prices.size(); ++i)
        s.weeks.push_back(static_cast<int>(i));
    s.prices = std::move(prices);
    s.volumes = std::move(volumes);
    return s;
}

} // namespace

TEST_CASE("compute_ratios basic arithmetic") {
    const RatioSeries rs = compute_ratios(make_series({1, 2, 1}));
    REQUIRE(rs.size() == 2);
    CHECK(rs.ratios[0] == doctest::Approx(2.0));
    CHECK(rs.ratios[1] == doctest::Approx(0.5));
    CHECK(rs.log_ratios[0] == doctest::Approx(std::log(2.0)));
    CHECK(rs.log_ratios[1] == doctest::Approx(-std::log(2.0)));
}

TEST_CASE("compute_ratios constant prices") {
    const RatioSeries rs = compute_ratios(make_series({5, 5, 5, 5}));
    for (std::size_t i = 0; i < rs.size(); ++i) {
        CHECK(rs.ratios[i] == 1.0);
        CHECK(rs.log_ratios[i] == 0.0);
    }
}

TEST_CASE("compute_ratios price drop 880 to 630") {
    const RatioSeries rs = compute_ratios(make_series({880, 630}));
    CHECK(rs.ratios[0] == doctest::Approx(630.0 / 880.0).epsilon(1e-12));
    CHECK(rs.ratios[0] == doctest::Approx(0.71590909).epsilon(1e-7));
}

TEST_CASE("compute_ratios volume pairs and errors") {
    const RatioSeries rs = compute_ratios(make_series({1, 2, 3}, {10, 20, 30}));
    CHECK(rs.vol_pairs[0].prev == 10);
    CHECK(rs.vol_pairs[0].curr == 20);
    CHECK(rs.vol_pairs[1].prev == 20);

    CHECK_THROWS_AS(compute_ratios(make_series({1})), SeriesTooShort);
    CHECK_THROWS_AS(compute_ratios(make_series({1, -2})), NonPositivePrice);
    CHECK_THROWS_AS(compute_ratios(make_series({1, 2}, {1, 0})), NonPositiveVolume);
}

TEST_CASE("quantile fixed examples") {
    CHECK(quantile({1, 2, 3, 4, 5}, 0.5) == doctest::Approx(3.0));
    CHECK(quantile({1, 2, 3, 4}, 0.25) == doctest::Approx(1.75));
    // hand-applied interpolation rule
    CHECK(quantile({0.9, 1.0, 1.1}, 0.25) == doctest::Approx(0.95).epsilon(1e-12));
    CHECK(quantile({0.9, 1.0, 1.1}, 0.5) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(quantile({0.9, 1.0, 1.1}, 0.75) == doctest::Approx(1.05).epsilon(1e-12));
    CHECK(quantile({7.0}, 0.0) == 7.0);
    CHECK(quantile({7.0}, 1.0) == 7.0);
    CHECK_THROWS_AS(quantile({}, 0.5), EmptySample);
}

TEST_CASE("quantile is monotone in p and stays within the sample range") {
    Rng rng(101);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 1 + static_cast<int>(rng.uniform_below(20));
        std::vector<double> sample;
        for (int i = 0; i < n; ++i)
            sample.push_back(rng.normal() * 10.0);
        double lo = sample[0], hi = sample[0];
        for (double x : sample) {
            lo = std::min(lo, x);
            hi = std::max(hi, x);
        }
        double prev = quantile(sample, 0.0);
        for (double p = 0.0; p <= 1.0; p += 0.05) {
            const double q = quantile(sample, std::min(p, 1.0));
            CHECK(q >= prev);
            CHECK(q >= lo);
            CHECK(q <= hi);
            prev = q;
        }
    }
}

TEST_CASE("quartiles examples") {
    const QuartileSummary q = quartiles({1, 2, 3, 4, 5});
    CHECK(q.q1 == doctest::Approx(2.0));
    CHECK(q.q2 == doctest::Approx(3.0));
    CHECK(q.q3 == doctest::Approx(4.0));

    const QuartileSummary c = quartiles({1, 1, 1, 1});
    CHECK(c.q1 == 1.0);
    CHECK(c.q2 == 1.0);
    CHECK(c.q3 == 1.0);
}

TEST_CASE("normal sample IQR near 1.349 sigma") {
    Rng rng(7);
    std::vector<double> sample(10000);
    for (double& x : sample)
        x = rng.normal();
    const QuartileSummary q = quartiles(sample);
    const double iqr = q.q3 - q.q1;
    CHECK(std::abs(iqr - 1.349) / 1.349 < 0.05);
}

TEST_CASE("tukey_filter keeps changed observations with their labels") {
    const RatioSeries rs = test::make_ratio_series({1.0, 1.2, 1.0, 0.8});
    const RatioSeries f = tukey_filter(rs);
    REQUIRE(f.size() == 2);
    CHECK(f.ratios[0] == 1.2);
    CHECK(f.ratios[1] == 0.8);
    CHECK(f.t_index[0] == 2);
    CHECK(f.t_index[1] == 4);
}

TEST_CASE("tukey_filter degenerate and idempotent") {
    const RatioSeries all_one = test::make_ratio_series({1.0, 1.0, 1.0});
    CHECK(tukey_filter(all_one).empty());

    const RatioSeries rs = test::make_ratio_series({1.0, 1.05, 1.0, 0.9, 1.0});
    const RatioSeries once = tukey_filter(rs);
    const RatioSeries twice = tukey_filter(once);
    CHECK(once.ratios == twice.ratios);
    CHECK(once.t_index == twice.t_index);
}

TEST_CASE("tukey_filter tolerance band") {
    const RatioSeries rs = test::make_ratio_series({1.0005, 1.2, 0.9995});
    CHECK(tukey_filter(rs).size() == 3);        // exact comparison keeps near-1 values
    CHECK(tukey_filter(rs, 1e-3).size() == 1);  // band drops them
}

TEST_CASE("mostly-unchanged series filters below 10 percent") {
    std::vector<double> ratios(200, 1.0);
    for (std::size_t i = 0; i < ratios.size(); i += 13)
        ratios[i] = 1.1;
    const RatioSeries f = tukey_filter(test::make_ratio_series(ratios));
    CHECK(f.size() * 10 < ratios.size());
}

TEST_CASE("ratio series is scale invariant") {
    Rng rng(55);
    std::vector<double> prices;
    for (int i = 0; i < 30; ++i)
        prices.push_back(std::exp(rng.normal() * 0.1) * 100.0);
    const RatioSeries base = compute_ratios(make_series(prices));
    for (double k : {0.01, 3.0, 1e6}) {
        std::vector<double> scaled = prices;
        for (double& p : scaled)
            p *= k;
        const RatioSeries rs = compute_ratios(make_series(scaled));
        for (std::size_t i = 0; i < base.size(); ++i)
            CHECK(rs.ratios[i] == doctest::Approx(base.ratios[i]).epsilon(1e-12));
    }
}

TEST_CASE("cumulative log-ratios reconstruct relative prices") {
    Rng rng(56);
    std::vector<double> prices;
    for (int i = 0; i < 50; ++i)
        prices.push_back(std::exp(rng.normal()) * 10.0);
    const RatioSeries rs = compute_ratios(make_series(prices));
    double cum = 0.0;
    for (std::size_t i = 0; i < rs.size(); ++i) {
        cum += rs.log_ratios[i];
        CHECK(std::exp(cum) ==
              doctest::Approx(prices[i + 1] / prices[0]).epsilon(1e-10));
    }
}
