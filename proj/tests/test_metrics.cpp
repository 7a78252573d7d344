#include <doctest.h>

#include <cmath>

#include "scanguard/metrics.hpp"
#include "scanguard/rng.hpp"

using namespace scanguard;

namespace {

FlagVector make_flags(const std::vector<int>& idx, const std::vector<int>& flagged) {
    FlagVector f;
    f.t_index = idx;
    for (int i : idx)
        f.is_outlier.push_back(
            std::find(flagged.begin(), flagged.end(), i) != flagged.end() ? 1 : 0);
    return f;
}

} // namespace

TEST_CASE("confusion counts") {
    const std::vector<int> idx = {1, 2, 3, 4, 5};
    const ConfusionCounts all_clear = confusion(make_flags(idx, {}), {});
    CHECK(all_clear.tn == 5);
    CHECK(all_clear.tp + all_clear.fp + all_clear.fn == 0);

    const ConfusionCounts exact = confusion(make_flags(idx, {2, 4}), {2, 4});
    CHECK(exact.tp == 2);
    CHECK(exact.tn == 3);
    CHECK(exact.fp == 0);
    CHECK(exact.fn == 0);

    const ConfusionCounts mixed = confusion(make_flags(idx, {2, 3}), {3, 5});
    CHECK(mixed.tp == 1);  // 3
    CHECK(mixed.fp == 1);  // 2
    CHECK(mixed.fn == 1);  // 5
    CHECK(mixed.tn == 2);  // 1, 4

    CHECK_THROWS_AS(confusion(make_flags(idx, {}), {99}), IndexMismatch);
}

TEST_CASE("rates arithmetic") {
    const RateSummary r = rates(10, 80, 5, 5);
    CHECK(*r.sen == doctest::Approx(10.0 / 15.0));
    CHECK(*r.spe == doctest::Approx(80.0 / 85.0));
    CHECK(*r.acc == doctest::Approx(0.90));

    const RateSummary empty_p = rates(0, 10, 2, 0);
    CHECK_FALSE(empty_p.sen.has_value());
    CHECK(empty_p.spe.has_value());
}

TEST_CASE("rates reproduce benchmark-table entries from mean counts") {
    // tp, tn, fp, fn replicate means
    const RateSummary hb_a = rates(18.38, 244.82, 25.82, 9.98);
    CHECK(std::abs(*hb_a.sen - 0.65) < 0.005);
    CHECK(std::abs(*hb_a.spe - 0.90) < 0.005);
    CHECK(std::abs(*hb_a.acc - 0.88) < 0.005);

    const RateSummary var_b = rates(11.14, 268.58, 1.76, 17.52);
    CHECK(std::abs(*var_b.sen - 0.39) < 0.005);
    CHECK(std::abs(*var_b.spe - 0.99) < 0.005);
    CHECK(std::abs(*var_b.acc - 0.94) < 0.005);
}

TEST_CASE("accuracy identity from sensitivity and specificity") {
    Rng rng(83);
    for (int trial = 0; trial < 500; ++trial) {
        ConfusionCounts c;
        c.tp = static_cast<long>(rng.uniform_below(50)) + 1;
        c.fn = static_cast<long>(rng.uniform_below(50));
        c.tn = static_cast<long>(rng.uniform_below(300)) + 1;
        c.fp = static_cast<long>(rng.uniform_below(50));
        const RateSummary r = rates(c);
        const double p = static_cast<double>(c.tp + c.fn);
        const double n = static_cast<double>(c.tn + c.fp);
        CHECK(*r.acc ==
              doctest::Approx((*r.sen * p + *r.spe * n) / (p + n)).epsilon(1e-12));
    }
}

TEST_CASE("aggregate mean and sample sd") {
    const Aggregate single = aggregate(std::vector<double>{0.5});
    CHECK(single.mean == 0.5);
    CHECK(single.sd == 0.0);
    CHECK(single.n == 1);

    const Aggregate two = aggregate(std::vector<double>{0.9, 0.94});
    CHECK(two.mean == doctest::Approx(0.92));
    CHECK(two.sd == doctest::Approx(0.0283).epsilon(0.01));

    const Aggregate constant = aggregate(std::vector<double>{2.0, 2.0, 2.0});
    CHECK(constant.mean == 2.0);
    CHECK(constant.sd == 0.0);

    CHECK_THROWS_AS(aggregate(std::vector<double>{}), EmptyInput);
}

TEST_CASE("aggregate excludes undefined values with a count") {
    std::vector<std::optional<double>> vals = {0.5, std::nullopt, 0.7, std::nullopt};
    const Aggregate a = aggregate(vals);
    CHECK(a.mean == doctest::Approx(0.6));
    CHECK(a.n == 2);
    CHECK(a.excluded == 2);

    const Aggregate none = aggregate(std::vector<std::optional<double>>{std::nullopt});
    CHECK(none.n == 0);
    CHECK(none.excluded == 1);
}

TEST_CASE("rates are order invariant") {
    const std::vector<int> idx = {10, 11, 12, 13};
    const RateSummary fwd = rates(confusion(make_flags(idx, {11}), {11, 13}));
    const std::vector<int> rev = {13, 12, 11, 10};
    const RateSummary bwd = rates(confusion(make_flags(rev, {11}), {11, 13}));
    CHECK(*fwd.sen == *bwd.sen);
    CHECK(*fwd.spe == *bwd.spe);
    CHECK(*fwd.acc == *bwd.acc);
}
