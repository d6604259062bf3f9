#include <array>
#include <cmath>
#include <vector>

#include "countcast/errors.hpp"
#include "countcast/metrics.hpp"
#include "countcast/rng.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace countcast;
using countcast::testing::constant_series;
using countcast::testing::sunday_start;

TEST_CASE("evaluate on a hand-checked triple") {
    const std::vector<double> pred = {2.0, 2.0, 2.0};
    const std::vector<double> obs = {1.0, 2.0, 3.0};
    const EvaluationReport r = evaluate(pred, obs);
    CHECK(r.mae == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(r.rmse == doctest::Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-15));
    CHECK_FALSE(r.correlation.has_value());  // constant prediction
    CHECK(r.n_compared == 3);
}

TEST_CASE("evaluate recognizes perfect and affine predictions") {
    std::vector<double> obs;
    Xoshiro256ss rng(5);
    for (int i = 0; i < 200; ++i) obs.push_back(std::floor(rng.uniform01() * 40.0));

    const EvaluationReport perfect = evaluate(obs, obs);
    CHECK(perfect.mae == 0.0);
    CHECK(perfect.rmse == 0.0);
    REQUIRE(perfect.correlation.has_value());
    CHECK(*perfect.correlation == doctest::Approx(1.0).epsilon(1e-12));

    std::vector<double> affine;
    for (double v : obs) affine.push_back(2.0 * v + 5.0);
    const EvaluationReport scaled = evaluate(affine, obs);
    REQUIRE(scaled.correlation.has_value());
    CHECK(*scaled.correlation == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(scaled.mae > 0.0);
}

TEST_CASE("rmse dominates mae and both are symmetric in the arguments") {
    Xoshiro256ss rng(6);
    std::vector<double> a, b;
    for (int i = 0; i < 500; ++i) {
        a.push_back(rng.uniform01() * 30.0);
        b.push_back(rng.uniform01() * 30.0);
    }
    const EvaluationReport ab = evaluate(a, b);
    const EvaluationReport ba = evaluate(b, a);
    CHECK(ab.rmse >= ab.mae);
    CHECK(ab.mae == doctest::Approx(ba.mae).epsilon(1e-15));
    CHECK(ab.rmse == doctest::Approx(ba.rmse).epsilon(1e-15));
    REQUIRE(ab.correlation.has_value());
    REQUIRE(ba.correlation.has_value());
    CHECK(*ab.correlation == doctest::Approx(*ba.correlation).epsilon(1e-12));
}

TEST_CASE("evaluate validates its inputs") {
    CHECK_THROWS_AS(evaluate({1.0, 2.0}, {1.0}), InputError);
    CHECK_THROWS_AS(evaluate({1.0}, {1.0}), InputError);  // need at least 2 pairs
    CHECK_THROWS_AS(evaluate({}, {}), InputError);
}

TEST_CASE("hour-of-week profile of a constant series") {
    const CountSeries s = constant_series(sunday_start(), 168 * 3, 9);
    const auto profile = hour_of_week_profile(s);
    for (int h = 0; h < 168; ++h) {
        CHECK(profile[h].mean == 9.0);
        CHECK(profile[h].sd == 0.0);
        CHECK(profile[h].n == 3);
    }
}

TEST_CASE("profile sd uses the n-1 denominator") {
    // four weeks alternating 0,10 in every bucket: mean 5, var 25*4/3
    CountSeries s;
    s.start = sunday_start();
    for (int w = 0; w < 4; ++w)
        for (int h = 0; h < 168; ++h) s.values.push_back(w % 2 == 0 ? 0 : 10);
    const auto profile = hour_of_week_profile(s);
    for (int h = 0; h < 168; ++h) {
        CHECK(profile[h].mean == doctest::Approx(5.0).epsilon(1e-15));
        CHECK(profile[h].sd == doctest::Approx(std::sqrt(100.0 / 3.0)).epsilon(1e-12));
        CHECK(profile[h].n == 4);
    }
}

TEST_CASE("profile requires two observations per bucket") {
    // one full week: every bucket has a single observation
    const CountSeries s = constant_series(sunday_start(), 168, 4);
    CHECK_THROWS_AS(hour_of_week_profile(s), InputError);
}

TEST_CASE("ensemble profile pools the paths") {
    // two deterministic paths, two weeks each, built by hand
    EnsembleResult ens;
    ens.start = sunday_start();
    for (int k = 0; k < 2; ++k) {
        SimulatedPath p;
        for (int t = 0; t < 336; ++t) p.values.push_back(10 * k + t % 5);
        ens.paths.push_back(std::move(p));
    }

    const auto profile = hour_of_week_profile(ens);

    // reference: pool the per-bucket samples directly
    for (int h = 0; h < 168; ++h) {
        std::vector<double> bucket;
        for (const auto& p : ens.paths)
            for (int t = h; t < 336; t += 168) bucket.push_back(static_cast<double>(p.values[t]));
        REQUIRE(bucket.size() == 4);
        const MeanSd ref = summarize(bucket);
        CHECK(profile[h].mean == doctest::Approx(ref.mean).epsilon(1e-14));
        CHECK(profile[h].sd == doctest::Approx(ref.sd).epsilon(1e-12));
        CHECK(profile[h].n == 4);
    }
}

TEST_CASE("weekly averages split on sunday midnight") {
    // one aligned constant week: a single complete record
    const CountSeries one = constant_series(sunday_start(), 168, 4);
    const auto weeks1 = periodic_averages(one, Period::weekly);
    REQUIRE(weeks1.size() == 1);
    CHECK(weeks1[0].period_start.epoch_hours() == sunday_start().epoch_hours());
    CHECK(weeks1[0].mean == 4.0);
    CHECK(weeks1[0].n_hours == 168);
    CHECK_FALSE(weeks1[0].partial);

    // two weeks at different levels
    CountSeries two;
    two.start = sunday_start();
    for (int h = 0; h < 168; ++h) two.values.push_back(2);
    for (int h = 0; h < 168; ++h) two.values.push_back(6);
    const auto weeks2 = periodic_averages(two, Period::weekly);
    REQUIRE(weeks2.size() == 2);
    CHECK(weeks2[0].mean == 2.0);
    CHECK(weeks2[1].mean == 6.0);

    // one spare hour opens a partial second week
    const CountSeries spill = constant_series(sunday_start(), 169, 3);
    const auto weeks3 = periodic_averages(spill, Period::weekly);
    REQUIRE(weeks3.size() == 2);
    CHECK_FALSE(weeks3[0].partial);
    CHECK(weeks3[1].partial);
    CHECK(weeks3[1].n_hours == 1);

    // a mid-week start makes the first record partial
    const CountSeries offset = constant_series(sunday_start() + 100, 168, 3);
    const auto weeks4 = periodic_averages(offset, Period::weekly);
    REQUIRE(weeks4.size() == 2);
    CHECK(weeks4[0].partial);
    CHECK(weeks4[0].n_hours == 68);
    CHECK(weeks4[1].partial);
    CHECK(weeks4[1].n_hours == 100);
}

TEST_CASE("annual averages split on january first") {
    // 2018 at level 3, 2019 at level 5
    CountSeries s;
    s.start = Timestamp::from_civil(2018, 1, 1, 0);
    for (int h = 0; h < 365 * 24; ++h) s.values.push_back(3);
    for (int h = 0; h < 365 * 24; ++h) s.values.push_back(5);
    const auto years = periodic_averages(s, Period::annual);
    REQUIRE(years.size() == 2);
    CHECK(years[0].mean == 3.0);
    CHECK(years[0].n_hours == 365 * 24);
    CHECK_FALSE(years[0].partial);
    CHECK(years[1].mean == 5.0);
    CHECK_FALSE(years[1].partial);
    CHECK(years[1].period_start.epoch_hours() ==
          Timestamp::from_civil(2019, 1, 1, 0).epoch_hours());

    // a strictly growing series yields strictly increasing annual means
    CountSeries grow;
    grow.start = Timestamp::from_civil(2015, 1, 1, 0);
    for (int h = 0; h < 24 * (365 * 3 + 366); ++h) grow.values.push_back(h / 1000);
    const auto trend = periodic_averages(grow, Period::annual);
    REQUIRE(trend.size() == 4);
    for (std::size_t i = 1; i < trend.size(); ++i) CHECK(trend[i].mean > trend[i - 1].mean);
}

TEST_CASE("summarize handles singletons and pairs") {
    const MeanSd single = summarize({5.0});
    CHECK(single.mean == 5.0);
    CHECK(single.sd == 0.0);

    const MeanSd pair = summarize({0.0, 10.0});
    CHECK(pair.mean == 5.0);
    CHECK(pair.sd == doctest::Approx(std::sqrt(50.0)).epsilon(1e-15));

    const MeanSd none = summarize({});
    CHECK(none.mean == 0.0);
    CHECK(none.sd == 0.0);
}
