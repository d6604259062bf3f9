#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "countcast/bounds.hpp"
#include "countcast/calendar.hpp"
#include "countcast/errors.hpp"
#include "countcast/rng.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace countcast;
using countcast::testing::constant_series;
using countcast::testing::sunday_start;

namespace {

std::vector<double> iota_sample(int n) {
    std::vector<double> s(n);
    for (int i = 0; i < n; ++i) s[i] = static_cast<double>(i);
    return s;
}

}  // namespace

TEST_CASE("empirical quantile interpolates order statistics") {
    const auto s = iota_sample(100);
    CHECK(empirical_quantile(s, 0.0) == 0.0);
    CHECK(empirical_quantile(s, 1.0) == 99.0);
    CHECK(empirical_quantile(s, 0.5) == doctest::Approx(49.5).epsilon(1e-12));
    CHECK(empirical_quantile(s, 0.25) == doctest::Approx(24.75).epsilon(1e-12));
    CHECK(empirical_quantile(s, 0.75) == doctest::Approx(74.25).epsilon(1e-12));
    CHECK(empirical_quantile(s, 0.025) == doctest::Approx(2.475).epsilon(1e-12));
    CHECK(empirical_quantile(s, 0.975) == doctest::Approx(96.525).epsilon(1e-12));

    const std::vector<double> single = {5.0};
    for (double p : {0.0, 0.3, 0.5, 1.0}) CHECK(empirical_quantile(single, p) == 5.0);

    CHECK_THROWS_AS(empirical_quantile({}, 0.5), InputError);
    CHECK_THROWS_AS(empirical_quantile(s, -0.1), InputError);
    CHECK_THROWS_AS(empirical_quantile(s, 1.1), InputError);
}

TEST_CASE("empirical quantile matches an independently computed sample") {
    // 37 values hashed into [0, 97), sorted; reference quantiles were
    // computed with an independent linear-interpolation implementation
    std::vector<double> s;
    for (unsigned long long k = 0; k < 37; ++k)
        s.push_back(static_cast<double>((k * 2654435761ULL) % 97ULL));
    std::sort(s.begin(), s.end());
    CHECK(empirical_quantile(s, 0.13) == doctest::Approx(11.68).epsilon(1e-12));
    CHECK(empirical_quantile(s, 0.5) == doctest::Approx(46.0).epsilon(1e-12));
    CHECK(empirical_quantile(s, 0.77) == doctest::Approx(71.72).epsilon(1e-12));
}

TEST_CASE("empirical quantile is non-decreasing in p") {
    std::vector<double> s;
    Xoshiro256ss rng(99);
    for (int i = 0; i < 51; ++i) s.push_back(std::floor(rng.uniform01() * 40.0));
    std::sort(s.begin(), s.end());
    double prev = empirical_quantile(s, 0.0);
    for (int i = 1; i <= 100; ++i) {
        const double q = empirical_quantile(s, i / 100.0);
        CHECK(q >= prev);
        prev = q;
    }
}

TEST_CASE("tail params validation and derived probabilities") {
    TailParams p = TailParams::paper_defaults();
    CHECK(p.p_r == 0.025);
    CHECK(p.delta_p == 0.075);
    CHECK(p.alpha == 2.5);
    CHECK(p.clamp_lower_at_zero);
    CHECK(p.p_l() == doctest::Approx(0.975));
    CHECK(p.p_m() == doctest::Approx(0.025));
    CHECK(p.p_M() == doctest::Approx(0.975));
    p.validate();

    TailParams bad = p;
    bad.p_r = 0.3;
    bad.delta_p = 0.25;  // p_r + delta = 0.55 >= 0.5
    CHECK_THROWS_AS(bad.validate(), InputError);
    bad = p;
    bad.p_r = 0.0;
    CHECK_THROWS_AS(bad.validate(), InputError);

    // unspecified alpha resolves to the 10 * p_m rule
    TailParams unset = p;
    unset.alpha = -1.0;
    CHECK(unset.resolved_alpha() == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(p.resolved_alpha() == doctest::Approx(2.5).epsilon(1e-12));
}

TEST_CASE("tail variability of an arithmetic sample is the slope") {
    const auto s = iota_sample(100);
    TailParams params;
    params.p_r = 0.01;
    params.delta_p = 0.09;
    const TailVariability tv = tail_variability(s, params);
    CHECK(tv.rtv == doctest::Approx(99.0).epsilon(1e-9));
    CHECK(tv.ltv == doctest::Approx(99.0).epsilon(1e-9));

    // paper defaults yield the same slope on a linear quantile function
    const TailVariability tv2 = tail_variability(s, TailParams::paper_defaults());
    CHECK(tv2.rtv == doctest::Approx(99.0).epsilon(1e-9));
    CHECK(tv2.ltv == doctest::Approx(99.0).epsilon(1e-9));
}

TEST_CASE("right-skewed samples have larger upper-tail slope") {
    // squared integers: reference values rtv = 1223, ltv = 18379 under the
    // default tail probabilities, computed with an independent quantile oracle
    std::vector<double> sq;
    for (int i = 0; i < 100; ++i) sq.push_back(static_cast<double>(i) * i);
    const TailVariability tv = tail_variability(sq, TailParams::paper_defaults());
    CHECK(tv.rtv == doctest::Approx(1223.0).epsilon(1e-9));
    CHECK(tv.ltv == doctest::Approx(18379.0).epsilon(1e-9));
    CHECK(tv.ltv > tv.rtv);
}

TEST_CASE("tail variability scales linearly under affine maps") {
    const auto s = iota_sample(100);
    std::vector<double> scaled;
    for (double v : s) scaled.push_back(3.0 * v + 7.0);
    const TailParams params = TailParams::paper_defaults();
    const TailVariability base = tail_variability(s, params);
    const TailVariability aff = tail_variability(scaled, params);
    CHECK(aff.rtv == doctest::Approx(3.0 * base.rtv).epsilon(1e-9));
    CHECK(aff.ltv == doctest::Approx(3.0 * base.ltv).epsilon(1e-9));
    CHECK(base.rtv >= 0.0);
    CHECK(base.ltv >= 0.0);
}

TEST_CASE("outlier bounds reproduce the hand-derived values") {
    const auto s = iota_sample(100);
    TailParams params = TailParams::paper_defaults();
    params.clamp_lower_at_zero = false;
    const Bounds b = outlier_bounds(s, params);
    CHECK(b.m == doctest::Approx(-245.025).epsilon(1e-9));
    CHECK(b.M == doctest::Approx(344.025).epsilon(1e-9));

    params.clamp_lower_at_zero = true;
    const Bounds clamped = outlier_bounds(s, params);
    CHECK(clamped.m == 0.0);
    CHECK(clamped.M == doctest::Approx(344.025).epsilon(1e-9));
}

TEST_CASE("alpha = 0 collapses to the quantile fences") {
    const auto s = iota_sample(100);
    TailParams params = TailParams::paper_defaults();
    params.alpha = 0.0;
    params.clamp_lower_at_zero = false;
    const Bounds b = outlier_bounds(s, params);
    CHECK(b.m == doctest::Approx(2.475).epsilon(1e-12));
    CHECK(b.M == doctest::Approx(96.525).epsilon(1e-12));
}

TEST_CASE("default alpha follows the 10 p_m rule") {
    const auto s = iota_sample(100);
    TailParams params = TailParams::paper_defaults();
    params.alpha = -1.0;  // unspecified
    params.clamp_lower_at_zero = false;
    const Bounds b = outlier_bounds(s, params);
    // alpha resolves to 0.25: m = 2.475 - 0.25*99, M = 96.525 + 0.25*99
    CHECK(b.m == doctest::Approx(2.475 - 24.75).epsilon(1e-9));
    CHECK(b.M == doctest::Approx(96.525 + 24.75).epsilon(1e-9));
}

TEST_CASE("bounds respond monotonically to alpha") {
    const auto s = iota_sample(100);
    TailParams params = TailParams::paper_defaults();
    params.clamp_lower_at_zero = false;
    double prev_m = 1e300, prev_M = -1e300;
    for (const double a : {0.0, 0.5, 1.0, 2.5, 5.0}) {
        params.alpha = a;
        const Bounds b = outlier_bounds(s, params);
        CHECK(b.m <= prev_m);
        CHECK(b.M >= prev_M);
        prev_m = b.m;
        prev_M = b.M;
    }
}

TEST_CASE("tukey fences") {
    const auto s = iota_sample(100);
    const Bounds b = tukey_bounds(s);
    CHECK(b.m == doctest::Approx(-49.5).epsilon(1e-9));
    CHECK(b.M == doctest::Approx(148.5).epsilon(1e-9));

    const Bounds q = tukey_bounds(s, 0.0);
    CHECK(q.m == doctest::Approx(24.75).epsilon(1e-12));
    CHECK(q.M == doctest::Approx(74.25).epsilon(1e-12));

    const std::vector<double> flat(20, 6.0);
    const Bounds c = tukey_bounds(flat);
    CHECK(c.m == 6.0);
    CHECK(c.M == 6.0);
}

TEST_CASE("tukey and outlier bounds coincide in the degenerate parameterization") {
    // on a sample with a linear quantile function, p_m = 0.25 and
    // alpha*TV = 1.5*IQR make both constructions identical
    const auto s = iota_sample(100);
    TailParams params;
    params.p_r = 0.25;
    params.delta_p = 0.075;
    params.alpha = 0.75;  // 0.75 * 99 = 74.25 = 1.5 * IQR
    params.clamp_lower_at_zero = false;
    const Bounds ob = outlier_bounds(s, params);
    const Bounds tk = tukey_bounds(s);
    CHECK(ob.m == doctest::Approx(tk.m).epsilon(1e-9));
    CHECK(ob.M == doctest::Approx(tk.M).epsilon(1e-9));
}

TEST_CASE("constant series produce degenerate bucket bounds") {
    const CountSeries s = constant_series(sunday_start(), 168 * 40, 7);
    const DampingBounds b = time_varying_bounds(s, TailParams::paper_defaults());
    for (int h = 0; h < 168; ++h) {
        CHECK(b.m[h] == 7.0);
        CHECK(b.M[h] == 7.0);
        CHECK(b.damp_floor(h) == 7);
        CHECK(b.damp_ceil(h) == 7);
    }
    CHECK(b.global.m == 7.0);
    CHECK(b.global.M == 7.0);
    CHECK(b.params.alpha == 2.5);
}

TEST_CASE("damping limits round outward to integers") {
    DampingBounds b;
    b.m[0] = 1.2;
    b.M[0] = 10.7;
    CHECK(b.damp_floor(0) == 1);
    CHECK(b.damp_ceil(0) == 11);
    b.m[1] = -3.5;
    b.M[1] = 4.0;
    CHECK(b.damp_floor(1) == -4);
    CHECK(b.damp_ceil(1) == 4);
}

TEST_CASE("per-bucket bounds equal the bucket-sample oracle") {
    Xoshiro256ss rng(606);
    CountSeries s;
    s.start = sunday_start();
    const int weeks = 35;
    for (int i = 0; i < weeks * 168; ++i) {
        const int h = i % 168;
        s.values.push_back(sample_poisson(rng, 4.0 + 0.1 * h));
    }
    const TailParams params = TailParams::paper_defaults();
    const DampingBounds b = time_varying_bounds(s, params);

    // recompute one bucket by hand
    for (const int h : {0, 36, 167}) {
        std::vector<double> bucket;
        for (int w = 0; w < weeks; ++w)
            bucket.push_back(static_cast<double>(s.values[static_cast<std::size_t>(w) * 168 + h]));
        std::sort(bucket.begin(), bucket.end());
        const Bounds want = outlier_bounds(bucket, params);
        CHECK(b.m[h] == doctest::Approx(want.m).epsilon(1e-12));
        CHECK(b.M[h] == doctest::Approx(want.M).epsilon(1e-12));
    }

    // global bounds come from the pooled sorted sample
    std::vector<double> pooled(s.values.begin(), s.values.end());
    std::sort(pooled.begin(), pooled.end());
    const Bounds g = outlier_bounds(pooled, params);
    CHECK(b.global.m == doctest::Approx(g.m).epsilon(1e-12));
    CHECK(b.global.M == doctest::Approx(g.M).epsilon(1e-12));
}

TEST_CASE("undersized buckets raise an error naming the bucket") {
    // 170 hours: buckets 0 and 1 have two samples, the rest only one
    const CountSeries s = constant_series(sunday_start(), 170, 2);
    try {
        time_varying_bounds(s, TailParams::paper_defaults());
        FAIL("expected InputError");
    } catch (const InputError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("bucket") != std::string::npos);
        CHECK(msg.find("30") != std::string::npos);  // the configured minimum
    }
}

TEST_CASE("undersized buckets can fall back to the global bounds") {
    Xoshiro256ss rng(71);
    CountSeries s;
    s.start = sunday_start();
    for (int i = 0; i < 170; ++i) s.values.push_back(sample_poisson(rng, 9.0));
    TimeVaryingOptions opts;
    opts.min_bucket_size = 30;
    opts.fallback_to_global = true;
    const DampingBounds b = time_varying_bounds(s, TailParams::paper_defaults(), opts);
    // every bucket is undersized, so all entries equal the global bounds
    for (int h = 0; h < 168; ++h) {
        CHECK(b.m[h] == b.global.m);
        CHECK(b.M[h] == b.global.M);
    }
}

TEST_CASE("min bucket size of one is honoured") {
    const CountSeries s = constant_series(sunday_start(), 336, 5);
    TimeVaryingOptions opts;
    opts.min_bucket_size = 1;
    const DampingBounds b = time_varying_bounds(s, TailParams::paper_defaults(), opts);
    for (int h = 0; h < 168; ++h) CHECK(b.m[h] == 5.0);
}

TEST_CASE("bucketed bounds envelop fresh draws from the generator") {
    auto bucket_mu = [](int h) { return 6.0 + 14.0 * std::sin(h * 0.15) * std::sin(h * 0.15); };
    Xoshiro256ss rng(1234);
    CountSeries train;
    train.start = sunday_start();
    const int train_weeks = 30;
    for (int i = 0; i < train_weeks * 168; ++i)
        train.values.push_back(sample_poisson(rng, bucket_mu(i % 168)));
    const DampingBounds b = time_varying_bounds(train, TailParams::paper_defaults());

    int inside = 0, total = 0;
    for (int i = 0; i < 8 * 168; ++i) {
        const int h = i % 168;
        const auto draw = static_cast<double>(sample_poisson(rng, bucket_mu(h)));
        if (draw >= b.m[h] && draw <= b.M[h]) ++inside;
        ++total;
    }
    CHECK(static_cast<double>(inside) / total >= 0.99);
}

TEST_CASE("parallel and serial bucket bounds agree exactly") {
    Xoshiro256ss rng(88);
    CountSeries s;
    s.start = sunday_start();
    for (int i = 0; i < 168 * 31; ++i) s.values.push_back(sample_poisson(rng, 11.0));
    const DampingBounds par = time_varying_bounds(s, TailParams::paper_defaults());
    const DampingBounds ser = time_varying_bounds_serial(s, TailParams::paper_defaults());
    for (int h = 0; h < 168; ++h) {
        CHECK(par.m[h] == ser.m[h]);
        CHECK(par.M[h] == ser.M[h]);
    }
    CHECK(par.global.m == ser.global.m);
    CHECK(par.global.M == ser.global.M);
}

TEST_CASE("bounds ordering invariant holds on random data") {
    Xoshiro256ss rng(4321);
    CountSeries s;
    s.start = sunday_start();
    for (int i = 0; i < 168 * 30; ++i) s.values.push_back(sample_poisson(rng, 15.0));
    const DampingBounds b = time_varying_bounds(s, TailParams::paper_defaults());
    for (int h = 0; h < 168; ++h) {
        CHECK(b.m[h] <= b.M[h]);
        CHECK(b.m[h] >= 0.0);  // clamped parameterization
    }
}
