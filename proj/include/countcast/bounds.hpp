#pragma once

#include <array>
#include <vector>

#include "countcast/series.hpp"

namespace countcast {

// Tail probabilities and scaling for the asymmetric outlier fences.
// Derived quantities follow the simplification p_l = 1 - p_r, p_m = p_r,
// p_M = p_l. An alpha < 0 stands for "unspecified" and resolves to the
// 10 * p_m rule of thumb.
struct TailParams {
    double p_r = 0.025;
    double delta_p = 0.075;
    double alpha = -1.0;
    bool clamp_lower_at_zero = true;

    double p_l() const { return 1.0 - p_r; }
    double p_m() const { return p_r; }
    double p_M() const { return p_l(); }
    double resolved_alpha() const { return alpha < 0.0 ? 10.0 * p_m() : alpha; }

    // throws InputError unless 0 < p_r < p_r+delta_p < 0.5 < p_l-delta_p < p_l < 1
    void validate() const;

    // p_r = p_m = 0.025, delta_p = 0.075, alpha = 2.5, clamped at zero
    static TailParams paper_defaults();
};

struct TailVariability {
    double rtv = 0.0;
    double ltv = 0.0;
};

struct Bounds {
    double m = 0.0;
    double M = 0.0;
};

// Hour-of-week damping table: one (m, M) pair per h in [0, 168), plus the
// pooled-sample fallback and the parameters that produced it.
struct DampingBounds {
    std::array<double, 168> m{};
    std::array<double, 168> M{};
    Bounds global{};
    TailParams params{};

    // integer-count damping limits: m rounded down, M rounded up
    long long damp_floor(int hour_of_week) const;
    long long damp_ceil(int hour_of_week) const;
};

struct TimeVaryingOptions {
    std::size_t min_bucket_size = 30;
    bool fallback_to_global = false;  // undersized bucket: global bounds instead of error
};

// Quantile by linear interpolation of order statistics, h = (n-1)*p.
// `sorted_sample` must be ascending and non-empty.
double empirical_quantile(const std::vector<double>& sorted_sample, double p);

// rtv = (q(p_r+delta) - q(p_r)) / delta, ltv = (q(p_l) - q(p_l-delta)) / delta
TailVariability tail_variability(const std::vector<double>& sorted_sample,
                                 const TailParams& params);

// m = q(p_m) - alpha*rtv (clamped at 0 when configured), M = q(p_M) + alpha*ltv
Bounds outlier_bounds(const std::vector<double>& sorted_sample, const TailParams& params);

// (Q1 - k*IQR, Q3 + k*IQR)
Bounds tukey_bounds(const std::vector<double>& sorted_sample, double k = 1.5);

// Outlier bounds per hour-of-week bucket plus pooled fallback. Buckets
// smaller than min_bucket_size raise InputError naming the bucket unless
// fallback_to_global is set.
DampingBounds time_varying_bounds(const CountSeries& training, const TailParams& params,
                                  const TimeVaryingOptions& options = {});

// single-threaded reference implementation
DampingBounds time_varying_bounds_serial(const CountSeries& training, const TailParams& params,
                                         const TimeVaryingOptions& options = {});

}  // namespace countcast
