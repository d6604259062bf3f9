#include "countcast/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "countcast/calendar.hpp"
#include "countcast/errors.hpp"

namespace countcast {

void TailParams::validate() const {
    const double a = resolved_alpha();
    if (!(0.0 < p_r && p_r + delta_p < 0.5 && 0.5 < p_l() - delta_p && p_l() < 1.0))
        throw InputError("tail params violate 0 < p_r < p_r+delta_p < 0.5 < p_l-delta_p < p_l < 1");
    if (!(a >= 0.0)) throw InputError("alpha must be non-negative");
}

TailParams TailParams::paper_defaults() {
    TailParams p;
    p.p_r = 0.025;
    p.delta_p = 0.075;
    p.alpha = 2.5;
    p.clamp_lower_at_zero = true;
    return p;
}

long long DampingBounds::damp_floor(int hour_of_week) const {
    return static_cast<long long>(std::floor(m[static_cast<std::size_t>(hour_of_week)]));
}

long long DampingBounds::damp_ceil(int hour_of_week) const {
    return static_cast<long long>(std::ceil(M[static_cast<std::size_t>(hour_of_week)]));
}

double empirical_quantile(const std::vector<double>& sorted_sample, double p) {
    if (sorted_sample.empty()) throw InputError("quantile of empty sample");
    if (!(p >= 0.0 && p <= 1.0)) throw InputError("quantile probability outside [0,1]");
    const std::size_t n = sorted_sample.size();
    const double h = static_cast<double>(n - 1) * p;
    const auto i = static_cast<std::size_t>(h);
    if (i + 1 >= n) return sorted_sample[n - 1];
    const double frac = h - static_cast<double>(i);
    return sorted_sample[i] + frac * (sorted_sample[i + 1] - sorted_sample[i]);
}

TailVariability tail_variability(const std::vector<double>& sorted_sample,
                                 const TailParams& params) {
    params.validate();
    TailVariability tv;
    tv.rtv = (empirical_quantile(sorted_sample, params.p_r + params.delta_p) -
              empirical_quantile(sorted_sample, params.p_r)) /
             params.delta_p;
    tv.ltv = (empirical_quantile(sorted_sample, params.p_l()) -
              empirical_quantile(sorted_sample, params.p_l() - params.delta_p)) /
             params.delta_p;
    return tv;
}

Bounds outlier_bounds(const std::vector<double>& sorted_sample, const TailParams& params) {
    const TailVariability tv = tail_variability(sorted_sample, params);
    const double a = params.resolved_alpha();
    Bounds b;
    b.m = empirical_quantile(sorted_sample, params.p_m()) - a * tv.rtv;
    b.M = empirical_quantile(sorted_sample, params.p_M()) + a * tv.ltv;
    if (params.clamp_lower_at_zero) b.m = std::max(b.m, 0.0);
    return b;
}

Bounds tukey_bounds(const std::vector<double>& sorted_sample, double k) {
    const double q1 = empirical_quantile(sorted_sample, 0.25);
    const double q3 = empirical_quantile(sorted_sample, 0.75);
    const double iqr = q3 - q1;
    return Bounds{q1 - k * iqr, q3 + k * iqr};
}

namespace {

std::array<std::vector<double>, 168> bucket_samples(const CountSeries& training) {
    std::array<std::vector<double>, 168> buckets;
    for (std::size_t i = 0; i < training.size(); ++i) {
        const int h = calendar_fields(training.timestamp_at(i)).hour_of_week;
        buckets[static_cast<std::size_t>(h)].push_back(
            static_cast<double>(training.values[i]));
    }
    return buckets;
}

template <bool Parallel>
DampingBounds bounds_impl(const CountSeries& training, const TailParams& params,
                          const TimeVaryingOptions& options) {
    params.validate();
    if (training.empty()) throw InputError("time-varying bounds need a non-empty series");

    auto buckets = bucket_samples(training);

    std::vector<double> pooled;
    pooled.reserve(training.size());
    for (long long v : training.values) pooled.push_back(static_cast<double>(v));
    std::sort(pooled.begin(), pooled.end());

    DampingBounds out;
    out.params = params;
    out.global = outlier_bounds(pooled, params);

    const std::size_t min_size = std::max<std::size_t>(options.min_bucket_size, 1);
    for (std::size_t h = 0; h < 168; ++h)
        if (buckets[h].size() < min_size && !options.fallback_to_global)
            throw InputError("hour-of-week bucket " + std::to_string(h) + " has only " +
                             std::to_string(buckets[h].size()) + " observations (minimum " +
                             std::to_string(min_size) + ")");

#pragma omp parallel for schedule(static) if (Parallel)
    for (int h = 0; h < 168; ++h) {
        auto& sample = buckets[static_cast<std::size_t>(h)];
        if (sample.size() < min_size) {
            out.m[static_cast<std::size_t>(h)] = out.global.m;
            out.M[static_cast<std::size_t>(h)] = out.global.M;
            continue;
        }
        std::sort(sample.begin(), sample.end());
        const Bounds b = outlier_bounds(sample, params);
        out.m[static_cast<std::size_t>(h)] = b.m;
        out.M[static_cast<std::size_t>(h)] = b.M;
    }
    return out;
}

}  // namespace

DampingBounds time_varying_bounds(const CountSeries& training, const TailParams& params,
                                  const TimeVaryingOptions& options) {
    return bounds_impl<true>(training, params, options);
}

DampingBounds time_varying_bounds_serial(const CountSeries& training, const TailParams& params,
                                         const TimeVaryingOptions& options) {
    return bounds_impl<false>(training, params, options);
}

}  // namespace countcast
