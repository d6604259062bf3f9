#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "countcast/series.hpp"
#include "countcast/simulate.hpp"

namespace countcast {

struct EvaluationReport {
    double mae = 0.0;
    double rmse = 0.0;
    std::optional<double> correlation;  // empty when either sequence is constant
    double damping_rate = 0.0;          // filled by the caller where it applies
    std::int64_t n_compared = 0;
};

// MAE, RMSE and Pearson correlation of predicted vs observed.
EvaluationReport evaluate(const std::vector<double>& predicted,
                          const std::vector<double>& observed);

struct ProfileEntry {
    double mean = 0.0;
    double sd = 0.0;  // sample standard deviation, n-1 denominator
    std::int64_t n = 0;
};

// Per hour-of-week mean and sd; every bucket needs at least 2 observations.
std::array<ProfileEntry, 168> hour_of_week_profile(const CountSeries& series);

// Same, pooling every path of an ensemble into the buckets.
std::array<ProfileEntry, 168> hour_of_week_profile(const EnsembleResult& ensemble);

enum class Period { weekly, annual };

struct PeriodAverage {
    Timestamp period_start;
    double mean = 0.0;
    std::int64_t n_hours = 0;
    bool partial = false;  // period not fully covered by the series
};

// Mean count per hour within each calendar week (Sunday 00:00 start) or
// calendar year.
std::vector<PeriodAverage> periodic_averages(const CountSeries& series, Period period);

struct MeanSd {
    double mean = 0.0;
    double sd = 0.0;
};

// Mean and sample sd of a batch of values (sd = 0 for a single value).
MeanSd summarize(const std::vector<double>& values);

}  // namespace countcast
