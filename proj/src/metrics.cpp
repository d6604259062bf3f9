#include "countcast/metrics.hpp"

#include <cmath>
#include <string>

#include "countcast/calendar.hpp"
#include "countcast/errors.hpp"

namespace countcast {

EvaluationReport evaluate(const std::vector<double>& predicted,
                          const std::vector<double>& observed) {
    if (predicted.size() != observed.size())
        throw InputError("predicted length " + std::to_string(predicted.size()) +
                         " does not match observed length " + std::to_string(observed.size()));
    if (predicted.size() < 2) throw InputError("evaluate needs at least 2 points");

    const auto n = static_cast<double>(predicted.size());
    EvaluationReport rep;
    rep.n_compared = static_cast<std::int64_t>(predicted.size());

    double abs_sum = 0.0, sq_sum = 0.0, p_mean = 0.0, o_mean = 0.0;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        const double d = predicted[i] - observed[i];
        abs_sum += std::fabs(d);
        sq_sum += d * d;
        p_mean += predicted[i];
        o_mean += observed[i];
    }
    rep.mae = abs_sum / n;
    rep.rmse = std::sqrt(sq_sum / n);
    p_mean /= n;
    o_mean /= n;

    double spp = 0.0, soo = 0.0, spo = 0.0;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        const double dp = predicted[i] - p_mean;
        const double od = observed[i] - o_mean;
        spp += dp * dp;
        soo += od * od;
        spo += dp * od;
    }
    // Pearson is undefined for a constant sequence; exact-zero test on the
    // sum of squared deviations, not a tolerance
    if (spp != 0.0 && soo != 0.0) rep.correlation = spo / std::sqrt(spp * soo);
    return rep;
}

namespace {

std::array<ProfileEntry, 168> profile_from_buckets(
    const std::array<std::vector<double>, 168>& buckets) {
    std::array<ProfileEntry, 168> out{};
    for (std::size_t h = 0; h < 168; ++h) {
        const auto& b = buckets[h];
        if (b.size() < 2)
            throw InputError("hour-of-week bucket " + std::to_string(h) + " has " +
                             std::to_string(b.size()) + " observations; need at least 2");
        double mean = 0.0;
        for (double v : b) mean += v;
        mean /= static_cast<double>(b.size());
        double ss = 0.0;
        for (double v : b) ss += (v - mean) * (v - mean);
        out[h].mean = mean;
        out[h].sd = std::sqrt(ss / static_cast<double>(b.size() - 1));
        out[h].n = static_cast<std::int64_t>(b.size());
    }
    return out;
}

}  // namespace

std::array<ProfileEntry, 168> hour_of_week_profile(const CountSeries& series) {
    std::array<std::vector<double>, 168> buckets;
    for (std::size_t i = 0; i < series.size(); ++i) {
        const int h = calendar_fields(series.timestamp_at(static_cast<std::int64_t>(i))).hour_of_week;
        buckets[static_cast<std::size_t>(h)].push_back(static_cast<double>(series.values[i]));
    }
    return profile_from_buckets(buckets);
}

std::array<ProfileEntry, 168> hour_of_week_profile(const EnsembleResult& ensemble) {
    std::array<std::vector<double>, 168> buckets;
    for (const auto& path : ensemble.paths)
        for (std::size_t t = 0; t < path.values.size(); ++t) {
            const int h = calendar_fields(ensemble.start + static_cast<std::int64_t>(t)).hour_of_week;
            buckets[static_cast<std::size_t>(h)].push_back(static_cast<double>(path.values[t]));
        }
    return profile_from_buckets(buckets);
}

std::vector<PeriodAverage> periodic_averages(const CountSeries& series, Period period) {
    if (series.empty()) throw InputError("periodic averages of an empty series");

    // epoch hour of the Sunday 00:00 on/before the epoch (1970-01-01 is a
    // Thursday, day_of_week 4)
    constexpr std::int64_t kWeekOrigin = -96;

    std::vector<PeriodAverage> out;
    std::int64_t current_key = 0;
    bool open = false;
    Timestamp period_start(0);
    std::int64_t expected_hours = 0;
    double sum = 0.0;
    std::int64_t n = 0;

    auto flush = [&] {
        if (!open) return;
        out.push_back({period_start, sum / static_cast<double>(n), n, n != expected_hours});
        sum = 0.0;
        n = 0;
    };

    for (std::size_t i = 0; i < series.size(); ++i) {
        const Timestamp ts = series.timestamp_at(static_cast<std::int64_t>(i));
        std::int64_t key;
        if (period == Period::weekly) {
            const std::int64_t shifted = ts.epoch_hours() - kWeekOrigin;
            key = shifted >= 0 ? shifted / 168 : (shifted - 167) / 168;
        } else {
            key = to_civil(ts).year;
        }
        if (!open || key != current_key) {
            flush();
            open = true;
            current_key = key;
            if (period == Period::weekly) {
                period_start = Timestamp(kWeekOrigin + key * 168);
                expected_hours = 168;
            } else {
                period_start = Timestamp::from_civil(static_cast<int>(key), 1, 1, 0);
                expected_hours = static_cast<std::int64_t>(year_length_days(static_cast<int>(key))) * 24;
            }
        }
        sum += static_cast<double>(series.values[i]);
        ++n;
    }
    flush();
    return out;
}

MeanSd summarize(const std::vector<double>& values) {
    MeanSd ms;
    if (values.empty()) return ms;
    for (double v : values) ms.mean += v;
    ms.mean /= static_cast<double>(values.size());
    if (values.size() < 2) return ms;
    double ss = 0.0;
    for (double v : values) ss += (v - ms.mean) * (v - ms.mean);
    ms.sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
    return ms;
}

}  // namespace countcast
