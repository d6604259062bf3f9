#include "countcast/simulate.hpp"

#include <atomic>
#include <exception>
#include <span>
#include <string>

#include "countcast/calendar.hpp"
#include "countcast/errors.hpp"
#include "countcast/rng.hpp"

namespace countcast {

namespace {

void check_config(const FittedModel& model, const CountSeries& tail,
                  const SimulationConfig& config, std::int64_t required_history) {
    if (config.horizon < 1) throw InputError("simulation horizon must be at least 1 hour");
    if (config.n_paths < 1) throw InputError("n_paths must be at least 1");
    if (static_cast<std::int64_t>(tail.size()) < required_history)
        throw InputError("observed tail holds " + std::to_string(tail.size()) +
                         " hours but the model needs " + std::to_string(required_history));
    if (model.beta.size() == 0) throw ModelError("model has no coefficients");
}

}  // namespace

SimulatedPath simulate_path(const FittedModel& model, const CountSeries& tail,
                            const DesignContext& context, const SimulationConfig& config,
                            std::uint64_t path_index) {
    const RowBuilder builder(model.column_names, context);
    check_config(model, tail, config, builder.required_history());

    Xoshiro256ss rng = substream(config.seed, path_index);
    const Timestamp first = tail.last_timestamp() + 1;

    SimulatedPath path;
    path.values.reserve(static_cast<std::size_t>(config.horizon));
    path.damped_low.assign(static_cast<std::size_t>(config.horizon), 0);
    path.damped_high.assign(static_cast<std::size_t>(config.horizon), 0);

    std::vector<long long> history = tail.values;
    history.reserve(history.size() + static_cast<std::size_t>(config.horizon));

    for (std::int64_t step = 0; step < config.horizon; ++step) {
        const Timestamp ts = first + step;
        const CalendarFields fields = calendar_fields(ts);
        const double t_index =
            static_cast<double>(ts.epoch_hours() - context.growth_origin_hour);
        const Eigen::VectorXd row = builder.build(fields, t_index, std::span(history));

        long long value = 0;
        bool overflowed = false;
        try {
            const double mu = predict_mean(model, row);
            value = sample_response(model.family, mu, rng);
        } catch (const PredictionOverflow& o) {
            if (!config.damping_enabled)
                throw ExplosivePathError(
                    "linear predictor " + std::to_string(o.linear_predictor) +
                        " overflows exp at simulation step " + std::to_string(step),
                    step);
            value = config.bounds.damp_ceil(fields.hour_of_week);
            ++path.overflow_events;
            overflowed = true;
        }

        if (config.damping_enabled && !overflowed) {
            const long long lo = config.bounds.damp_floor(fields.hour_of_week);
            const long long hi = config.bounds.damp_ceil(fields.hour_of_week);
            if (value > hi) {
                value = hi;
                path.damped_high[static_cast<std::size_t>(step)] = 1;
            } else if (value < lo) {
                value = lo;
                path.damped_low[static_cast<std::size_t>(step)] = 1;
            }
        }

        path.values.push_back(value);
        history.push_back(value);
    }
    return path;
}

namespace {

template <bool Parallel>
EnsembleResult ensemble_impl(const FittedModel& model, const CountSeries& tail,
                             const DesignContext& context, const SimulationConfig& config) {
    {
        const RowBuilder builder(model.column_names, context);
        check_config(model, tail, config, builder.required_history());
    }

    EnsembleResult out;
    out.start = tail.last_timestamp() + 1;
    out.paths.resize(static_cast<std::size_t>(config.n_paths));

    std::exception_ptr ep = nullptr;
    std::atomic<bool> failed{false};

#pragma omp parallel for schedule(dynamic) if (Parallel)
    for (int k = 0; k < config.n_paths; ++k) {
        if (failed.load(std::memory_order_relaxed)) continue;
        try {
            out.paths[static_cast<std::size_t>(k)] =
                simulate_path(model, tail, context, config, static_cast<std::uint64_t>(k));
        } catch (...) {
#pragma omp critical(countcast_sim_err)
            {
                if (!ep) ep = std::current_exception();
            }
            failed.store(true, std::memory_order_relaxed);
        }
    }
    if (ep) std::rethrow_exception(ep);

    const auto horizon = static_cast<std::size_t>(config.horizon);
    out.mean.assign(horizon, 0.0);
    long long flagged = 0;
    for (const auto& path : out.paths) {
        for (std::size_t t = 0; t < horizon; ++t) {
            out.mean[t] += static_cast<double>(path.values[t]);
            flagged += path.damped_low[t] + path.damped_high[t];
        }
    }
    for (double& m : out.mean) m /= config.n_paths;
    out.damping_rate =
        static_cast<double>(flagged) / (static_cast<double>(config.n_paths) * config.horizon);
    out.damping_warning = out.damping_rate > config.warn_damping_rate;
    return out;
}

}  // namespace

EnsembleResult simulate_ensemble(const FittedModel& model, const CountSeries& tail,
                                 const DesignContext& context, const SimulationConfig& config) {
    return ensemble_impl<true>(model, tail, context, config);
}

EnsembleResult simulate_ensemble_serial(const FittedModel& model, const CountSeries& tail,
                                        const DesignContext& context,
                                        const SimulationConfig& config) {
    return ensemble_impl<false>(model, tail, context, config);
}

}  // namespace countcast
