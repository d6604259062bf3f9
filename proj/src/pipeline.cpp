#include "countcast/pipeline.hpp"

#include <algorithm>
#include <filesystem>
#include <string>

#include "countcast/errors.hpp"

namespace countcast {

namespace {

std::vector<double> to_std(const Eigen::VectorXd& v) {
    return std::vector<double>(v.data(), v.data() + v.size());
}

std::vector<double> to_std(const std::vector<long long>& v) {
    std::vector<double> out;
    out.reserve(v.size());
    for (long long x : v) out.push_back(static_cast<double>(x));
    return out;
}

SelectionDiagram build_diagram(const RunConfig& config) {
    SelectionDiagram diagram = scenario(config.scenario_name);
    diagram.criterion = config.criterion;
    diagram.family = FamilySpec{config.family, 0.0};
    for (auto& node : diagram.nodes) {
        const auto it = config.strategy_overrides.find(node.name);
        if (it != config.strategy_overrides.end()) node.search_strategy = it->second;
    }
    return diagram;
}

void validate_windows(const RunConfig& config, const CountSeries& counts) {
    if (config.train_start > config.train_end)
        throw InputError("train_start is after train_end");
    if (config.train_start < counts.start || config.train_end > counts.last_timestamp())
        throw InputError("training window [" + format_timestamp(config.train_start) + ", " +
                         format_timestamp(config.train_end) + "] not covered by counts [" +
                         format_timestamp(counts.start) + ", " +
                         format_timestamp(counts.last_timestamp()) + "]");
    if (config.test_start != config.train_end + 1)
        throw InputError("test_start must be the hour after train_end (got " +
                         format_timestamp(config.test_start) + ")");
    if (config.test_end < config.test_start) throw InputError("test_end is before test_start");
}

}  // namespace

PipelineResult run_pipeline(const RunConfig& config, const CountSeries& counts) {
    counts.validate();
    validate_windows(config, counts);

    const CountSeries train = counts.slice(config.train_start, config.train_end);

    DesignContext ctx;
    ctx.growth_origin_hour = train.start.epoch_hours();
    ctx.growth_scale_hours = static_cast<double>(train.size());
    ctx.lag_transform = config.lag_transform;
    ctx.lag_transform_offset = config.lag_offset;

    PipelineResult res;
    res.selection = run_diagram(build_diagram(config), train, ctx);
    const FittedModel& model = res.selection.model;

    const TimeVaryingOptions bound_opts{config.min_bucket, config.bucket_fallback};
    if (config.damping) res.bounds = time_varying_bounds(train, config.tail, bound_opts);

    const std::int64_t horizon =
        config.horizon > 0 ? config.horizon : config.test_end - config.train_end;
    if (horizon < 1) throw InputError("simulation horizon is empty; check test window");

    SimulationConfig sim;
    sim.horizon = horizon;
    sim.n_paths = config.n_paths;
    sim.seed = config.seed;
    sim.damping_enabled = config.damping;
    sim.bounds = res.bounds;
    res.ensemble = simulate_ensemble(model, train, ctx, sim);

    // in-sample fit metrics on the final refit window
    MetricsReport& rep = res.metrics;
    rep.row.scenario = config.scenario_name;
    rep.row.family = family_name(config.family);
    {
        // model.column_names is the post-rank-drop set, so widths always match
        const DesignMatrix dm = assemble_design(train, model.column_names, ctx);
        const Eigen::VectorXd y = response_vector(train, dm.dropped_prefix);
        const Eigen::VectorXd mu = fitted_means(model, dm);
        const InfoCriteria ic = information_criteria(model, true);
        rep.row.std_aic = ic.aic;
        rep.row.std_bic = ic.bic;
        rep.row.fit_correlation = evaluate(to_std(mu), to_std(y)).correlation;
    }

    // forecast metrics over the hours where simulation and observations overlap
    const std::int64_t overlap =
        std::min<std::int64_t>(horizon, counts.last_timestamp() - config.train_end);
    if (overlap >= 2) {
        const CountSeries observed =
            counts.slice(config.test_start, config.train_end + overlap);
        const std::vector<double> obs = to_std(observed.values);
        std::vector<double> mean(res.ensemble.mean.begin(),
                                 res.ensemble.mean.begin() + overlap);
        rep.ensemble_vs_observed = evaluate(mean, obs);
        rep.ensemble_vs_observed.damping_rate = res.ensemble.damping_rate;
        rep.row.sim_correlation = rep.ensemble_vs_observed.correlation;
        rep.row.mae = rep.ensemble_vs_observed.mae;
        rep.row.rmse = rep.ensemble_vs_observed.rmse;

        std::vector<double> maes, rmses, corrs;
        for (const auto& path : res.ensemble.paths) {
            std::vector<double> vals = to_std(path.values);
            vals.resize(static_cast<std::size_t>(overlap));
            const EvaluationReport r = evaluate(vals, obs);
            maes.push_back(r.mae);
            rmses.push_back(r.rmse);
            if (r.correlation) corrs.push_back(*r.correlation);
        }
        rep.per_path_mae = summarize(maes);
        rep.per_path_rmse = summarize(rmses);
        rep.per_path_correlation = summarize(corrs);
    }
    rep.row.damping_pct = res.ensemble.damping_rate * 100.0;
    rep.damping_warning = res.ensemble.damping_warning;
    for (const auto& path : res.ensemble.paths) rep.overflow_events += path.overflow_events;

    // artifact emission
    const std::filesystem::path dir(config.out_dir);
    std::filesystem::create_directories(dir);
    auto at = [&dir](const std::string& name) { return (dir / name).string(); };
    std::vector<std::string> files;

    write_model_json(at("model.json"), model, ctx);
    files.push_back("model.json");
    write_trace_json(at("trace.json"), res.selection.trace, config.criterion, model.family);
    files.push_back("trace.json");
    if (config.damping) {
        write_bounds_csv(at("bounds.csv"), res.bounds);
        files.push_back("bounds.csv");
        write_bounds_meta_json(at("bounds_meta.json"), res.bounds, bound_opts);
        files.push_back("bounds_meta.json");
    }
    write_paths_csv(at("paths.csv"), res.ensemble);
    files.push_back("paths.csv");
    write_metrics_json(at("metrics.json"), rep);
    files.push_back("metrics.json");
    write_metrics_csv(at("metrics.csv"), {rep.row});
    files.push_back("metrics.csv");

    std::vector<ProfileColumn> profile;
    auto add_profile = [&profile](const std::string& label, auto&& source) {
        try {
            profile.push_back({label, hour_of_week_profile(source)});
        } catch (const InputError&) {
            // window too short to fill every bucket twice; column omitted
        }
    };
    add_profile("train", train);
    if (overlap >= 2) add_profile("test", counts.slice(config.test_start,
                                                       config.train_end + overlap));
    add_profile("sim", res.ensemble);
    write_profile_csv(at("profile.csv"), profile);
    files.push_back("profile.csv");

    write_period_csv(at("weekly_averages.csv"), periodic_averages(counts, Period::weekly));
    files.push_back("weekly_averages.csv");
    write_period_csv(at("annual_averages.csv"), periodic_averages(counts, Period::annual));
    files.push_back("annual_averages.csv");

    res.files = write_manifest(config.out_dir, files, config);
    return res;
}

PipelineResult run_pipeline(const RunConfig& config) {
    return run_pipeline(config, load_counts(config.counts_path, config.gap_policy));
}

std::vector<ScenarioMetrics> run_all_scenarios(const RunConfig& config,
                                               const CountSeries& counts) {
    std::vector<ScenarioMetrics> rows;
    const std::filesystem::path base(config.out_dir);
    for (const auto& name : scenario_names())
        for (const Family fam : {Family::poisson, Family::negbin}) {
            RunConfig sub = config;
            sub.scenario_name = name;
            sub.family = fam;
            sub.out_dir = (base / (name + "_" + family_name(fam))).string();
            rows.push_back(run_pipeline(sub, counts).metrics.row);
        }
    std::filesystem::create_directories(base);
    write_metrics_csv((base / "comparison.csv").string(), rows);
    return rows;
}

std::vector<ScenarioMetrics> run_all_scenarios(const RunConfig& config) {
    return run_all_scenarios(config, load_counts(config.counts_path, config.gap_policy));
}

}  // namespace countcast
