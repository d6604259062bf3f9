#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "countcast/errors.hpp"
#include "countcast/kernels.hpp"
#include "countcast/pipeline.hpp"

namespace cc = countcast;

namespace {

void print_trace_summary(const cc::SelectionTrace& trace) {
    std::cout << "node        candidates  kept  criterion\n";
    for (const auto& node : trace.nodes) {
        std::printf("%-12s%-12zu%-6zu%.6f\n", node.group.c_str(), node.candidates.size(),
                    node.chosen.size(), node.criterion_after);
    }
    std::cout << "final model: " << trace.final_columns.size()
              << " columns + intercept, criterion " << cc::format_double(trace.final_criterion)
              << '\n';
}

void print_metrics(const cc::MetricsReport& rep) {
    std::cout << "std_aic=" << cc::format_double(rep.row.std_aic)
              << " std_bic=" << cc::format_double(rep.row.std_bic) << " fit_corr="
              << (rep.row.fit_correlation ? cc::format_double(*rep.row.fit_correlation) : "NA")
              << " damping_pct=" << cc::format_double(rep.row.damping_pct) << " sim_corr="
              << (rep.row.sim_correlation ? cc::format_double(*rep.row.sim_correlation) : "NA")
              << " mae=" << cc::format_double(rep.row.mae)
              << " rmse=" << cc::format_double(rep.row.rmse) << '\n';
    if (rep.damping_warning)
        std::cout << "warning: damping rate above 20%; bounds likely too tight for the model\n";
}

// Collects flag overrides in command-line order; values reuse the config
// schema so every flag maps to exactly one RunConfig field.
struct Overrides {
    std::vector<std::pair<std::string, std::string>> items;

    void add_option(CLI::App* cmd, const std::string& flag, const std::string& key,
                    const std::string& help) {
        cmd->add_option_function<std::string>(
            flag, [this, key](const std::string& v) { items.emplace_back(key, v); }, help);
    }
    void add_toggle(CLI::App* cmd, const std::string& flag, const std::string& no_flag,
                    const std::string& key, const std::string& help) {
        cmd->add_flag_callback(
            flag, [this, key] { items.emplace_back(key, "true"); }, help);
        cmd->add_flag_callback(
            no_flag, [this, key] { items.emplace_back(key, "false"); }, "disable " + help);
    }
    void apply(cc::RunConfig& config) const {
        for (const auto& [key, value] : items) cc::apply_config_value(config, key, value);
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hourly count regression: grouped model selection, tail-variability damping "
                 "bounds, and simulated forecasts"};
    app.require_subcommand(1);
    app.fallthrough();

    int threads = 0;
    app.add_option("--threads", threads, "worker threads (0 = library default)")
        ->capture_default_str();

    // ingest ----------------------------------------------------------------
    auto* ingest = app.add_subcommand("ingest", "aggregate trips or validate hourly counts");
    std::string in_trips, in_counts, in_out, in_time_col = "started_at",
                in_gap = "error";
    bool in_strict = false, in_validate = false;
    ingest->add_option("--trips", in_trips, "raw trip CSV with a start-time column");
    ingest->add_option("--counts", in_counts, "prepared timestamp,count CSV");
    ingest->add_option("--out", in_out, "output counts CSV path");
    ingest->add_option("--time-column", in_time_col, "start-time column name")
        ->capture_default_str();
    ingest->add_flag("--strict", in_strict, "treat malformed rows as errors");
    ingest->add_flag("--validate", in_validate, "only validate the grid; no output needed");
    ingest->add_option("--gap-policy", in_gap, "error|fill_week")->capture_default_str();
    ingest->callback([&] {
        cc::kernels::set_threads(threads);
        if (in_trips.empty() == in_counts.empty())
            throw cc::InputError("ingest needs exactly one of --trips or --counts");
        cc::CountSeries series;
        if (!in_trips.empty()) {
            cc::IngestSummary summary;
            series = cc::ingest_trips(in_trips, {in_time_col, in_strict}, summary);
            std::cout << "rows: " << summary.rows_total << " used: " << summary.rows_used
                      << " skipped: " << summary.rows_skipped << '\n';
        } else {
            series = cc::load_counts(in_counts, in_gap == "fill_week"
                                                    ? cc::GapPolicy::fill_week
                                                    : cc::GapPolicy::error);
        }
        std::cout << "series: " << series.size() << " hours, "
                  << cc::format_timestamp(series.start) << " .. "
                  << cc::format_timestamp(series.last_timestamp()) << '\n';
        if (!in_out.empty()) {
            cc::save_counts(in_out, series);
            std::cout << "wrote " << in_out << '\n';
        } else if (!in_validate && !in_trips.empty()) {
            throw cc::InputError("ingest --trips needs --out (or --validate)");
        }
    });

    // run ---------------------------------------------------------------------
    auto* run = app.add_subcommand("run", "full pipeline: select, bounds, simulate, report");
    std::string run_config_path;
    bool all_scenarios = false;
    Overrides run_over;
    run->add_option("--config", run_config_path, "key = value config file");
    run->add_flag("--all-scenarios", all_scenarios,
                  "run five scenarios x {poisson, negbin} and write comparison.csv");
    run_over.add_option(run, "--counts", "counts", "hourly counts CSV");
    run_over.add_option(run, "--scenario", "scenario", "complexity scenario preset");
    run_over.add_option(run, "--family", "family", "poisson|negbin");
    run_over.add_option(run, "--criterion", "criterion", "aic|bic");
    run_over.add_option(run, "--train-start", "train_start", "training window start");
    run_over.add_option(run, "--train-end", "train_end", "training window end");
    run_over.add_option(run, "--test-start", "test_start", "test window start");
    run_over.add_option(run, "--test-end", "test_end", "test window end");
    run_over.add_option(run, "--horizon", "horizon", "simulation hours (0 = test window)");
    run_over.add_option(run, "--n-paths", "n_paths", "Monte Carlo paths");
    run_over.add_option(run, "--seed", "seed", "master RNG seed");
    run_over.add_option(run, "--out-dir", "out_dir", "artifact directory");
    run_over.add_option(run, "--p-r", "p_r", "tail probability");
    run_over.add_option(run, "--delta-p", "delta_p", "tail quantile spacing");
    run_over.add_option(run, "--alpha", "alpha", "tail multiplier (auto = 10*p_m)");
    run_over.add_option(run, "--lag-offset", "lag_offset", "lag transform offset");
    run_over.add_option(run, "--min-bucket", "min_bucket", "minimum bucket size");
    run_over.add_option(run, "--gap-policy", "gap_policy", "error|fill_week");
    run_over.add_toggle(run, "--damping", "--no-damping", "damping", "draw damping");
    run_over.add_toggle(run, "--lag-transform", "--no-lag-transform", "lag_transform",
                        "log lag transform");
    run_over.add_toggle(run, "--clamp-zero", "--no-clamp-zero", "clamp_zero",
                        "zero lower-bound clamp");
    run_over.add_toggle(run, "--bucket-fallback", "--no-bucket-fallback", "bucket_fallback",
                        "global-bounds fallback");
    run->callback([&] {
        cc::RunConfig config =
            run_config_path.empty() ? cc::RunConfig{} : cc::parse_config(run_config_path);
        run_over.apply(config);
        if (app.count("--threads") > 0) config.threads = threads;
        cc::kernels::set_threads(config.threads);
        if (config.counts_path.empty())
            throw cc::InputError("no counts file: set counts= in the config or pass --counts");
        if (all_scenarios) {
            const auto rows = cc::run_all_scenarios(config);
            std::cout << "scenario,family,std_aic,std_bic,fit_correlation,damping_pct,"
                         "sim_correlation,mae,rmse\n";
            for (const auto& r : rows)
                std::cout << r.scenario << ',' << r.family << ','
                          << cc::format_double(r.std_aic) << ',' << cc::format_double(r.std_bic)
                          << ','
                          << (r.fit_correlation ? cc::format_double(*r.fit_correlation) : "NA")
                          << ',' << cc::format_double(r.damping_pct) << ','
                          << (r.sim_correlation ? cc::format_double(*r.sim_correlation) : "NA")
                          << ',' << cc::format_double(r.mae) << ',' << cc::format_double(r.rmse)
                          << '\n';
            std::cout << "wrote " << config.out_dir << "/comparison.csv\n";
        } else {
            const cc::PipelineResult res = cc::run_pipeline(config);
            print_trace_summary(res.selection.trace);
            print_metrics(res.metrics);
            std::cout << res.files.size() << " artifacts in " << config.out_dir << '\n';
        }
    });

    // select ------------------------------------------------------------------
    auto* select = app.add_subcommand("select", "grouped structural model selection only");
    std::string sel_counts, sel_scenario = "seas_growth_avglag_lag", sel_family = "poisson",
                sel_criterion = "bic", sel_out = "out", sel_start, sel_end;
    bool sel_no_transform = false;
    select->add_option("--counts", sel_counts, "hourly counts CSV")->required();
    select->add_option("--scenario", sel_scenario, "complexity scenario")->capture_default_str();
    select->add_option("--family", sel_family, "poisson|negbin")->capture_default_str();
    select->add_option("--criterion", sel_criterion, "aic|bic")->capture_default_str();
    select->add_option("--train-start", sel_start, "window start (default: series start)");
    select->add_option("--train-end", sel_end, "window end (default: series end)");
    select->add_flag("--no-lag-transform", sel_no_transform, "use raw counts in lag columns");
    select->add_option("--out-dir", sel_out, "artifact directory")->capture_default_str();
    select->callback([&] {
        cc::kernels::set_threads(threads);
        cc::CountSeries series = cc::load_counts(sel_counts);
        const cc::Timestamp from =
            sel_start.empty() ? series.start : cc::parse_timestamp(sel_start);
        const cc::Timestamp to =
            sel_end.empty() ? series.last_timestamp() : cc::parse_timestamp(sel_end);
        const cc::CountSeries train = series.slice(from, to);
        cc::DesignContext ctx;
        ctx.growth_origin_hour = train.start.epoch_hours();
        ctx.growth_scale_hours = static_cast<double>(train.size());
        ctx.lag_transform = !sel_no_transform;
        cc::SelectionDiagram diagram = cc::scenario(sel_scenario);
        diagram.criterion = cc::parse_criterion(sel_criterion);
        diagram.family = cc::FamilySpec{cc::parse_family(sel_family), 0.0};
        const cc::SelectionResult res = cc::run_diagram(diagram, train, ctx);
        print_trace_summary(res.trace);
        std::filesystem::create_directories(sel_out);
        cc::write_model_json((std::filesystem::path(sel_out) / "model.json").string(),
                             res.model, ctx);
        cc::write_trace_json((std::filesystem::path(sel_out) / "trace.json").string(), res.trace,
                             diagram.criterion, res.model.family);
        std::cout << "wrote " << sel_out << "/model.json, " << sel_out << "/trace.json\n";
    });

    // simulate ------------------------------------------------------------------
    auto* simulate = app.add_subcommand("simulate", "simulate forecasts from a saved model");
    std::string sim_model, sim_counts, sim_bounds, sim_out = "out";
    std::int64_t sim_horizon = 168;
    int sim_paths = 100;
    std::uint64_t sim_seed = 1;
    bool sim_no_damping = false;
    simulate->add_option("--model", sim_model, "model.json from select/run")->required();
    simulate->add_option("--counts", sim_counts, "observed history CSV")->required();
    simulate->add_option("--bounds", sim_bounds, "bounds.csv with damping limits");
    simulate->add_flag("--no-damping", sim_no_damping, "simulate without damping");
    simulate->add_option("--horizon", sim_horizon, "hours to simulate")->capture_default_str();
    simulate->add_option("--n-paths", sim_paths, "Monte Carlo paths")->capture_default_str();
    simulate->add_option("--seed", sim_seed, "master RNG seed")->capture_default_str();
    simulate->add_option("--out-dir", sim_out, "artifact directory")->capture_default_str();
    simulate->callback([&] {
        cc::kernels::set_threads(threads);
        if (sim_bounds.empty() && !sim_no_damping)
            throw cc::InputError("simulate needs --bounds (or explicit --no-damping)");
        const auto [model, ctx] = cc::load_model_json(sim_model);
        const cc::CountSeries tail = cc::load_counts(sim_counts);
        cc::SimulationConfig config;
        config.horizon = sim_horizon;
        config.n_paths = sim_paths;
        config.seed = sim_seed;
        config.damping_enabled = !sim_no_damping;
        if (!sim_bounds.empty()) config.bounds = cc::load_bounds_csv(sim_bounds);
        const cc::EnsembleResult ens = cc::simulate_ensemble(model, tail, ctx, config);
        std::filesystem::create_directories(sim_out);
        cc::write_paths_csv((std::filesystem::path(sim_out) / "paths.csv").string(), ens);
        long long overflows = 0;
        for (const auto& p : ens.paths) overflows += p.overflow_events;
        std::cout << "damping rate " << cc::format_double(ens.damping_rate * 100.0)
                  << "%, overflow events " << overflows << '\n';
        if (ens.damping_warning) std::cout << "warning: damping rate above 20%\n";
        std::cout << "wrote " << sim_out << "/paths.csv\n";
    });

    // bounds ----------------------------------------------------------------------
    auto* boundscmd = app.add_subcommand("bounds", "hour-of-week damping bounds from counts");
    std::string b_counts, b_out = "out", b_start, b_end, b_alpha = "2.5";
    double b_pr = 0.025, b_dp = 0.075;
    bool b_no_clamp = false, b_fallback = false;
    std::size_t b_min = 30;
    boundscmd->add_option("--counts", b_counts, "hourly counts CSV")->required();
    boundscmd->add_option("--train-start", b_start, "window start (default: series start)");
    boundscmd->add_option("--train-end", b_end, "window end (default: series end)");
    boundscmd->add_option("--p-r", b_pr, "tail probability")->capture_default_str();
    boundscmd->add_option("--delta-p", b_dp, "tail quantile spacing")->capture_default_str();
    boundscmd->add_option("--alpha", b_alpha, "tail multiplier (auto = 10*p_m)")
        ->capture_default_str();
    boundscmd->add_flag("--no-clamp-zero", b_no_clamp, "allow negative lower bounds");
    boundscmd->add_option("--min-bucket", b_min, "minimum bucket size")->capture_default_str();
    boundscmd->add_flag("--bucket-fallback", b_fallback, "pooled bounds for small buckets");
    boundscmd->add_option("--out-dir", b_out, "artifact directory")->capture_default_str();
    boundscmd->callback([&] {
        cc::kernels::set_threads(threads);
        cc::CountSeries series = cc::load_counts(b_counts);
        const cc::Timestamp from = b_start.empty() ? series.start : cc::parse_timestamp(b_start);
        const cc::Timestamp to =
            b_end.empty() ? series.last_timestamp() : cc::parse_timestamp(b_end);
        cc::TailParams params;
        params.p_r = b_pr;
        params.delta_p = b_dp;
        params.alpha = b_alpha == "auto" ? -1.0 : std::stod(b_alpha);
        params.clamp_lower_at_zero = !b_no_clamp;
        const cc::TimeVaryingOptions options{b_min, b_fallback};
        const cc::DampingBounds bounds =
            cc::time_varying_bounds(series.slice(from, to), params, options);
        std::filesystem::create_directories(b_out);
        cc::write_bounds_csv((std::filesystem::path(b_out) / "bounds.csv").string(), bounds);
        cc::write_bounds_meta_json(
            (std::filesystem::path(b_out) / "bounds_meta.json").string(), bounds, options);
        std::cout << "global bounds [" << cc::format_double(bounds.global.m) << ", "
                  << cc::format_double(bounds.global.M) << "]\n";
        std::cout << "wrote " << b_out << "/bounds.csv, " << b_out << "/bounds_meta.json\n";
    });

    // report ---------------------------------------------------------------------
    auto* report = app.add_subcommand("report", "plot-data CSVs from saved counts");
    std::string r_counts, r_out = "out";
    report->add_option("--counts", r_counts, "hourly counts CSV")->required();
    report->add_option("--out-dir", r_out, "artifact directory")->capture_default_str();
    report->callback([&] {
        cc::kernels::set_threads(threads);
        const cc::CountSeries series = cc::load_counts(r_counts);
        std::filesystem::create_directories(r_out);
        const std::filesystem::path dir(r_out);
        std::vector<std::string> written;
        try {
            cc::write_profile_csv((dir / "profile.csv").string(),
                                  {{"observed", cc::hour_of_week_profile(series)}});
            written.push_back("profile.csv");
        } catch (const cc::InputError&) {
            std::cout << "profile.csv skipped: series shorter than two weeks per bucket\n";
        }
        cc::write_period_csv((dir / "weekly_averages.csv").string(),
                             cc::periodic_averages(series, cc::Period::weekly));
        written.push_back("weekly_averages.csv");
        cc::write_period_csv((dir / "annual_averages.csv").string(),
                             cc::periodic_averages(series, cc::Period::annual));
        written.push_back("annual_averages.csv");
        for (const auto& f : written) std::cout << "wrote " << r_out << '/' << f << '\n';
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const cc::ExplosivePathError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const cc::ModelError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const cc::InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
