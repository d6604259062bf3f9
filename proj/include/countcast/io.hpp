#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "countcast/bounds.hpp"
#include "countcast/glm.hpp"
#include "countcast/metrics.hpp"
#include "countcast/select.hpp"
#include "countcast/series.hpp"
#include "countcast/simulate.hpp"

namespace countcast {

// ---------------------------------------------------------------------------
// counts ingestion
// ---------------------------------------------------------------------------

struct IngestOptions {
    std::string time_column = "started_at";
    bool strict = false;  // strict: malformed row is an error; lenient: skip and count
};

struct IngestSummary {
    std::int64_t rows_total = 0;
    std::int64_t rows_used = 0;
    std::int64_t rows_skipped = 0;
};

// Aggregates a raw trip log (CSV with a start-time column) into hourly
// counts spanning the full observed range; hours without trips are 0.
CountSeries ingest_trips(const std::string& path, const IngestOptions& options,
                         IngestSummary& summary);

enum class GapPolicy { error, fill_week };

// Loads a `timestamp,count` CSV on a strict ascending hourly grid. Gaps are
// an error by default, or filled from the value 168 hours earlier.
CountSeries load_counts(const std::string& path, GapPolicy policy = GapPolicy::error);

void save_counts(const std::string& path, const CountSeries& series);

// ---------------------------------------------------------------------------
// run configuration
// ---------------------------------------------------------------------------

struct RunConfig {
    std::string counts_path;
    Family family = Family::poisson;
    Criterion criterion = Criterion::bic;
    std::string scenario_name = "seas_growth_avglag_lag";
    std::map<std::string, SearchStrategy> strategy_overrides;  // group name -> strategy
    bool lag_transform = true;
    double lag_offset = 0.1;
    bool damping = true;
    TailParams tail = TailParams::paper_defaults();
    std::size_t min_bucket = 30;
    bool bucket_fallback = false;
    Timestamp train_start;
    Timestamp train_end;
    Timestamp test_start;
    Timestamp test_end;
    std::int64_t horizon = 0;  // 0: simulate the whole test window
    int n_paths = 100;
    std::uint64_t seed = 1;
    std::string out_dir;  // default: $COUNTCAST_OUT_DIR or "out"
    int threads = 0;      // 0: library default
    GapPolicy gap_policy = GapPolicy::error;

    RunConfig();  // fills the split defaults and the environment out_dir
};

struct ConfigKey {
    std::string name;
    std::string type;
    std::string default_value;
    std::string help;
};

// Published schema of the flat key=value config file.
const std::vector<ConfigKey>& config_schema();

// Parses `key = value` lines ('#' comments, blank lines ignored). Unknown
// keys are errors.
RunConfig parse_config(const std::string& path);

// Applies one schema key to a config; shared by the parser and CLI flags.
void apply_config_value(RunConfig& config, const std::string& key, const std::string& value);

// ---------------------------------------------------------------------------
// artifact emission
// ---------------------------------------------------------------------------

// Shortest decimal representation that round-trips to the same double.
std::string format_double(double v);

struct ScenarioMetrics {
    std::string scenario;
    std::string family;
    double std_aic = 0.0;
    double std_bic = 0.0;
    std::optional<double> fit_correlation;
    double damping_pct = 0.0;
    std::optional<double> sim_correlation;
    double mae = 0.0;
    double rmse = 0.0;
};

struct MetricsReport {
    ScenarioMetrics row;
    EvaluationReport ensemble_vs_observed;
    MeanSd per_path_mae;
    MeanSd per_path_rmse;
    MeanSd per_path_correlation;  // over paths with defined correlation
    long long overflow_events = 0;
    bool damping_warning = false;
};

void write_model_json(const std::string& path, const FittedModel& model,
                      const DesignContext& context);
std::pair<FittedModel, DesignContext> load_model_json(const std::string& path);

void write_trace_json(const std::string& path, const SelectionTrace& trace,
                      Criterion criterion, const FamilySpec& family);

void write_bounds_csv(const std::string& path, const DampingBounds& bounds);
DampingBounds load_bounds_csv(const std::string& path);
void write_bounds_meta_json(const std::string& path, const DampingBounds& bounds,
                            const TimeVaryingOptions& options);

void write_paths_csv(const std::string& path, const EnsembleResult& ensemble);

void write_metrics_json(const std::string& path, const MetricsReport& report);
// Header + one row per entry: scenario,family,std_aic,std_bic,
// fit_correlation,damping_pct,sim_correlation,mae,rmse
void write_metrics_csv(const std::string& path, const std::vector<ScenarioMetrics>& rows);

struct ProfileColumn {
    std::string label;  // column prefix, e.g. "train", "test", "sim"
    std::array<ProfileEntry, 168> entries;
};
void write_profile_csv(const std::string& path, const std::vector<ProfileColumn>& columns);

void write_period_csv(const std::string& path, const std::vector<PeriodAverage>& averages);

// Writes manifest.json listing the emitted files plus reproducibility
// metadata (seed, RNG stream name, config echo). Returns the file list.
std::vector<std::string> write_manifest(const std::string& out_dir,
                                        const std::vector<std::string>& files,
                                        const RunConfig& config);

}  // namespace countcast
