#include "countcast/io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "countcast/errors.hpp"

namespace countcast {

using nlohmann::json;

// ---------------------------------------------------------------------------
// CountSeries basics
// ---------------------------------------------------------------------------

CountSeries CountSeries::slice(Timestamp from, Timestamp to) const {
    if (empty()) throw InputError("slice of an empty series");
    if (from < start || to > last_timestamp() || from > to)
        throw InputError("slice [" + format_timestamp(from) + ", " + format_timestamp(to) +
                         "] outside series [" + format_timestamp(start) + ", " +
                         format_timestamp(last_timestamp()) + "]");
    CountSeries out;
    out.start = from;
    const auto lo = static_cast<std::size_t>(from - start);
    const auto hi = static_cast<std::size_t>(to - start);
    out.values.assign(values.begin() + static_cast<std::ptrdiff_t>(lo),
                      values.begin() + static_cast<std::ptrdiff_t>(hi) + 1);
    return out;
}

void CountSeries::validate() const {
    if (empty()) throw InputError("count series is empty");
    for (std::size_t i = 0; i < values.size(); ++i)
        if (values[i] < 0)
            throw InputError("negative count at " +
                             format_timestamp(timestamp_at(static_cast<std::int64_t>(i))));
}

// ---------------------------------------------------------------------------
// CSV plumbing
// ---------------------------------------------------------------------------

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (quoted) {
            if (ch == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += ch;
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            out.push_back(std::move(cur));
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    out.push_back(std::move(cur));
    return out;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open \"" + path + "\" for reading");
    return in;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot open \"" + path + "\" for writing");
    return out;
}

long long parse_count(const std::string& text, const std::string& where) {
    long long v = 0;
    const char* first = text.data();
    const char* last = first + text.size();
    auto [p, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || p != last)
        throw InputError("bad count \"" + text + "\" " + where);
    if (v < 0) throw InputError("negative count \"" + text + "\" " + where);
    return v;
}

}  // namespace

// ---------------------------------------------------------------------------
// ingestion
// ---------------------------------------------------------------------------

CountSeries ingest_trips(const std::string& path, const IngestOptions& options,
                         IngestSummary& summary) {
    std::ifstream in = open_input(path);
    std::string line;
    if (!std::getline(in, line)) throw InputError("trip file \"" + path + "\" is empty");

    const std::vector<std::string> header = split_csv_line(line);
    std::size_t col = header.size();
    for (std::size_t i = 0; i < header.size(); ++i)
        if (trim(header[i]) == options.time_column) col = i;
    if (col == header.size())
        throw InputError("trip file has no \"" + options.time_column + "\" column");

    summary = IngestSummary{};
    std::vector<std::int64_t> hours;
    std::int64_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        ++summary.rows_total;
        try {
            const std::vector<std::string> fields = split_csv_line(line);
            if (col >= fields.size())
                throw InputError("row has " + std::to_string(fields.size()) + " fields");
            hours.push_back(parse_event_time(trim(fields[col])).epoch_hours());
            ++summary.rows_used;
        } catch (const InputError& e) {
            if (options.strict)
                throw InputError("line " + std::to_string(line_no) + ": " + e.what());
            ++summary.rows_skipped;
        }
    }
    if (hours.empty()) throw InputError("trip file \"" + path + "\" has no parseable rows");

    const auto [lo_it, hi_it] = std::minmax_element(hours.begin(), hours.end());
    const std::int64_t lo = *lo_it, hi = *hi_it;

    CountSeries series;
    series.start = Timestamp(lo);
    series.values.assign(static_cast<std::size_t>(hi - lo + 1), 0);
    for (std::int64_t h : hours) ++series.values[static_cast<std::size_t>(h - lo)];
    return series;
}

CountSeries load_counts(const std::string& path, GapPolicy policy) {
    std::ifstream in = open_input(path);
    CountSeries series;
    std::string line;
    std::int64_t line_no = 0;
    bool first_row = true;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;
        if (first_row && stripped == "timestamp,count") {
            first_row = false;
            continue;
        }
        first_row = false;
        const std::vector<std::string> fields = split_csv_line(stripped);
        if (fields.size() != 2)
            throw InputError("line " + std::to_string(line_no) + ": expected timestamp,count");
        Timestamp ts;
        try {
            ts = parse_timestamp(trim(fields[0]));
        } catch (const InputError& e) {
            throw InputError("line " + std::to_string(line_no) + ": " + e.what());
        }
        const long long count =
            parse_count(trim(fields[1]), "on line " + std::to_string(line_no));

        if (series.values.empty()) {
            series.start = ts;
            series.values.push_back(count);
            continue;
        }
        Timestamp expected = series.start + static_cast<std::int64_t>(series.values.size());
        if (ts < expected)
            throw InputError("duplicate or unsorted timestamp " + format_timestamp(ts) +
                             " on line " + std::to_string(line_no));
        while (expected < ts) {
            if (policy == GapPolicy::error)
                throw InputError("gap in counts: missing hour " + format_timestamp(expected));
            const std::int64_t back = expected - series.start - 168;
            if (back < 0)
                throw InputError("cannot week-fill " + format_timestamp(expected) +
                                 ": series starts less than 168 hours earlier");
            series.values.push_back(series.values[static_cast<std::size_t>(back)]);
            expected = expected + 1;
        }
        series.values.push_back(count);
    }
    series.validate();
    return series;
}

void save_counts(const std::string& path, const CountSeries& series) {
    series.validate();
    std::ofstream out = open_output(path);
    out << "timestamp,count\n";
    for (std::size_t i = 0; i < series.values.size(); ++i)
        out << format_timestamp(series.timestamp_at(static_cast<std::int64_t>(i))) << ','
            << series.values[i] << '\n';
    if (!out) throw InputError("failed writing \"" + path + "\"");
}

// ---------------------------------------------------------------------------
// configuration
// ---------------------------------------------------------------------------

RunConfig::RunConfig() {
    train_start = Timestamp::from_civil(2011, 1, 1, 0);
    train_end = Timestamp::from_civil(2015, 12, 31, 23);
    test_start = Timestamp::from_civil(2016, 1, 1, 0);
    test_end = Timestamp::from_civil(2018, 12, 31, 23);
    const char* env = std::getenv("COUNTCAST_OUT_DIR");
    out_dir = env && *env ? env : "out";
}

namespace {

const std::vector<std::string>& group_names() {
    static const std::vector<std::string> names = {"tod",    "tod_wd", "tow",   "toy",
                                                   "growth", "lags",   "avglag"};
    return names;
}

bool parse_bool(const std::string& v, const std::string& key) {
    if (v == "true") return true;
    if (v == "false") return false;
    throw InputError("config key " + key + ": expected true or false, got \"" + v + "\"");
}

template <typename T>
T parse_integer(const std::string& v, const std::string& key) {
    T out{};
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || p != v.data() + v.size())
        throw InputError("config key " + key + ": bad integer \"" + v + "\"");
    return out;
}

double parse_real(const std::string& v, const std::string& key) {
    try {
        std::size_t pos = 0;
        const double out = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return out;
    } catch (const std::exception&) {
        throw InputError("config key " + key + ": bad number \"" + v + "\"");
    }
}

std::string gap_policy_name(GapPolicy p) {
    return p == GapPolicy::error ? "error" : "fill_week";
}

GapPolicy parse_gap_policy(const std::string& v) {
    if (v == "error") return GapPolicy::error;
    if (v == "fill_week") return GapPolicy::fill_week;
    throw InputError("config key gap_policy: expected error or fill_week, got \"" + v + "\"");
}

}  // namespace

const std::vector<ConfigKey>& config_schema() {
    static const std::vector<ConfigKey> schema = [] {
        std::vector<ConfigKey> s = {
            {"counts", "path", "", "hourly counts CSV (timestamp,count)"},
            {"family", "poisson|negbin", "poisson", "response family"},
            {"criterion", "aic|bic", "bic", "model selection criterion"},
            {"scenario", "name", "seas_growth_avglag_lag", "complexity scenario preset"},
            {"lag_transform", "bool", "true", "apply log(offset + y) to lag covariates"},
            {"lag_offset", "real", "0.1", "offset inside the lag transform"},
            {"damping", "bool", "true", "damp simulated draws into hour-of-week bounds"},
            {"p_r", "real", "0.025", "tail probability for the quantile fences"},
            {"delta_p", "real", "0.075", "quantile spacing for tail variability"},
            {"alpha", "real|auto", "2.5", "tail-variability multiplier (auto = 10*p_m)"},
            {"clamp_zero", "bool", "true", "clamp the lower bound at zero"},
            {"min_bucket", "int", "30", "minimum observations per hour-of-week bucket"},
            {"bucket_fallback", "bool", "false", "use pooled bounds for undersized buckets"},
            {"train_start", "timestamp", "2011-01-01T00:00", "training window start"},
            {"train_end", "timestamp", "2015-12-31T23:00", "training window end"},
            {"test_start", "timestamp", "2016-01-01T00:00", "test window start"},
            {"test_end", "timestamp", "2018-12-31T23:00", "test window end"},
            {"horizon", "int", "0", "simulation hours (0 = whole test window)"},
            {"n_paths", "int", "100", "Monte Carlo paths"},
            {"seed", "uint64", "1", "master RNG seed"},
            {"out_dir", "path", "$COUNTCAST_OUT_DIR or out", "artifact directory"},
            {"threads", "int", "0", "worker threads (0 = library default)"},
            {"gap_policy", "error|fill_week", "error", "missing-hour handling"},
        };
        for (const auto& g : group_names())
            s.push_back({"strategy." + g, "exhaustive|nested_prefix|single_or_none", "",
                         "search strategy override for group " + g});
        return s;
    }();
    return schema;
}

void apply_config_value(RunConfig& config, const std::string& key, const std::string& value) {
    if (key == "counts") config.counts_path = value;
    else if (key == "family") config.family = parse_family(value);
    else if (key == "criterion") config.criterion = parse_criterion(value);
    else if (key == "scenario") {
        scenario(value);  // reject unknown names early
        config.scenario_name = value;
    } else if (key == "lag_transform") config.lag_transform = parse_bool(value, key);
    else if (key == "lag_offset") config.lag_offset = parse_real(value, key);
    else if (key == "damping") config.damping = parse_bool(value, key);
    else if (key == "p_r") config.tail.p_r = parse_real(value, key);
    else if (key == "delta_p") config.tail.delta_p = parse_real(value, key);
    else if (key == "alpha") config.tail.alpha = value == "auto" ? -1.0 : parse_real(value, key);
    else if (key == "clamp_zero") config.tail.clamp_lower_at_zero = parse_bool(value, key);
    else if (key == "min_bucket") config.min_bucket = parse_integer<std::size_t>(value, key);
    else if (key == "bucket_fallback") config.bucket_fallback = parse_bool(value, key);
    else if (key == "train_start") config.train_start = parse_timestamp(value);
    else if (key == "train_end") config.train_end = parse_timestamp(value);
    else if (key == "test_start") config.test_start = parse_timestamp(value);
    else if (key == "test_end") config.test_end = parse_timestamp(value);
    else if (key == "horizon") config.horizon = parse_integer<std::int64_t>(value, key);
    else if (key == "n_paths") config.n_paths = parse_integer<int>(value, key);
    else if (key == "seed") config.seed = parse_integer<std::uint64_t>(value, key);
    else if (key == "out_dir") config.out_dir = value;
    else if (key == "threads") config.threads = parse_integer<int>(value, key);
    else if (key == "gap_policy") config.gap_policy = parse_gap_policy(value);
    else if (key.rfind("strategy.", 0) == 0) {
        const std::string group = key.substr(9);
        if (std::find(group_names().begin(), group_names().end(), group) == group_names().end())
            throw InputError("unknown covariate group in config key \"" + key + "\"");
        config.strategy_overrides[group] = parse_strategy(value);
    } else {
        throw InputError("unknown config key \"" + key + "\"");
    }
}

RunConfig parse_config(const std::string& path) {
    std::ifstream in = open_input(path);
    RunConfig config;
    std::string line;
    std::int64_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw InputError("config line " + std::to_string(line_no) +
                             ": expected key = value");
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty())
            throw InputError("config line " + std::to_string(line_no) + ": empty key");
        try {
            apply_config_value(config, key, value);
        } catch (const InputError& e) {
            throw InputError("config line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return config;
}

// ---------------------------------------------------------------------------
// emission
// ---------------------------------------------------------------------------

std::string format_double(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, p);
}

namespace {

json context_to_json(const DesignContext& ctx) {
    return json{{"growth_origin_hour", ctx.growth_origin_hour},
                {"growth_scale_hours", ctx.growth_scale_hours},
                {"lag_transform", ctx.lag_transform},
                {"lag_transform_offset", ctx.lag_transform_offset}};
}

void dump_json(const std::string& path, const json& j) {
    std::ofstream out = open_output(path);
    out << j.dump(2) << '\n';
    if (!out) throw InputError("failed writing \"" + path + "\"");
}

json load_json(const std::string& path) {
    std::ifstream in = open_input(path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw InputError("bad JSON in \"" + path + "\": " + e.what());
    }
    return j;
}

std::string opt_csv(const std::optional<double>& v) {
    return v ? format_double(*v) : "NA";
}

json opt_json(const std::optional<double>& v) {
    return v ? json(*v) : json(nullptr);
}

}  // namespace

void write_model_json(const std::string& path, const FittedModel& model,
                      const DesignContext& context) {
    json j;
    j["family"] = family_name(model.family.family);
    j["theta"] = model.family.theta;
    j["columns"] = model.column_names;
    j["dropped_columns"] = model.dropped_columns;
    std::vector<double> beta(model.beta.data(), model.beta.data() + model.beta.size());
    j["beta"] = beta;
    j["log_lik"] = model.log_lik;
    j["n_obs"] = model.n_obs;
    j["n_params"] = model.n_params;
    j["converged"] = model.converged;
    j["iterations"] = model.iterations;
    j["context"] = context_to_json(context);
    dump_json(path, j);
}

std::pair<FittedModel, DesignContext> load_model_json(const std::string& path) {
    const json j = load_json(path);
    try {
        FittedModel model;
        model.family.family = parse_family(j.at("family").get<std::string>());
        model.family.theta = j.at("theta").get<double>();
        model.column_names = j.at("columns").get<std::vector<std::string>>();
        model.dropped_columns = j.at("dropped_columns").get<std::vector<std::string>>();
        const auto beta = j.at("beta").get<std::vector<double>>();
        if (beta.size() != model.column_names.size())
            throw InputError("beta length does not match columns in \"" + path + "\"");
        model.beta = Eigen::Map<const Eigen::VectorXd>(beta.data(),
                                                       static_cast<Eigen::Index>(beta.size()));
        model.log_lik = j.at("log_lik").get<double>();
        model.n_obs = j.at("n_obs").get<std::int64_t>();
        model.n_params = j.at("n_params").get<int>();
        model.converged = j.at("converged").get<bool>();
        model.iterations = j.at("iterations").get<int>();
        const json& c = j.at("context");
        DesignContext ctx;
        ctx.growth_origin_hour = c.at("growth_origin_hour").get<std::int64_t>();
        ctx.growth_scale_hours = c.at("growth_scale_hours").get<double>();
        ctx.lag_transform = c.at("lag_transform").get<bool>();
        ctx.lag_transform_offset = c.at("lag_transform_offset").get<double>();
        return {std::move(model), ctx};
    } catch (const json::exception& e) {
        throw InputError("bad model file \"" + path + "\": " + e.what());
    }
}

void write_trace_json(const std::string& path, const SelectionTrace& trace,
                      Criterion criterion, const FamilySpec& family) {
    json nodes = json::array();
    for (const auto& node : trace.nodes) {
        json cands = json::array();
        for (const auto& c : node.candidates)
            cands.push_back(json{{"subset", c.subset},
                                 {"criterion", c.converged ? json(c.criterion) : json(nullptr)},
                                 {"converged", c.converged}});
        nodes.push_back(json{{"group", node.group},
                             {"candidates", std::move(cands)},
                             {"chosen", node.chosen},
                             {"criterion_after", node.criterion_after}});
    }
    json j{{"criterion", criterion_name(criterion)},
           {"family", family_name(family.family)},
           {"nodes", std::move(nodes)},
           {"final_columns", trace.final_columns},
           {"final_criterion", trace.final_criterion}};
    dump_json(path, j);
}

void write_bounds_csv(const std::string& path, const DampingBounds& bounds) {
    std::ofstream out = open_output(path);
    out << "hour_of_week,m,M\n";
    for (int h = 0; h < 168; ++h)
        out << h << ',' << format_double(bounds.m[static_cast<std::size_t>(h)]) << ','
            << format_double(bounds.M[static_cast<std::size_t>(h)]) << '\n';
    if (!out) throw InputError("failed writing \"" + path + "\"");
}

DampingBounds load_bounds_csv(const std::string& path) {
    std::ifstream in = open_input(path);
    DampingBounds bounds;
    std::string line;
    if (!std::getline(in, line) || trim(line) != "hour_of_week,m,M")
        throw InputError("bounds file \"" + path + "\" must start with hour_of_week,m,M");
    int rows = 0;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        const auto fields = split_csv_line(trim(line));
        if (fields.size() != 3)
            throw InputError("bounds file \"" + path + "\": expected 3 fields per row");
        const int h = static_cast<int>(parse_integer<long long>(fields[0], "hour_of_week"));
        if (h < 0 || h > 167)
            throw InputError("bounds file \"" + path + "\": hour_of_week out of range");
        bounds.m[static_cast<std::size_t>(h)] = parse_real(fields[1], "m");
        bounds.M[static_cast<std::size_t>(h)] = parse_real(fields[2], "M");
        ++rows;
    }
    if (rows != 168)
        throw InputError("bounds file \"" + path + "\" has " + std::to_string(rows) +
                         " rows; expected 168");
    for (std::size_t h = 0; h < 168; ++h)
        if (bounds.m[h] > bounds.M[h])
            throw InputError("bounds file \"" + path + "\": m > M at hour " + std::to_string(h));
    return bounds;
}

void write_bounds_meta_json(const std::string& path, const DampingBounds& bounds,
                            const TimeVaryingOptions& options) {
    const TailParams& p = bounds.params;
    json j{{"p_r", p.p_r},
           {"p_l", p.p_l()},
           {"delta_p", p.delta_p},
           {"p_m", p.p_m()},
           {"p_M", p.p_M()},
           {"alpha", p.resolved_alpha()},
           {"clamp_lower_at_zero", p.clamp_lower_at_zero},
           {"global", json{{"m", bounds.global.m}, {"M", bounds.global.M}}},
           {"min_bucket_size", options.min_bucket_size},
           {"fallback_to_global", options.fallback_to_global}};
    dump_json(path, j);
}

void write_paths_csv(const std::string& path, const EnsembleResult& ensemble) {
    std::ofstream out = open_output(path);
    out << "timestamp,path_index,value,damped_low,damped_high\n";
    for (std::size_t k = 0; k < ensemble.paths.size(); ++k) {
        const SimulatedPath& p = ensemble.paths[k];
        for (std::size_t t = 0; t < p.values.size(); ++t)
            out << format_timestamp(ensemble.start + static_cast<std::int64_t>(t)) << ',' << k
                << ',' << p.values[t] << ',' << int(p.damped_low[t]) << ','
                << int(p.damped_high[t]) << '\n';
    }
    if (!out) throw InputError("failed writing \"" + path + "\"");
}

void write_metrics_json(const std::string& path, const MetricsReport& report) {
    json j{{"scenario", report.row.scenario},
           {"family", report.row.family},
           {"std_aic", report.row.std_aic},
           {"std_bic", report.row.std_bic},
           {"fit_correlation", opt_json(report.row.fit_correlation)},
           {"damping_pct", report.row.damping_pct},
           {"sim_correlation", opt_json(report.row.sim_correlation)},
           {"mae", report.row.mae},
           {"rmse", report.row.rmse},
           {"ensemble",
            json{{"mae", report.ensemble_vs_observed.mae},
                 {"rmse", report.ensemble_vs_observed.rmse},
                 {"correlation", opt_json(report.ensemble_vs_observed.correlation)},
                 {"n_compared", report.ensemble_vs_observed.n_compared}}},
           {"per_path",
            json{{"mae", json{{"mean", report.per_path_mae.mean}, {"sd", report.per_path_mae.sd}}},
                 {"rmse",
                  json{{"mean", report.per_path_rmse.mean}, {"sd", report.per_path_rmse.sd}}},
                 {"correlation", json{{"mean", report.per_path_correlation.mean},
                                      {"sd", report.per_path_correlation.sd}}}}},
           {"overflow_events", report.overflow_events},
           {"damping_warning", report.damping_warning}};
    dump_json(path, j);
}

void write_metrics_csv(const std::string& path, const std::vector<ScenarioMetrics>& rows) {
    std::ofstream out = open_output(path);
    out << "scenario,family,std_aic,std_bic,fit_correlation,damping_pct,sim_correlation,mae,"
           "rmse\n";
    for (const auto& r : rows)
        out << r.scenario << ',' << r.family << ',' << format_double(r.std_aic) << ','
            << format_double(r.std_bic) << ',' << opt_csv(r.fit_correlation) << ','
            << format_double(r.damping_pct) << ',' << opt_csv(r.sim_correlation) << ','
            << format_double(r.mae) << ',' << format_double(r.rmse) << '\n';
    if (!out) throw InputError("failed writing \"" + path + "\"");
}

void write_profile_csv(const std::string& path, const std::vector<ProfileColumn>& columns) {
    std::ofstream out = open_output(path);
    out << "hour_of_week";
    for (const auto& c : columns) out << ',' << c.label << "_mean," << c.label << "_sd";
    out << '\n';
    for (std::size_t h = 0; h < 168; ++h) {
        out << h;
        for (const auto& c : columns)
            out << ',' << format_double(c.entries[h].mean) << ','
                << format_double(c.entries[h].sd);
        out << '\n';
    }
    if (!out) throw InputError("failed writing \"" + path + "\"");
}

void write_period_csv(const std::string& path, const std::vector<PeriodAverage>& averages) {
    std::ofstream out = open_output(path);
    out << "period_start,mean,n_hours,partial\n";
    for (const auto& a : averages)
        out << format_timestamp(a.period_start) << ',' << format_double(a.mean) << ','
            << a.n_hours << ',' << (a.partial ? 1 : 0) << '\n';
    if (!out) throw InputError("failed writing \"" + path + "\"");
}

std::vector<std::string> write_manifest(const std::string& out_dir,
                                        const std::vector<std::string>& files,
                                        const RunConfig& config) {
    std::vector<std::string> sorted = files;
    std::sort(sorted.begin(), sorted.end());

    json cfg{{"counts", config.counts_path},
             {"family", family_name(config.family)},
             {"criterion", criterion_name(config.criterion)},
             {"scenario", config.scenario_name},
             {"lag_transform", config.lag_transform},
             {"lag_offset", config.lag_offset},
             {"damping", config.damping},
             {"p_r", config.tail.p_r},
             {"delta_p", config.tail.delta_p},
             {"alpha", config.tail.resolved_alpha()},
             {"clamp_zero", config.tail.clamp_lower_at_zero},
             {"min_bucket", config.min_bucket},
             {"bucket_fallback", config.bucket_fallback},
             {"train_start", format_timestamp(config.train_start)},
             {"train_end", format_timestamp(config.train_end)},
             {"test_start", format_timestamp(config.test_start)},
             {"test_end", format_timestamp(config.test_end)},
             {"horizon", config.horizon},
             {"n_paths", config.n_paths},
             {"seed", config.seed},
             {"gap_policy", gap_policy_name(config.gap_policy)}};
    for (const auto& [group, strat] : config.strategy_overrides)
        cfg["strategy." + group] = strategy_name(strat);

    json j{{"tool", "countcast"},
           {"rng_stream", "xoshiro256ss/splitmix64"},
           {"files", sorted},
           {"config", cfg}};
    dump_json((std::filesystem::path(out_dir) / "manifest.json").string(), j);
    sorted.push_back("manifest.json");
    std::sort(sorted.begin(), sorted.end());
    return sorted;
}

}  // namespace countcast
