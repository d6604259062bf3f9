#include "countcast/design.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <unordered_map>
#include <unordered_set>

#include "countcast/errors.hpp"

namespace countcast {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double fourier_value(const CalendarFields& f, FourierScale scale, int order, bool sin_part) {
    double angle;
    switch (scale) {
        case FourierScale::daily:
            angle = order * (kTwoPi / 24.0) * f.d;
            break;
        case FourierScale::weekend_daily:
            if (!f.is_weekend) return 0.0;
            angle = order * (kTwoPi / 24.0) * f.d;
            break;
        case FourierScale::weekly:
            angle = order * (kTwoPi / 7.0) * f.w;
            break;
        case FourierScale::annual:
            angle = order * (kTwoPi / f.year_length) * f.a;
            break;
        default:
            return 0.0;
    }
    return sin_part ? std::sin(angle) : std::cos(angle);
}

double growth_value(double t_index, GrowthKind kind, double scale_hours) {
    double x = t_index / scale_hours;
    switch (kind) {
        case GrowthKind::linear: return x;
        case GrowthKind::quadratic: return x * x;
        case GrowthKind::cubic: return x * x * x;
        case GrowthKind::sqrt: return std::sqrt(x);
        case GrowthKind::cbrt: return std::cbrt(x);
    }
    return 0.0;
}

const char* growth_suffix(GrowthKind k) {
    switch (k) {
        case GrowthKind::linear: return "t";
        case GrowthKind::quadratic: return "t2";
        case GrowthKind::cubic: return "t3";
        case GrowthKind::sqrt: return "sqrt";
        case GrowthKind::cbrt: return "cbrt";
    }
    return "";
}

constexpr int kMaxFourierOrder = 10;
constexpr int kMaxLag = 10;
const int kAvgLagWindows[] = {5, 10, 15, 24, 48};
const GrowthKind kGrowthKinds[] = {GrowthKind::linear, GrowthKind::quadratic, GrowthKind::cubic,
                                   GrowthKind::sqrt, GrowthKind::cbrt};

struct ParsedColumn {
    enum class Kind { intercept, fourier, growth, lag, avglag } kind;
    FourierScale scale = FourierScale::daily;
    bool sin_part = false;
    int order = 0;  // fourier order, lag order, or averaging window
    GrowthKind growth = GrowthKind::linear;
};

struct Catalog {
    std::vector<std::string> names;
    std::unordered_map<std::string, ParsedColumn> by_name;
};

const Catalog& catalog() {
    static const Catalog cat = [] {
        Catalog c;
        auto add = [&c](const std::string& name, ParsedColumn pc) {
            c.names.push_back(name);
            c.by_name.emplace(name, pc);
        };
        add("intercept", {ParsedColumn::Kind::intercept, {}, false, 0, {}});
        const std::pair<const char*, FourierScale> scales[] = {
            {"tod", FourierScale::daily},
            {"todwd", FourierScale::weekend_daily},
            {"tow", FourierScale::weekly},
            {"toy", FourierScale::annual},
        };
        for (auto [prefix, scale] : scales)
            for (int k = 1; k <= kMaxFourierOrder; ++k) {
                add(std::string(prefix) + "_s" + std::to_string(k),
                    {ParsedColumn::Kind::fourier, scale, true, k, {}});
                add(std::string(prefix) + "_c" + std::to_string(k),
                    {ParsedColumn::Kind::fourier, scale, false, k, {}});
            }
        for (GrowthKind g : kGrowthKinds)
            add(std::string("growth_") + growth_suffix(g),
                {ParsedColumn::Kind::growth, {}, false, 0, g});
        for (int i = 1; i <= kMaxLag; ++i)
            add("lag_" + std::to_string(i), {ParsedColumn::Kind::lag, {}, false, i, {}});
        for (int j : kAvgLagWindows)
            add("avglag_" + std::to_string(j), {ParsedColumn::Kind::avglag, {}, false, j, {}});
        return c;
    }();
    return cat;
}

ParsedColumn parse_column(const std::string& name) {
    auto it = catalog().by_name.find(name);
    if (it == catalog().by_name.end()) throw InputError("unknown column name \"" + name + "\"");
    return it->second;
}

}  // namespace

const std::vector<std::string>& column_catalog() { return catalog().names; }

std::vector<std::string> group_members(const std::string& group) {
    std::vector<std::string> out;
    const char* prefix = nullptr;
    if (group == "tod") prefix = "tod_";
    else if (group == "tod_wd") prefix = "todwd_";
    else if (group == "tow") prefix = "tow_";
    else if (group == "toy") prefix = "toy_";
    else if (group == "growth") prefix = "growth_";
    else if (group == "lags") prefix = "lag_";
    else if (group == "avglag") prefix = "avglag_";
    else throw InputError("unknown covariate group \"" + group + "\"");
    for (const auto& name : catalog().names)
        if (name.rfind(prefix, 0) == 0) out.push_back(name);
    return out;
}

std::vector<double> fourier_features(const CalendarFields& fields, const FourierSpec& spec) {
    std::vector<double> out;
    out.reserve(2 * spec.max_order);
    for (int k = 1; k <= spec.max_order; ++k) {
        out.push_back(fourier_value(fields, spec.scale, k, true));
        out.push_back(fourier_value(fields, spec.scale, k, false));
    }
    return out;
}

std::vector<double> lag_features(std::span<const long long> history, const LagSpec& spec) {
    std::vector<double> out;
    out.reserve(spec.lag_orders.size());
    for (int i : spec.lag_orders) {
        if (i <= 0 || static_cast<std::size_t>(i) > history.size())
            throw InputError("lag " + std::to_string(i) + " needs more history than available (" +
                             std::to_string(history.size()) + ")");
        double y = static_cast<double>(history[history.size() - i]);
        out.push_back(spec.transform_enabled ? std::log(spec.transform_offset + y) : y);
    }
    return out;
}

std::vector<double> avg_lag_features(std::span<const long long> history, const AvgLagSpec& spec) {
    std::vector<double> out;
    out.reserve(spec.windows.size());
    for (int j : spec.windows) {
        if (j <= 0 || static_cast<std::size_t>(j) > history.size())
            throw InputError("averaging window " + std::to_string(j) +
                             " needs more history than available (" +
                             std::to_string(history.size()) + ")");
        double sum = 0.0;
        for (int i = 1; i <= j; ++i) sum += static_cast<double>(history[history.size() - i]);
        out.push_back(sum / j);
    }
    return out;
}

std::vector<double> growth_features(double t_index, const GrowthSpec& spec) {
    if (!spec.candidate) return {};
    return {growth_value(t_index, *spec.candidate, spec.scale_hours)};
}

// ---------------------------------------------------------------------------
// RowBuilder
// ---------------------------------------------------------------------------

struct RowBuilder::Column : ParsedColumn {};

RowBuilder::~RowBuilder() = default;

RowBuilder::RowBuilder(std::vector<std::string> columns, const DesignContext& ctx)
    : names_(std::move(columns)), ctx_(ctx) {
    cols_.reserve(names_.size());
    for (const auto& name : names_) {
        Column c;
        static_cast<ParsedColumn&>(c) = parse_column(name);
        if (c.kind == ParsedColumn::Kind::lag || c.kind == ParsedColumn::Kind::avglag)
            required_history_ = std::max<std::int64_t>(required_history_, c.order);
        cols_.push_back(c);
    }
}

Eigen::VectorXd RowBuilder::build(const CalendarFields& fields, double t_index,
                                  std::span<const long long> history) const {
    if (static_cast<std::int64_t>(history.size()) < required_history_)
        throw InputError("row needs " + std::to_string(required_history_) +
                         " hours of history, got " + std::to_string(history.size()));
    Eigen::VectorXd row(static_cast<Eigen::Index>(cols_.size()));
    for (std::size_t i = 0; i < cols_.size(); ++i) {
        const Column& c = cols_[i];
        double v = 0.0;
        switch (c.kind) {
            case ParsedColumn::Kind::intercept:
                v = 1.0;
                break;
            case ParsedColumn::Kind::fourier:
                v = fourier_value(fields, c.scale, c.order, c.sin_part);
                break;
            case ParsedColumn::Kind::growth:
                v = growth_value(t_index, c.growth, ctx_.growth_scale_hours);
                break;
            case ParsedColumn::Kind::lag: {
                double y = static_cast<double>(history[history.size() - c.order]);
                v = ctx_.lag_transform ? std::log(ctx_.lag_transform_offset + y) : y;
                break;
            }
            case ParsedColumn::Kind::avglag: {
                double sum = 0.0;
                for (int k = 1; k <= c.order; ++k)
                    sum += static_cast<double>(history[history.size() - k]);
                v = sum / c.order;
                break;
            }
        }
        row[static_cast<Eigen::Index>(i)] = v;
    }
    return row;
}

// ---------------------------------------------------------------------------
// Assembly
// ---------------------------------------------------------------------------

DesignMatrix assemble_design(const CountSeries& series, const std::vector<std::string>& active,
                             const DesignContext& ctx, std::int64_t min_dropped_prefix) {
    std::unordered_set<std::string> wanted;
    for (const auto& name : active) {
        parse_column(name);  // unknown names must fail loudly
        wanted.insert(name);
    }

    std::vector<std::string> names{"intercept"};
    for (const auto& name : catalog().names)
        if (name != "intercept" && wanted.count(name)) names.push_back(name);

    RowBuilder builder(names, ctx);
    const std::int64_t prefix = std::max(builder.required_history(), min_dropped_prefix);
    const std::int64_t n_rows = series.size() - prefix;
    if (n_rows < 1)
        throw InputError("series of length " + std::to_string(series.size()) +
                         " is shorter than dropped_prefix + 1 (prefix " + std::to_string(prefix) +
                         ")");

    DesignMatrix dm;
    dm.column_names = names;
    dm.dropped_prefix = prefix;
    dm.rows.resize(n_rows, static_cast<Eigen::Index>(names.size()));

    const long long* data = series.values.data();
#pragma omp parallel for schedule(static)
    for (std::int64_t r = 0; r < n_rows; ++r) {
        const std::int64_t t = prefix + r;
        Timestamp ts = series.timestamp_at(t);
        CalendarFields fields = calendar_fields(ts);
        double t_index = static_cast<double>(ts.epoch_hours() - ctx.growth_origin_hour);
        dm.rows.row(r) =
            builder.build(fields, t_index, std::span<const long long>(data, data + t));
    }

    if (!dm.rows.allFinite())
        throw InputError("design matrix contains non-finite entries");
    return dm;
}

Eigen::VectorXd response_vector(const CountSeries& series, std::int64_t dropped_prefix) {
    const std::int64_t n = series.size() - dropped_prefix;
    if (n < 1) throw InputError("series too short for the requested prefix");
    Eigen::VectorXd y(n);
    for (std::int64_t i = 0; i < n; ++i)
        y[i] = static_cast<double>(series.values[dropped_prefix + i]);
    return y;
}

}  // namespace countcast
