#pragma once

#include <Eigen/Dense>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "countcast/calendar.hpp"
#include "countcast/series.hpp"

namespace countcast {

// ---------------------------------------------------------------------------
// Covariate specs
// ---------------------------------------------------------------------------

enum class FourierScale { daily, weekend_daily, weekly, annual };

// Sin/cos pairs at orders 1..max_order. Frequencies: 2*pi/24 on d for the
// daily scales (the weekend one is zeroed outside weekends), 2*pi/7 on w,
// and 2*pi/year_length on a, using the year length of the timestamp's own
// year.
struct FourierSpec {
    FourierScale scale;
    int max_order = 10;
};

// Lag covariates y(t-i). With the transform enabled each lag enters as
// log(offset + y); offsets outside (0.1, 1) work but draw a warning.
struct LagSpec {
    std::vector<int> lag_orders;  // sorted, subset of 1..10 by default
    bool transform_enabled = true;
    double transform_offset = 0.1;
};

// Long-memory averages: av_j(t) = mean of the previous j values.
struct AvgLagSpec {
    std::vector<int> windows;  // subset of {5,10,15,24,48} by default
};

enum class GrowthKind { linear, quadratic, cubic, sqrt, cbrt };

// At most one growth term is ever active. The hour index is divided by
// scale_hours before the power is applied; the assembler pins scale_hours
// to the training length so t^3 stays well-conditioned over years of data.
struct GrowthSpec {
    std::optional<GrowthKind> candidate;
    double scale_hours = 1.0;
};

// ---------------------------------------------------------------------------
// Feature evaluation
// ---------------------------------------------------------------------------

std::vector<double> fourier_features(const CalendarFields& fields, const FourierSpec& spec);

// history spans the values up to t-1; history.back() is y(t-1).
std::vector<double> lag_features(std::span<const long long> history, const LagSpec& spec);
std::vector<double> avg_lag_features(std::span<const long long> history, const AvgLagSpec& spec);

// t_index in hours since the training origin.
std::vector<double> growth_features(double t_index, const GrowthSpec& spec);

// ---------------------------------------------------------------------------
// Named columns and assembly
// ---------------------------------------------------------------------------

// Column naming scheme (stable identifiers for traces and config files):
//   intercept, tod_s1..tod_c10, todwd_s1.., tow_s1.., toy_s1..,
//   growth_t/growth_t2/growth_t3/growth_sqrt/growth_cbrt,
//   lag_1..lag_10, avglag_5/10/15/24/48.
// The full catalog in canonical order (intercept first).
const std::vector<std::string>& column_catalog();

// Members of one named group, in catalog order ("tod", "tod_wd", "tow",
// "toy", "growth", "lags", "avglag").
std::vector<std::string> group_members(const std::string& group);

// Settings shared by fitting and simulation; recorded next to the model.
struct DesignContext {
    std::int64_t growth_origin_hour = 0;  // epoch hour of the training start
    double growth_scale_hours = 1.0;      // training length in hours
    bool lag_transform = true;
    double lag_transform_offset = 0.1;
};

struct DesignMatrix {
    std::vector<std::string> column_names;  // intercept first
    Eigen::MatrixXd rows;
    std::int64_t dropped_prefix = 0;  // leading observations lost to lag history
};

// Evaluates one covariate row at a time; shared by the assembler and the
// simulator so fitted and simulated features can never drift apart.
class RowBuilder {
public:
    RowBuilder(std::vector<std::string> columns, const DesignContext& ctx);
    ~RowBuilder();

    // fields/t_index describe time t; history holds values up to t-1.
    Eigen::VectorXd build(const CalendarFields& fields, double t_index,
                          std::span<const long long> history) const;

    std::int64_t required_history() const { return required_history_; }
    const std::vector<std::string>& columns() const { return names_; }

private:
    struct Column;
    std::vector<std::string> names_;
    std::vector<Column> cols_;
    std::int64_t required_history_ = 0;
    DesignContext ctx_;
};

// Assembles the regression matrix for `active` columns (canonical order is
// applied; the intercept is always prepended). min_dropped_prefix lets the
// selection stage align every candidate fit on a common window.
DesignMatrix assemble_design(const CountSeries& series, const std::vector<std::string>& active,
                             const DesignContext& ctx, std::int64_t min_dropped_prefix = 0);

// Response vector aligned to a design built with the same prefix.
Eigen::VectorXd response_vector(const CountSeries& series, std::int64_t dropped_prefix);

}  // namespace countcast
