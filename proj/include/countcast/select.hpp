#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "countcast/design.hpp"
#include "countcast/glm.hpp"
#include "countcast/series.hpp"

namespace countcast {

enum class SearchStrategy { exhaustive, nested_prefix, single_or_none };

std::string strategy_name(SearchStrategy s);
SearchStrategy parse_strategy(const std::string& name);

enum class Criterion { aic, bic };

std::string criterion_name(Criterion c);
Criterion parse_criterion(const std::string& name);

// One covariate group and how its subsets are searched. nested_prefix walks
// prefixes of `members` in steps of prefix_step (2 keeps sin/cos pairs
// together), so a Fourier group yields max_order+1 candidates.
struct GroupSpec {
    std::string name;
    std::vector<std::string> members;
    SearchStrategy search_strategy = SearchStrategy::exhaustive;
    int prefix_step = 1;

    // standard grouping: Fourier groups nested in sin/cos pairs, lags nested
    // by order, avglag exhaustive (2^5), growth single-or-none
    static GroupSpec standard(const std::string& name);
};

struct SelectionDiagram {
    std::vector<GroupSpec> nodes;
    Criterion criterion = Criterion::bic;
    FamilySpec family{};
};

struct CandidateRecord {
    std::vector<std::string> subset;
    double criterion = 0.0;
    bool converged = false;
};

struct NodeRecord {
    std::string group;
    std::vector<CandidateRecord> candidates;
    std::vector<std::string> chosen;
    double criterion_after = 0.0;
};

struct SelectionTrace {
    std::vector<NodeRecord> nodes;
    std::vector<std::string> final_columns;  // canonical order, intercept implicit
    double final_criterion = 0.0;            // criterion of the full-window refit
};

struct MergeResult {
    std::vector<std::string> chosen;
    double criterion = 0.0;
    NodeRecord record;
};

// Shared configuration for the candidate fits of one diagram run. Every fit
// drops the same aligned_prefix rows so criterion values are comparable.
struct SelectionSetup {
    DesignContext context{};
    std::int64_t aligned_prefix = 0;
    Criterion criterion = Criterion::bic;
    FamilySpec family{};
    FitControls controls{};
};

// argmin over candidate subsets H of crit(H union selected); the empty
// subset is always a candidate. Ties break toward the earlier candidate.
MergeResult optimal_merge(const std::vector<std::string>& selected, const GroupSpec& group,
                          const CountSeries& series, const SelectionSetup& setup);

struct SelectionResult {
    FittedModel model;  // refit on the full training window
    SelectionTrace trace;
    DesignContext context;
};

// Runs the nodes in order, carrying the accumulated column set forward,
// then refits the winner using only the history its own columns need.
SelectionResult run_diagram(const SelectionDiagram& diagram, const CountSeries& series,
                            const DesignContext& context, const FitControls& controls = {});

// Complexity-scenario presets over the standard groups.
const std::vector<std::string>& scenario_names();
SelectionDiagram scenario(const std::string& preset);

// history needed by the widest lag/window column of any node
std::int64_t alignment_prefix(const SelectionDiagram& diagram);

}  // namespace countcast
