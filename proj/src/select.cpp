#include "countcast/select.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <limits>
#include <unordered_set>

#include "countcast/errors.hpp"

namespace countcast {

std::string strategy_name(SearchStrategy s) {
    switch (s) {
        case SearchStrategy::exhaustive: return "exhaustive";
        case SearchStrategy::nested_prefix: return "nested_prefix";
        case SearchStrategy::single_or_none: return "single_or_none";
    }
    return "";
}

SearchStrategy parse_strategy(const std::string& name) {
    if (name == "exhaustive") return SearchStrategy::exhaustive;
    if (name == "nested_prefix") return SearchStrategy::nested_prefix;
    if (name == "single_or_none") return SearchStrategy::single_or_none;
    throw InputError("unknown search strategy \"" + name + "\"");
}

std::string criterion_name(Criterion c) { return c == Criterion::aic ? "aic" : "bic"; }

Criterion parse_criterion(const std::string& name) {
    if (name == "aic") return Criterion::aic;
    if (name == "bic") return Criterion::bic;
    throw InputError("unknown criterion \"" + name + "\" (expected aic or bic)");
}

GroupSpec GroupSpec::standard(const std::string& name) {
    GroupSpec g;
    g.name = name;
    g.members = group_members(name);
    if (name == "tod" || name == "tod_wd" || name == "tow" || name == "toy") {
        g.search_strategy = SearchStrategy::nested_prefix;
        g.prefix_step = 2;
    } else if (name == "lags") {
        g.search_strategy = SearchStrategy::nested_prefix;
        g.prefix_step = 1;
    } else if (name == "avglag") {
        g.search_strategy = SearchStrategy::exhaustive;
    } else if (name == "growth") {
        g.search_strategy = SearchStrategy::single_or_none;
    }
    return g;
}

namespace {

double criterion_value(const FittedModel& model, Criterion crit) {
    const InfoCriteria ic = information_criteria(model, false);
    return crit == Criterion::aic ? ic.aic : ic.bic;
}

std::vector<std::vector<std::string>> enumerate_candidates(const GroupSpec& group) {
    const std::size_t k = group.members.size();
    std::vector<std::vector<std::string>> cands;
    switch (group.search_strategy) {
        case SearchStrategy::exhaustive: {
            if (k > 20) throw InputError("exhaustive search over " + std::to_string(k) +
                                         " members is impractical; use nested_prefix");
            const std::size_t total = std::size_t{1} << k;
            cands.reserve(total);
            for (std::size_t mask = 0; mask < total; ++mask) {
                std::vector<std::string> subset;
                for (std::size_t i = 0; i < k; ++i)
                    if (mask & (std::size_t{1} << i)) subset.push_back(group.members[i]);
                cands.push_back(std::move(subset));
            }
            break;
        }
        case SearchStrategy::nested_prefix: {
            const auto step = static_cast<std::size_t>(std::max(group.prefix_step, 1));
            for (std::size_t len = 0;; len = std::min(len + step, k)) {
                cands.emplace_back(group.members.begin(),
                                   group.members.begin() + static_cast<std::ptrdiff_t>(len));
                if (len == k) break;
            }
            break;
        }
        case SearchStrategy::single_or_none: {
            cands.emplace_back();
            for (const auto& m : group.members) cands.push_back({m});
            break;
        }
    }
    return cands;
}

std::vector<std::string> canonical_columns(const std::vector<std::string>& names) {
    std::unordered_set<std::string> wanted(names.begin(), names.end());
    std::vector<std::string> out;
    for (const auto& name : column_catalog())
        if (name != "intercept" && wanted.count(name)) out.push_back(name);
    return out;
}

}  // namespace

MergeResult optimal_merge(const std::vector<std::string>& selected, const GroupSpec& group,
                          const CountSeries& series, const SelectionSetup& setup) {
    if (group.name == "growth" && group.search_strategy != SearchStrategy::single_or_none)
        throw InputError("growth group admits at most one column; use single_or_none");

    const auto cands = enumerate_candidates(group);
    const auto nc = static_cast<std::int64_t>(cands.size());
    std::vector<double> crit(cands.size(), std::numeric_limits<double>::infinity());
    std::vector<char> conv(cands.size(), 0);

    std::exception_ptr ep = nullptr;
    std::atomic<bool> failed{false};

#pragma omp parallel for schedule(dynamic)
    for (std::int64_t i = 0; i < nc; ++i) {
        if (failed.load(std::memory_order_relaxed)) continue;
        try {
            std::vector<std::string> cols = selected;
            cols.insert(cols.end(), cands[i].begin(), cands[i].end());
            DesignMatrix dm = assemble_design(series, cols, setup.context, setup.aligned_prefix);
            Eigen::VectorXd y = response_vector(series, dm.dropped_prefix);
            FittedModel model = fit_glm(dm, y, setup.family, setup.controls);
            if (model.converged) {
                crit[i] = criterion_value(model, setup.criterion);
                conv[i] = 1;
            }
        } catch (...) {
#pragma omp critical(countcast_select_err)
            {
                if (!ep) ep = std::current_exception();
            }
            failed.store(true, std::memory_order_relaxed);
        }
    }

    if (ep) {
        try {
            std::rethrow_exception(ep);
        } catch (const InputError& e) {
            throw InputError("group " + group.name + ": " + e.what());
        } catch (const ModelError& e) {
            throw ModelError("group " + group.name + ": " + e.what());
        }
    }

    MergeResult out;
    out.record.group = group.name;
    std::size_t best = 0;
    bool any = false;
    for (std::size_t i = 0; i < cands.size(); ++i) {
        out.record.candidates.push_back({cands[i], crit[i], conv[i] != 0});
        if (conv[i] && (!any || crit[i] < crit[best])) {
            best = i;
            any = true;
        }
    }
    if (!any)
        throw ModelError("group " + group.name + ": none of " + std::to_string(cands.size()) +
                         " candidate fits converged");
    out.chosen = cands[best];
    out.criterion = crit[best];
    out.record.chosen = out.chosen;
    out.record.criterion_after = out.criterion;
    return out;
}

SelectionResult run_diagram(const SelectionDiagram& diagram, const CountSeries& series,
                            const DesignContext& context, const FitControls& controls) {
    {
        std::unordered_set<std::string> seen;
        for (const auto& node : diagram.nodes)
            if (!seen.insert(node.name).second)
                throw InputError("group \"" + node.name + "\" appears twice in the diagram");
    }

    SelectionSetup setup;
    setup.context = context;
    setup.aligned_prefix = alignment_prefix(diagram);
    setup.criterion = diagram.criterion;
    setup.family = diagram.family;
    setup.controls = controls;

    SelectionResult res;
    res.context = context;
    std::vector<std::string> selected;
    for (const auto& node : diagram.nodes) {
        MergeResult mr = optimal_merge(selected, node, series, setup);
        selected.insert(selected.end(), mr.chosen.begin(), mr.chosen.end());
        res.trace.nodes.push_back(std::move(mr.record));
    }

    res.trace.final_columns = canonical_columns(selected);
    DesignMatrix dm = assemble_design(series, res.trace.final_columns, context);
    Eigen::VectorXd y = response_vector(series, dm.dropped_prefix);
    res.model = fit_glm(dm, y, diagram.family, controls);
    res.trace.final_criterion = criterion_value(res.model, diagram.criterion);
    return res;
}

const std::vector<std::string>& scenario_names() {
    static const std::vector<std::string> names = {
        "seas_only", "seas_growth", "seas_growth_avglag", "seas_growth_lag",
        "seas_growth_avglag_lag"};
    return names;
}

SelectionDiagram scenario(const std::string& preset) {
    std::vector<std::string> groups = {"tod", "tod_wd", "tow", "toy"};
    if (preset == "seas_only") {
    } else if (preset == "seas_growth") {
        groups.push_back("growth");
    } else if (preset == "seas_growth_avglag") {
        groups.push_back("growth");
        groups.push_back("avglag");
    } else if (preset == "seas_growth_lag") {
        groups.push_back("growth");
        groups.push_back("lags");
    } else if (preset == "seas_growth_avglag_lag") {
        groups.push_back("growth");
        groups.push_back("lags");
        groups.push_back("avglag");
    } else {
        throw InputError("unknown scenario \"" + preset + "\"");
    }
    SelectionDiagram diagram;
    for (const auto& g : groups) diagram.nodes.push_back(GroupSpec::standard(g));
    return diagram;
}

std::int64_t alignment_prefix(const SelectionDiagram& diagram) {
    std::vector<std::string> all;
    for (const auto& node : diagram.nodes)
        all.insert(all.end(), node.members.begin(), node.members.end());
    return RowBuilder(all, DesignContext{}).required_history();
}

}  // namespace countcast
