#pragma once

#include <vector>

#include "countcast/io.hpp"

namespace countcast {

struct PipelineResult {
    SelectionResult selection;
    DampingBounds bounds;  // populated only when damping is enabled
    EnsembleResult ensemble;
    MetricsReport metrics;
    std::vector<std::string> files;  // artifact names written to out_dir
};

// Full run for one (scenario, family) pair: split -> grouped selection ->
// damping bounds -> simulated forecast -> evaluation -> artifact emission.
PipelineResult run_pipeline(const RunConfig& config);
PipelineResult run_pipeline(const RunConfig& config, const CountSeries& counts);

// Five complexity scenarios x {poisson, negbin}; artifacts land in
// out_dir/<scenario>_<family>/ and the ten comparison rows are returned and
// written to out_dir/comparison.csv.
std::vector<ScenarioMetrics> run_all_scenarios(const RunConfig& config);
std::vector<ScenarioMetrics> run_all_scenarios(const RunConfig& config,
                                               const CountSeries& counts);

}  // namespace countcast
