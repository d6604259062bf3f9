#pragma once

#include <cstdint>
#include <vector>

#include "countcast/bounds.hpp"
#include "countcast/design.hpp"
#include "countcast/glm.hpp"
#include "countcast/series.hpp"

namespace countcast {

struct SimulationConfig {
    std::int64_t horizon = 168;
    int n_paths = 1;
    std::uint64_t seed = 0;
    bool damping_enabled = true;
    DampingBounds bounds{};         // consulted only when damping_enabled
    double warn_damping_rate = 0.20;
};

struct SimulatedPath {
    std::vector<long long> values;   // one per future hour
    std::vector<char> damped_low;    // raw draw fell below floor(m_h)
    std::vector<char> damped_high;   // raw draw exceeded ceil(M_h)
    long long overflow_events = 0;   // linear-predictor overflows forced to M_h
};

struct EnsembleResult {
    std::vector<SimulatedPath> paths;
    std::vector<double> mean;        // per-hour ensemble mean
    Timestamp start;                 // first simulated hour
    double damping_rate = 0.0;       // flagged steps / (n_paths * horizon)
    bool damping_warning = false;    // damping_rate > warn_damping_rate
};

// Simulates one path of `horizon` hours following the tail. Draws are damped
// into [floor(m_h), ceil(M_h)] of their hour-of-week bucket (strict
// violations only), and the damped value — not the raw draw — feeds later
// lag features. RNG sub-stream depends only on (seed, path_index), so a path
// is identical whether simulated alone or inside an ensemble.
SimulatedPath simulate_path(const FittedModel& model, const CountSeries& tail,
                            const DesignContext& context, const SimulationConfig& config,
                            std::uint64_t path_index);

EnsembleResult simulate_ensemble(const FittedModel& model, const CountSeries& tail,
                                 const DesignContext& context, const SimulationConfig& config);

// single-threaded reference implementation
EnsembleResult simulate_ensemble_serial(const FittedModel& model, const CountSeries& tail,
                                        const DesignContext& context,
                                        const SimulationConfig& config);

}  // namespace countcast
