// Timing comparison of the OpenMP kernels against their serial references.
// Run manually: build/bench/countcast_bench [n_rows] [n_cols]

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <string>

#include "countcast/bounds.hpp"
#include "countcast/design.hpp"
#include "countcast/glm.hpp"
#include "countcast/kernels.hpp"
#include "countcast/rng.hpp"
#include "countcast/simulate.hpp"

namespace cc = countcast;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

template <typename F>
double best_of(int reps, F&& f) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        f();
        best = std::min(best, seconds_since(t0));
    }
    return best;
}

void report(const std::string& name, double serial, double parallel) {
    std::cout << name << ": serial " << serial * 1e3 << " ms, parallel " << parallel * 1e3
              << " ms, speedup " << serial / parallel << "x\n";
}

}  // namespace

int main(int argc, char** argv) {
    const Eigen::Index rows = argc > 1 ? std::atoll(argv[1]) : 200000;
    const Eigen::Index cols = argc > 2 ? std::atoll(argv[2]) : 40;
    std::cout << "threads: " << cc::kernels::max_threads() << ", design " << rows << " x " << cols
              << "\n";

    cc::Xoshiro256ss rng(1);
    Eigen::MatrixXd x(rows, cols);
    Eigen::VectorXd w(rows), z(rows);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) x(i, j) = rng.uniform01() - 0.5;
        w[i] = rng.uniform01() + 0.1;
        z[i] = rng.uniform01() * 4.0 - 2.0;
    }

    cc::kernels::NormalEq eq;
    const double gemm_serial =
        best_of(3, [&] { eq = cc::kernels::weighted_normal_equations_serial(x, w, z); });
    const double gemm_parallel =
        best_of(3, [&] { eq = cc::kernels::weighted_normal_equations(x, w, z); });
    report("weighted_normal_equations", gemm_serial, gemm_parallel);

    // hourly Poisson series: bounds and simulation workloads
    cc::CountSeries train;
    train.start = cc::Timestamp::from_civil(2018, 1, 14, 0);
    const std::int64_t hours = 5 * 52 * 168;
    train.values.reserve(static_cast<std::size_t>(hours));
    for (std::int64_t t = 0; t < hours; ++t) {
        const double mu = 20.0 + 15.0 * std::sin(2.0 * 3.14159265358979 * (t % 168) / 168.0);
        train.values.push_back(cc::sample_poisson(rng, mu));
    }

    cc::DampingBounds bounds;
    const double bounds_serial = best_of(3, [&] {
        bounds = cc::time_varying_bounds_serial(train, cc::TailParams::paper_defaults());
    });
    const double bounds_parallel = best_of(
        3, [&] { bounds = cc::time_varying_bounds(train, cc::TailParams::paper_defaults()); });
    report("time_varying_bounds", bounds_serial, bounds_parallel);

    cc::FittedModel model;
    model.family = {cc::Family::poisson, 0.0};
    model.column_names = {"intercept", "lag_1"};
    model.beta = Eigen::VectorXd(2);
    model.beta << 2.5, 0.15;
    model.converged = true;

    cc::DesignContext ctx;  // transformed lag keeps the paths stable
    cc::SimulationConfig sim;
    sim.horizon = 2000;
    sim.n_paths = 200;
    sim.seed = 7;
    sim.bounds = bounds;

    cc::EnsembleResult ens;
    const double sim_serial =
        best_of(3, [&] { ens = cc::simulate_ensemble_serial(model, train, ctx, sim); });
    const double sim_parallel =
        best_of(3, [&] { ens = cc::simulate_ensemble(model, train, ctx, sim); });
    report("simulate_ensemble", sim_serial, sim_parallel);

    // keep the optimizer honest
    std::cout << "checksum: " << eq.xtwx.sum() + eq.xtwz.sum() + bounds.global.M +
                                     static_cast<double>(ens.paths.back().values.back())
              << "\n";
    return 0;
}
