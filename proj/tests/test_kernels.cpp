#include <Eigen/Dense>

#include "countcast/kernels.hpp"
#include "countcast/rng.hpp"
#include "doctest.h"

using namespace countcast;

namespace {

Eigen::MatrixXd random_matrix(Eigen::Index n, Eigen::Index p, std::uint64_t seed) {
    Xoshiro256ss rng(seed);
    Eigen::MatrixXd x(n, p);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < p; ++j) x(i, j) = rng.normal();
    return x;
}

Eigen::VectorXd random_vector(Eigen::Index n, std::uint64_t seed, bool positive) {
    Xoshiro256ss rng(seed);
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i)
        v[i] = positive ? rng.uniform_pos() : rng.normal();
    return v;
}

}  // namespace

TEST_CASE("parallel normal equations match the serial reference") {
    // one sub-block case and one crossing several 1024-row blocks; the
    // blocked sum reassociates additions, so the comparison is near-exact
    // rather than bitwise
    for (const Eigen::Index n : {Eigen::Index{100}, Eigen::Index{5000}}) {
        const Eigen::MatrixXd x = random_matrix(n, 7, 11);
        const Eigen::VectorXd w = random_vector(n, 12, true);
        const Eigen::VectorXd z = random_vector(n, 13, false);

        const auto par = kernels::weighted_normal_equations(x, w, z);
        const auto ser = kernels::weighted_normal_equations_serial(x, w, z);
        const double scale_a = ser.xtwx.cwiseAbs().maxCoeff();
        const double scale_b = ser.xtwz.cwiseAbs().maxCoeff();
        CHECK((par.xtwx - ser.xtwx).cwiseAbs().maxCoeff() <= 1e-13 * scale_a);
        CHECK((par.xtwz - ser.xtwz).cwiseAbs().maxCoeff() <= 1e-13 * scale_b);
    }
}

TEST_CASE("normal equations agree with the dense Eigen formula") {
    const Eigen::Index n = 3000, p = 5;
    const Eigen::MatrixXd x = random_matrix(n, p, 21);
    const Eigen::VectorXd w = random_vector(n, 22, true);
    const Eigen::VectorXd z = random_vector(n, 23, false);

    const auto ne = kernels::weighted_normal_equations(x, w, z);
    const Eigen::MatrixXd xtwx = x.transpose() * w.asDiagonal() * x;
    const Eigen::VectorXd xtwz = x.transpose() * (w.array() * z.array()).matrix();

    CHECK((ne.xtwx - xtwx).cwiseAbs().maxCoeff() < 1e-10 * xtwx.cwiseAbs().maxCoeff());
    CHECK((ne.xtwz - xtwz).cwiseAbs().maxCoeff() < 1e-10 * xtwz.cwiseAbs().maxCoeff());
}

TEST_CASE("results are invariant to the thread count") {
    const Eigen::Index n = 4100;
    const Eigen::MatrixXd x = random_matrix(n, 6, 31);
    const Eigen::VectorXd w = random_vector(n, 32, true);
    const Eigen::VectorXd z = random_vector(n, 33, false);

    const int saved = kernels::max_threads();
    kernels::set_threads(1);
    const auto one = kernels::weighted_normal_equations(x, w, z);
    kernels::set_threads(4);
    const auto four = kernels::weighted_normal_equations(x, w, z);
    kernels::set_threads(saved);

    CHECK(one.xtwx == four.xtwx);
    CHECK(one.xtwz == four.xtwz);
}

TEST_CASE("thread budget accessor") {
    const int saved = kernels::max_threads();
    kernels::set_threads(2);
    CHECK(kernels::max_threads() == 2);
    kernels::set_threads(saved);
    CHECK(kernels::max_threads() == saved);
}
