#include "countcast/kernels.hpp"

#include <omp.h>

#include <vector>

namespace countcast::kernels {

namespace {
constexpr Eigen::Index kBlockRows = 1024;
}

void set_threads(int n) {
    if (n > 0) omp_set_num_threads(n);
}

int max_threads() { return omp_get_max_threads(); }

NormalEq weighted_normal_equations_serial(const Eigen::MatrixXd& x,
                                          const Eigen::VectorXd& w,
                                          const Eigen::VectorXd& z) {
    const Eigen::Index p = x.cols();
    NormalEq out{Eigen::MatrixXd::Zero(p, p), Eigen::VectorXd::Zero(p)};
    Eigen::MatrixXd wx = w.asDiagonal() * x;
    out.xtwx.noalias() = x.transpose() * wx;
    out.xtwz.noalias() = x.transpose() * w.cwiseProduct(z);
    return out;
}

NormalEq weighted_normal_equations(const Eigen::MatrixXd& x,
                                   const Eigen::VectorXd& w,
                                   const Eigen::VectorXd& z) {
    const Eigen::Index n = x.rows();
    const Eigen::Index p = x.cols();
    const Eigen::Index nblocks = (n + kBlockRows - 1) / kBlockRows;

    std::vector<Eigen::MatrixXd> part_a(nblocks);
    std::vector<Eigen::VectorXd> part_b(nblocks);

#pragma omp parallel for schedule(static)
    for (Eigen::Index b = 0; b < nblocks; ++b) {
        const Eigen::Index lo = b * kBlockRows;
        const Eigen::Index rows = std::min(kBlockRows, n - lo);
        auto xb = x.middleRows(lo, rows);
        auto wb = w.segment(lo, rows);
        auto zb = z.segment(lo, rows);
        part_a[b].noalias() = xb.transpose() * (wb.asDiagonal() * xb);
        part_b[b].noalias() = xb.transpose() * wb.cwiseProduct(zb);
    }

    NormalEq out{Eigen::MatrixXd::Zero(p, p), Eigen::VectorXd::Zero(p)};
    for (Eigen::Index b = 0; b < nblocks; ++b) {
        out.xtwx += part_a[b];
        out.xtwz += part_b[b];
    }
    return out;
}

}  // namespace countcast::kernels
