#pragma once

#include <Eigen/Dense>

namespace countcast::kernels {

// Global thread budget for all OpenMP regions in the library.
// 0 keeps the OpenMP runtime default.
void set_threads(int n);
int max_threads();

struct NormalEq {
    Eigen::MatrixXd xtwx;  // X^T W X
    Eigen::VectorXd xtwz;  // X^T W z
};

// Plain single pass over the rows. Kept as the reference the OpenMP
// version is tested and benchmarked against.
NormalEq weighted_normal_equations_serial(const Eigen::MatrixXd& x,
                                          const Eigen::VectorXd& w,
                                          const Eigen::VectorXd& z);

// Blocked OpenMP version: rows are split into fixed 1024-row blocks,
// per-block partial sums are combined in block order, so the result is
// identical for any thread count.
NormalEq weighted_normal_equations(const Eigen::MatrixXd& x,
                                   const Eigen::VectorXd& w,
                                   const Eigen::VectorXd& z);

}  // namespace countcast::kernels
