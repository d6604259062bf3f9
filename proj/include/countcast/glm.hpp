#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <vector>

#include "countcast/design.hpp"
#include "countcast/rng.hpp"

namespace countcast {

enum class Family { poisson, negbin };

std::string family_name(Family f);
Family parse_family(const std::string& name);

// Conditional family with log link. theta is the negative binomial
// dispersion: Var(Y) = mu + mu^2/theta.
struct FamilySpec {
    Family family = Family::poisson;
    double theta = 0.0;  // ignored for poisson
};

struct FitControls {
    double tol = 1e-8;    // relative deviance change per beta step
    int max_iter = 100;   // IRLS iterations per beta step
    int max_outer = 50;   // beta/theta alternation rounds (negbin)
    double theta_log_lo = std::log(1e-3);
    double theta_log_hi = std::log(1e8);
    double theta_tol = 1e-8;  // on log theta
};

struct FittedModel {
    FamilySpec family;
    std::vector<std::string> column_names;  // kept columns, design order
    Eigen::VectorXd beta;                   // aligned with column_names
    double log_lik = 0.0;
    std::int64_t n_obs = 0;
    int n_params = 0;  // |beta|, +1 for the negbin theta
    bool converged = false;
    int iterations = 0;
    std::vector<std::string> dropped_columns;  // removed as rank-deficient

    // Coefficient keyed by column name; zero for names not in the model.
    double coefficient(const std::string& name) const;
};

// Maximum-likelihood fit with log link. Poisson runs IRLS until the
// relative deviance change falls under tol; negbin alternates the IRLS
// beta step with a bounded one-dimensional maximization over log theta.
// Collinear columns are dropped (first occurrence wins) instead of
// aborting, so selection sweeps can explore freely.
FittedModel fit_glm(const DesignMatrix& design, const Eigen::VectorXd& response,
                    const FamilySpec& family, const FitControls& controls = {});

// Exact sum of per-observation log densities.
double log_likelihood(Family family, double theta, const Eigen::VectorXd& mu,
                      const Eigen::VectorXd& y);
double log_likelihood(const FittedModel& model, const DesignMatrix& design,
                      const Eigen::VectorXd& response);

struct InfoCriteria {
    double aic;
    double bic;
};

// AIC = 2k - 2l, BIC = k ln(n) - 2l; divided by n_obs when standardized.
InfoCriteria information_criteria(const FittedModel& model, bool standardized);

// Thrown by predict_mean when the linear predictor would overflow exp;
// the simulation layer turns this into damping or an explosive-path error.
struct PredictionOverflow {
    double linear_predictor;
};

double predict_mean(const FittedModel& model, const Eigen::VectorXd& covariate_row);

// One draw from the conditional distribution at mean mu.
long long sample_response(const FamilySpec& family, double mu, Xoshiro256ss& rng);

// Fitted conditional means over a design matrix.
Eigen::VectorXd fitted_means(const FittedModel& model, const DesignMatrix& design);

}  // namespace countcast
