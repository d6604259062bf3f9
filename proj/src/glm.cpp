#include "countcast/glm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "countcast/errors.hpp"
#include "countcast/kernels.hpp"

namespace countcast {

namespace {

// linear predictors are clamped to this range while iterating so early
// steps cannot blow up the working weights
constexpr double kEtaClamp = 30.0;
constexpr double kWeightFloor = 1e-10;
constexpr double kRankTol = 1e-10;
constexpr double kExpOverflow = 709.782712893384;  // log(DBL_MAX)

double clamp_eta(double eta) { return std::clamp(eta, -kEtaClamp, kEtaClamp); }

// lgamma(theta + y) - lgamma(theta) without cancellation for huge theta.
double lgamma_ratio(double theta, double y) {
    if (theta >= 1e6 && y <= 256.0) {
        double s = 0.0;
        for (double j = 0.0; j < y; j += 1.0) s += std::log(theta + j);
        return s;
    }
    return std::lgamma(theta + y) - std::lgamma(theta);
}

double poisson_loglik(const Eigen::VectorXd& mu, const Eigen::VectorXd& y) {
    double ll = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        double m = mu[i], yi = y[i];
        ll += (yi > 0.0 ? yi * std::log(m) : 0.0) - m - std::lgamma(yi + 1.0);
    }
    return ll;
}

double negbin_loglik(double theta, const Eigen::VectorXd& mu, const Eigen::VectorXd& y) {
    double ll = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        double m = mu[i], yi = y[i];
        ll += lgamma_ratio(theta, yi) - std::lgamma(yi + 1.0);
        ll += yi * (std::log(m) - std::log(theta + m));
        ll -= theta * std::log1p(m / theta);
    }
    return ll;
}

double deviance(Family family, double theta, const Eigen::VectorXd& mu,
                const Eigen::VectorXd& y) {
    double dev = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        double m = mu[i], yi = y[i];
        double t = yi > 0.0 ? yi * std::log(yi / m) : 0.0;
        if (family == Family::poisson)
            dev += 2.0 * (t - (yi - m));
        else
            dev += 2.0 * (t - (yi + theta) * std::log((yi + theta) / (m + theta)));
    }
    return dev;
}

// Fixed-order Cholesky rank filter on the Gram matrix: the first column of
// a collinear set stays, later ones are dropped.
std::vector<int> rank_filter(const Eigen::MatrixXd& x, std::vector<int>& dropped) {
    const Eigen::Index p = x.cols();
    Eigen::MatrixXd g = x.transpose() * x;
    Eigen::MatrixXd l = Eigen::MatrixXd::Zero(p, p);
    std::vector<int> kept;
    std::vector<char> keep(p, 0);
    for (Eigen::Index j = 0; j < p; ++j) {
        double d = g(j, j);
        for (Eigen::Index k = 0; k < j; ++k)
            if (keep[k]) d -= l(j, k) * l(j, k);
        if (!(g(j, j) > 0.0) || !(d > kRankTol * g(j, j))) {
            dropped.push_back(static_cast<int>(j));
            continue;
        }
        keep[j] = 1;
        kept.push_back(static_cast<int>(j));
        l(j, j) = std::sqrt(d);
        for (Eigen::Index i = j + 1; i < p; ++i) {
            double s = g(i, j);
            for (Eigen::Index k = 0; k < j; ++k)
                if (keep[k]) s -= l(i, k) * l(j, k);
            l(i, j) = s / l(j, j);
        }
    }
    return kept;
}

Eigen::VectorXd solve_normal_equations(const kernels::NormalEq& ne) {
    Eigen::LDLT<Eigen::MatrixXd> ldlt(ne.xtwx);
    Eigen::VectorXd beta = ldlt.solve(ne.xtwz);
    if (ldlt.info() != Eigen::Success || !beta.allFinite()) {
        double ridge = 1e-8 * ne.xtwx.diagonal().mean() + 1e-12;
        Eigen::MatrixXd a = ne.xtwx;
        a.diagonal().array() += ridge;
        beta = a.ldlt().solve(ne.xtwz);
    }
    return beta;
}

struct IrlsResult {
    Eigen::VectorXd beta;
    Eigen::VectorXd mu;
    bool converged = false;
    int iterations = 0;
};

// One IRLS run at a fixed family/theta. Working weights: mu for Poisson,
// mu*theta/(theta+mu) for the negative binomial (log link in both cases).
IrlsResult irls(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, Family family, double theta,
                Eigen::VectorXd beta0, const FitControls& controls) {
    const Eigen::Index n = x.rows();
    IrlsResult res;
    res.beta = std::move(beta0);

    Eigen::VectorXd eta = (x * res.beta).unaryExpr([](double e) { return clamp_eta(e); });
    Eigen::VectorXd mu = eta.array().exp();
    double dev = deviance(family, theta, mu, y);

    for (int it = 0; it < controls.max_iter; ++it) {
        Eigen::VectorXd w(n), z(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            double m = std::max(mu[i], kWeightFloor);
            w[i] = family == Family::poisson ? m : m * theta / (theta + m);
            z[i] = eta[i] + (y[i] - m) / m;
        }
        auto ne = kernels::weighted_normal_equations(x, w, z);
        res.beta = solve_normal_equations(ne);
        eta = (x * res.beta).unaryExpr([](double e) { return clamp_eta(e); });
        mu = eta.array().exp();
        double dev_new = deviance(family, theta, mu, y);
        ++res.iterations;
        if (std::isfinite(dev_new) &&
            std::fabs(dev_new - dev) < controls.tol * (std::fabs(dev_new) + 0.1)) {
            res.converged = true;
            dev = dev_new;
            break;
        }
        dev = dev_new;
    }
    res.mu = mu;
    return res;
}

// Golden-section maximization of the profile likelihood over log theta.
double maximize_theta(const Eigen::VectorXd& mu, const Eigen::VectorXd& y,
                      const FitControls& controls) {
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    auto f = [&](double lt) { return negbin_loglik(std::exp(lt), mu, y); };
    double a = controls.theta_log_lo, b = controls.theta_log_hi;
    double c = b - phi * (b - a), d = a + phi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > controls.theta_tol) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = f(d);
        }
    }
    return std::exp((a + b) / 2.0);
}

double moment_theta(const Eigen::VectorXd& mu, const Eigen::VectorXd& y) {
    double num = 0.0, den = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        num += mu[i] * mu[i];
        den += (y[i] - mu[i]) * (y[i] - mu[i]) - mu[i];
    }
    if (!(den > 0.0)) return 1e7;  // little or no overdispersion
    return std::clamp(num / den, 1e-3, 1e8);
}

}  // namespace

std::string family_name(Family f) { return f == Family::poisson ? "poisson" : "negbin"; }

Family parse_family(const std::string& name) {
    if (name == "poisson") return Family::poisson;
    if (name == "negbin") return Family::negbin;
    throw InputError("unknown family \"" + name + "\" (expected poisson or negbin)");
}

double FittedModel::coefficient(const std::string& name) const {
    for (std::size_t i = 0; i < column_names.size(); ++i)
        if (column_names[i] == name) return beta[static_cast<Eigen::Index>(i)];
    return 0.0;
}

FittedModel fit_glm(const DesignMatrix& design, const Eigen::VectorXd& response,
                    const FamilySpec& family, const FitControls& controls) {
    const Eigen::Index n = design.rows.rows();
    if (response.size() != n)
        throw InputError("response length " + std::to_string(response.size()) +
                         " does not match design rows " + std::to_string(n));
    for (Eigen::Index i = 0; i < n; ++i)
        if (response[i] < 0.0) throw InputError("negative response value");

    std::vector<int> dropped_idx;
    std::vector<int> kept = rank_filter(design.rows, dropped_idx);
    if (kept.empty()) throw ModelError("design has no usable columns");

    Eigen::MatrixXd x(n, static_cast<Eigen::Index>(kept.size()));
    for (std::size_t j = 0; j < kept.size(); ++j) x.col(j) = design.rows.col(kept[j]);

    // start from the intercept-only mean; guaranteed finite deviance
    Eigen::VectorXd beta0 = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(kept.size()));
    beta0[0] = std::log(response.mean() + 0.1);

    FittedModel model;
    model.family = family;
    model.n_obs = n;
    for (int j : kept) model.column_names.push_back(design.column_names[j]);
    for (int j : dropped_idx) model.dropped_columns.push_back(design.column_names[j]);

    if (family.family == Family::poisson) {
        IrlsResult r = irls(x, response, Family::poisson, 0.0, beta0, controls);
        model.beta = r.beta;
        model.converged = r.converged;
        model.iterations = r.iterations;
        model.family.theta = 0.0;
        model.log_lik = poisson_loglik(r.mu, response);
        model.n_params = static_cast<int>(kept.size());
        return model;
    }

    // negbin: poisson pre-fit, then alternate theta and beta steps
    IrlsResult r = irls(x, response, Family::poisson, 0.0, beta0, controls);
    double theta = moment_theta(r.mu, response);
    double ll_prev = -std::numeric_limits<double>::infinity();
    bool outer_converged = false;
    int total_iter = r.iterations;
    double ll = ll_prev;
    for (int round = 0; round < controls.max_outer; ++round) {
        theta = maximize_theta(r.mu, response, controls);
        r = irls(x, response, Family::negbin, theta, r.beta, controls);
        total_iter += r.iterations;
        ll = negbin_loglik(theta, r.mu, response);
        if (std::isfinite(ll) && std::fabs(ll - ll_prev) < controls.tol * (std::fabs(ll) + 1.0)) {
            outer_converged = true;
            break;
        }
        ll_prev = ll;
    }
    model.beta = r.beta;
    model.converged = outer_converged && r.converged;
    model.iterations = total_iter;
    model.family.theta = theta;
    model.log_lik = ll;
    model.n_params = static_cast<int>(kept.size()) + 1;
    return model;
}

double log_likelihood(Family family, double theta, const Eigen::VectorXd& mu,
                      const Eigen::VectorXd& y) {
    if (mu.size() != y.size()) throw InputError("mu/response length mismatch");
    return family == Family::poisson ? poisson_loglik(mu, y) : negbin_loglik(theta, mu, y);
}

double log_likelihood(const FittedModel& model, const DesignMatrix& design,
                      const Eigen::VectorXd& response) {
    Eigen::VectorXd mu = fitted_means(model, design);
    return log_likelihood(model.family.family, model.family.theta, mu, response);
}

InfoCriteria information_criteria(const FittedModel& model, bool standardized) {
    const double k = model.n_params;
    const double n = static_cast<double>(model.n_obs);
    InfoCriteria ic{2.0 * k - 2.0 * model.log_lik, k * std::log(n) - 2.0 * model.log_lik};
    if (standardized) {
        ic.aic /= n;
        ic.bic /= n;
    }
    return ic;
}

double predict_mean(const FittedModel& model, const Eigen::VectorXd& covariate_row) {
    if (covariate_row.size() != model.beta.size())
        throw InputError("covariate row length does not match coefficient vector");
    double eta = model.beta.dot(covariate_row);
    if (!(eta < kExpOverflow)) throw PredictionOverflow{eta};
    return std::exp(eta);
}

long long sample_response(const FamilySpec& family, double mu, Xoshiro256ss& rng) {
    if (family.family == Family::poisson) return sample_poisson(rng, mu);
    return sample_negbin(rng, mu, family.theta);
}

Eigen::VectorXd fitted_means(const FittedModel& model, const DesignMatrix& design) {
    if (design.rows.cols() != model.beta.size())
        throw InputError("design width does not match coefficient vector");
    return (design.rows * model.beta).array().exp();
}

}  // namespace countcast
