#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "blm/criteria.hpp"

namespace blm {

struct GprHyper {
    double length_scale = 1.0;
    double noise_var = 1e-6;
};

/// 13 log-spaced length scales in [0.01, 10] x 6 log-spaced noise
/// variances in [1e-6, 1e-1].
std::vector<GprHyper> default_hyper_grid();

/// k(a, b) = signal_var * exp(-|a - b|^2 / (2 l^2)) for all row pairs.
Eigen::MatrixXd rbf_kernel(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, double signal_var,
                           double length_scale);

struct GprPrediction {
    Eigen::VectorXd mean;
    Eigen::VectorXd variance;
};

struct LogMarginalLikelihood {
    double value;
    double jitter;  // diagonal jitter the factorization needed
};

/// Log marginal likelihood of mean-centered y under the RBF + white-noise
/// model, with signal variance var(y) (1 when y is constant).
///
/// Throws Error(IllConditioned) if no jitter up to 1e-4 makes the
/// covariance positive definite.
LogMarginalLikelihood log_marginal_likelihood(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, GprHyper hyper);

/// Fitted regressor; immutable after construction.
class GprModel {
public:
    /// Prediction at new inputs; variance is clamped at 0.
    /// Throws Error(DimensionMismatch) if the column count differs.
    GprPrediction predict(const Eigen::MatrixXd& x_new) const;

    /// Closed-form leave-one-out means at the training inputs, with the
    /// hyperparameters held fixed.
    Eigen::VectorXd loo_mean() const;

    const Eigen::MatrixXd& train_inputs() const noexcept { return x_; }
    const Eigen::VectorXd& alpha() const noexcept { return alpha_; }
    GprHyper hyper() const noexcept { return hyper_; }
    double signal_var() const noexcept { return signal_var_; }
    double jitter() const noexcept { return jitter_; }
    double y_mean() const noexcept { return y_mean_; }
    double log_marginal_likelihood() const noexcept { return lml_; }

private:
    friend GprModel fit_gpr(const Eigen::MatrixXd&, const Eigen::VectorXd&, GprHyper);

    Eigen::MatrixXd x_;
    Eigen::VectorXd y_centered_;
    Eigen::VectorXd alpha_;
    Eigen::LLT<Eigen::MatrixXd> llt_;
    GprHyper hyper_;
    double signal_var_ = 1.0;
    double jitter_ = 1e-8;
    double y_mean_ = 0.0;
    double lml_ = 0.0;
};

/// Fit with fixed hyperparameters. Needs n >= 2 rows, finite entries.
GprModel fit_gpr(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, GprHyper hyper);

/// Fit at the grid point with the highest log marginal likelihood.
GprModel fit_gpr(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, std::span<const GprHyper> grid);

/// Spearman of leave-one-out GPR predictions against val_accuracy for the
/// feature sets (A), (MLH) and (MLH, A). Features are z-scored first.
///
/// Throws Error(InvalidArgument) for fewer than 10 records and
/// Error(InvalidValue) for records without val_accuracy.
std::vector<CorrelationRow> gpr_correlation_rows(std::span<const RunRecord> records);

}  // namespace blm
