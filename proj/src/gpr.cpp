#include "blm/gpr.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "blm/error.hpp"
#include "blm/stats.hpp"

namespace blm {
namespace {

constexpr double kJitterStart = 1e-8;
constexpr double kJitterMax = 1e-4;

void check_training_data(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
    if (x.rows() != y.size())
        throw Error(ErrorKind::DimensionMismatch, "gpr: " + std::to_string(x.rows()) + " inputs but " +
                                                      std::to_string(y.size()) + " targets");
    if (x.rows() < 2) throw Error(ErrorKind::InvalidArgument, "gpr: need at least 2 training points");
    if (x.cols() < 1) throw Error(ErrorKind::InvalidArgument, "gpr: inputs need at least one feature");
    if (!x.allFinite() || !y.allFinite()) throw Error(ErrorKind::InvalidValue, "gpr: non-finite training data");
}

void check_hyper(GprHyper h) {
    if (!(h.length_scale > 0.0) || !std::isfinite(h.length_scale))
        throw Error(ErrorKind::InvalidArgument, "gpr: length scale must be positive");
    if (!(h.noise_var >= 0.0) || !std::isfinite(h.noise_var))
        throw Error(ErrorKind::InvalidArgument, "gpr: noise variance must be >= 0");
}

// A constant target centers to exactly zero; y - mean() alone can leave
// rounding residue of order 1e-17 that would then set the signal variance.
Eigen::VectorXd center(const Eigen::VectorXd& y, double mean) {
    if (y.maxCoeff() == y.minCoeff()) return Eigen::VectorXd::Zero(y.size());
    return y.array() - mean;
}

double target_variance(const Eigen::VectorXd& centered) {
    const double v = centered.squaredNorm() / static_cast<double>(centered.size());
    return v > 0.0 ? v : 1.0;
}

struct Factorization {
    Eigen::LLT<Eigen::MatrixXd> llt;
    double jitter;
};

Factorization factorize(const Eigen::MatrixXd& x, double signal_var, GprHyper h) {
    const Eigen::MatrixXd k = rbf_kernel(x, x, signal_var, h.length_scale);
    for (double jitter = kJitterStart; jitter <= kJitterMax * 1.0000001; jitter *= 10.0) {
        Eigen::MatrixXd c = k;
        c.diagonal().array() += h.noise_var + jitter;
        Eigen::LLT<Eigen::MatrixXd> llt(c);
        if (llt.info() == Eigen::Success) return {std::move(llt), jitter};
    }
    throw Error(ErrorKind::IllConditioned, "gpr: covariance not positive definite even with jitter 1e-4");
}

double lml_from(const Factorization& f, const Eigen::VectorXd& yc, const Eigen::VectorXd& alpha) {
    const double n = static_cast<double>(yc.size());
    const double log_det_half = f.llt.matrixLLT().diagonal().array().log().sum();
    return -0.5 * yc.dot(alpha) - log_det_half - 0.5 * n * std::log(2.0 * std::numbers::pi);
}

Eigen::VectorXd zscore(const Eigen::VectorXd& v) {
    const double mean = v.mean();
    const double sd = std::sqrt((v.array() - mean).square().mean());
    if (!(sd > 0.0)) return Eigen::VectorXd::Zero(v.size());
    return (v.array() - mean) / sd;
}

}  // namespace

std::vector<GprHyper> default_hyper_grid() {
    std::vector<GprHyper> grid;
    for (int i = 0; i < 13; ++i) {
        const double ell = std::pow(10.0, -2.0 + 3.0 * i / 12.0);
        for (int j = 0; j < 6; ++j) grid.push_back({ell, std::pow(10.0, -6.0 + j)});
    }
    return grid;
}

Eigen::MatrixXd rbf_kernel(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, double signal_var,
                           double length_scale) {
    if (a.cols() != b.cols()) throw Error(ErrorKind::DimensionMismatch, "rbf_kernel: feature counts differ");
    const double inv = 1.0 / (2.0 * length_scale * length_scale);
    Eigen::MatrixXd k(a.rows(), b.rows());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < b.rows(); ++j)
            k(i, j) = signal_var * std::exp(-(a.row(i) - b.row(j)).squaredNorm() * inv);
    return k;
}

LogMarginalLikelihood log_marginal_likelihood(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, GprHyper hyper) {
    check_training_data(x, y);
    check_hyper(hyper);
    const Eigen::VectorXd yc = center(y, y.mean());
    const auto f = factorize(x, target_variance(yc), hyper);
    const Eigen::VectorXd alpha = f.llt.solve(yc);
    return {lml_from(f, yc, alpha), f.jitter};
}

GprModel fit_gpr(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, GprHyper hyper) {
    check_training_data(x, y);
    check_hyper(hyper);
    GprModel m;
    m.x_ = x;
    m.hyper_ = hyper;
    m.y_mean_ = y.maxCoeff() == y.minCoeff() ? y(0) : y.mean();
    m.y_centered_ = center(y, m.y_mean_);
    m.signal_var_ = target_variance(m.y_centered_);
    auto f = factorize(x, m.signal_var_, hyper);
    m.alpha_ = f.llt.solve(m.y_centered_);
    m.lml_ = lml_from(f, m.y_centered_, m.alpha_);
    m.jitter_ = f.jitter;
    m.llt_ = std::move(f.llt);
    return m;
}

GprModel fit_gpr(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, std::span<const GprHyper> grid) {
    if (grid.empty()) throw Error(ErrorKind::InvalidArgument, "gpr: empty hyperparameter grid");
    std::optional<GprModel> best;
    for (const auto& h : grid) {
        try {
            auto m = fit_gpr(x, y, h);
            if (!best || m.log_marginal_likelihood() > best->log_marginal_likelihood()) best = std::move(m);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::IllConditioned) throw;
        }
    }
    if (!best) throw Error(ErrorKind::IllConditioned, "gpr: no grid point gave a positive definite covariance");
    return std::move(*best);
}

GprPrediction GprModel::predict(const Eigen::MatrixXd& x_new) const {
    if (x_new.cols() != x_.cols())
        throw Error(ErrorKind::DimensionMismatch, "gpr predict: expected " + std::to_string(x_.cols()) +
                                                      " features, got " + std::to_string(x_new.cols()));
    const Eigen::MatrixXd ks = rbf_kernel(x_new, x_, signal_var_, hyper_.length_scale);
    GprPrediction out;
    out.mean = (ks * alpha_).array() + y_mean_;
    const Eigen::MatrixXd v = llt_.matrixL().solve(ks.transpose());
    out.variance = (signal_var_ - v.colwise().squaredNorm().array()).max(0.0).matrix().transpose();
    return out;
}

Eigen::VectorXd GprModel::loo_mean() const {
    const Eigen::Index n = x_.rows();
    const Eigen::MatrixXd inv = llt_.solve(Eigen::MatrixXd::Identity(n, n));
    Eigen::VectorXd out(n);
    for (Eigen::Index i = 0; i < n; ++i) out(i) = y_centered_(i) - alpha_(i) / inv(i, i) + y_mean_;
    return out;
}

std::vector<CorrelationRow> gpr_correlation_rows(std::span<const RunRecord> records) {
    if (records.size() < 10) throw Error(ErrorKind::InvalidArgument, "gpr rows: need at least 10 records");
    const auto n = static_cast<Eigen::Index>(records.size());
    Eigen::VectorXd a(n), m(n), val(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& r = records[static_cast<std::size_t>(i)];
        r.validate();
        if (!r.val_accuracy) throw Error(ErrorKind::InvalidValue, "gpr rows: record without val_accuracy");
        a(i) = r.train_accuracy;
        m(i) = r.mlh;
        val(i) = *r.val_accuracy;
    }
    const auto grid = default_hyper_grid();
    const std::vector<double> target(val.data(), val.data() + n);
    auto row = [&](std::string name, const Eigen::MatrixXd& features) {
        const auto model = fit_gpr(features, val, grid);
        const Eigen::VectorXd loo = model.loo_mean();
        return spearman_row(std::move(name), std::span<const double>(loo.data(), static_cast<std::size_t>(n)), target);
    };
    Eigen::MatrixXd xa(n, 1), xm(n, 1), xma(n, 2);
    xa.col(0) = zscore(a);
    xm.col(0) = zscore(m);
    xma << xm.col(0), xa.col(0);
    return {row("GPR(A)", xa), row("GPR(MLH)", xm), row("GPR(MLH,A)", xma)};
}

}  // namespace blm
