#include "blm/criteria.hpp"

#include <cmath>

#include "blm/error.hpp"
#include "blm/stats.hpp"

namespace blm {

void RunRecord::validate() const {
    if (step < 0) throw Error(ErrorKind::InvalidValue, "run record: negative step");
    if (!(train_accuracy >= 0.0 && train_accuracy <= 1.0))
        throw Error(ErrorKind::InvalidValue, "run record: train accuracy outside [0, 1]");
    if (!(mlh >= -1.0 && mlh <= 1.0)) throw Error(ErrorKind::InvalidValue, "run record: mlh outside [-1, 1]");
    if (val_accuracy && !(*val_accuracy >= 0.0 && *val_accuracy <= 1.0))
        throw Error(ErrorKind::InvalidValue, "run record: val accuracy outside [0, 1]");
}

double eic(double train_accuracy, double mlh) { return -train_accuracy - mlh; }

double eic_scaled(double train_accuracy, double mlh, const ScalingConstants& c) {
    if (!(c.mlh_range > 0.0)) throw Error(ErrorKind::InvalidArgument, "eic_scaled: mlh_range must be positive");
    return -train_accuracy - (mlh - c.mlh_min) / c.mlh_range;
}

double eic_sr(double train_accuracy, double mlh) {
    if (!(mlh > 0.0)) throw Error(ErrorKind::Domain, "eic_sr: mlh must be positive");
    if (!(train_accuracy > 0.0)) throw Error(ErrorKind::Domain, "eic_sr: train accuracy must be positive");
    return -std::log(mlh) / train_accuracy;
}

double aic(double likelihood, std::int64_t n_params) {
    if (!(likelihood > 0.0)) throw Error(ErrorKind::Domain, "aic: likelihood must be positive");
    return -2.0 * std::log(likelihood) + 2.0 * static_cast<double>(n_params);
}

double bic(double likelihood, std::int64_t n_params, std::int64_t n_points) {
    if (!(likelihood > 0.0)) throw Error(ErrorKind::Domain, "bic: likelihood must be positive");
    if (n_points < 1) throw Error(ErrorKind::Domain, "bic: need at least one data point");
    return -2.0 * std::log(likelihood) + 2.0 * static_cast<double>(n_params) * std::log(static_cast<double>(n_points));
}

CorrelationRow spearman_row(std::string name, std::span<const double> metric, std::span<const double> target) {
    CorrelationRow row{std::move(name), std::nullopt};
    try {
        row.spearman = spearman_r(metric, target);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::UndefinedCorrelation) throw;
    }
    return row;
}

std::vector<CorrelationRow> correlation_table(std::span<const RunRecord> records, const ScalingConstants& c) {
    if (records.size() < 3) throw Error(ErrorKind::InvalidArgument, "correlation_table: need at least 3 records");
    const std::size_t n = records.size();
    std::vector<double> val(n), a(n), m(n), neg_eic(n), neg_scaled(n), neg_sr(n);
    bool sr_defined = true;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& r = records[i];
        r.validate();
        if (!r.val_accuracy) throw Error(ErrorKind::InvalidValue, "correlation_table: record without val_accuracy");
        val[i] = *r.val_accuracy;
        a[i] = r.train_accuracy;
        m[i] = r.mlh;
        neg_eic[i] = -eic(r.train_accuracy, r.mlh);
        neg_scaled[i] = -eic_scaled(r.train_accuracy, r.mlh, c);
        if (r.train_accuracy > 0.0 && r.mlh > 0.0)
            neg_sr[i] = -eic_sr(r.train_accuracy, r.mlh);
        else
            sr_defined = false;
    }
    std::vector<CorrelationRow> rows;
    rows.push_back(spearman_row("A", a, val));
    rows.push_back(spearman_row("MLH", m, val));
    rows.push_back(spearman_row("-EIC", neg_eic, val));
    rows.push_back(spearman_row("-EIC_scaled", neg_scaled, val));
    if (sr_defined)
        rows.push_back(spearman_row("-EIC_SR", neg_sr, val));
    else
        rows.push_back({"-EIC_SR", std::nullopt});
    return rows;
}

}  // namespace blm
