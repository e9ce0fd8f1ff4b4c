#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace blm {

/// One evaluation point of a training run.
struct RunRecord {
    std::int64_t step = 0;
    double train_accuracy = 0.0;  // A, in [0, 1]
    double mlh = 0.0;             // in [-1, 1]
    std::optional<double> val_accuracy;

    /// Throws Error(InvalidValue) when a field is out of range.
    void validate() const;
};

/// Min-max constants used to rescale MLH before adding it to accuracy.
struct ScalingConstants {
    double mlh_min = 0.9462;
    double mlh_range = 0.9999 - 0.9462;

    /// Range taken as max - min in floating point, so mlh == max maps to 1 exactly.
    static ScalingConstants from_extremes(double mlh_min, double mlh_max) { return {mlh_min, mlh_max - mlh_min}; }
};

/// -A - mlh
double eic(double train_accuracy, double mlh);

/// -A - (mlh - min) / range. Throws Error(InvalidArgument) if range <= 0.
double eic_scaled(double train_accuracy, double mlh, const ScalingConstants& c = {});

/// -ln(mlh) / A. Throws Error(Domain) for mlh <= 0 or A <= 0.
double eic_sr(double train_accuracy, double mlh);

/// -2 ln L + 2p. Throws Error(Domain) for L <= 0.
double aic(double likelihood, std::int64_t n_params);

/// -2 ln L + 2p ln n (the doubled penalty form). Throws Error(Domain) for
/// L <= 0 or n < 1.
double bic(double likelihood, std::int64_t n_params, std::int64_t n_points);

struct CorrelationRow {
    std::string metric;
    /// Spearman correlation with validation accuracy; empty when undefined
    /// (constant metric, or a criterion outside its domain for some record).
    std::optional<double> spearman;
};

/// Spearman of `metric` against `target`, empty instead of throwing when
/// the correlation is undefined.
CorrelationRow spearman_row(std::string name, std::span<const double> metric, std::span<const double> target);

/// Rows A, MLH, -EIC, -EIC_scaled, -EIC_SR, each against val_accuracy.
///
/// Throws Error(InvalidValue) if a record lacks val_accuracy and
/// Error(InvalidArgument) for fewer than 3 records.
std::vector<CorrelationRow> correlation_table(std::span<const RunRecord> records, const ScalingConstants& c = {});

}  // namespace blm
