#pragma once

#include <span>
#include <vector>

namespace blm {

/// Product-moment correlation (population form, two-pass). Symmetric and
/// invariant under positive affine maps of either argument.
///
/// Throws Error(DimensionMismatch) for unequal lengths, Error(InvalidArgument)
/// for fewer than two points and Error(UndefinedCorrelation) when either
/// side is constant relative to its own magnitude.
double pearson_r(std::span<const double> x, std::span<const double> y);

/// 1-based ranks; tied values share the mean of the ranks they span.
std::vector<double> average_ranks(std::span<const double> x);

/// Pearson correlation of the average ranks.
double spearman_r(std::span<const double> x, std::span<const double> y);

}  // namespace blm
