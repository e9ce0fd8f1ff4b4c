#include "blm/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "blm/error.hpp"

namespace blm {
namespace {

// A side counts as constant when its spread is below this fraction of its
// largest magnitude; catches e.g. [0.1, 0.1, 0.1] whose mean is inexact.
constexpr double kRelativeSpreadFloor = 1e-15;

}  // namespace

double pearson_r(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size())
        throw Error(ErrorKind::DimensionMismatch, "pearson_r: lengths differ (" + std::to_string(x.size()) + " vs " +
                                                      std::to_string(y.size()) + ")");
    if (x.size() < 2) throw Error(ErrorKind::InvalidArgument, "pearson_r: need at least 2 points");

    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxx = 0.0, syy = 0.0, sxy = 0.0, ax = 0.0, ay = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
        ax = std::max(ax, std::fabs(x[i]));
        ay = std::max(ay, std::fabs(y[i]));
    }
    const double sx = std::sqrt(sxx / n);
    const double sy = std::sqrt(syy / n);
    if (!(sx > kRelativeSpreadFloor * ax) || !(sy > kRelativeSpreadFloor * ay))
        throw Error(ErrorKind::UndefinedCorrelation, "pearson_r: zero variance");
    const double r = (sxy / n) / (sx * sy);
    return std::clamp(r, -1.0, 1.0);
}

std::vector<double> average_ranks(std::span<const double> x) {
    std::vector<std::size_t> order(x.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
    std::vector<double> ranks(x.size());
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i + 1;
        while (j < order.size() && x[order[j]] == x[order[i]]) ++j;
        // positions i..j-1 hold ranks i+1..j
        const double rank = 0.5 * static_cast<double>(i + 1 + j);
        for (std::size_t k = i; k < j; ++k) ranks[order[k]] = rank;
        i = j;
    }
    return ranks;
}

double spearman_r(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size())
        throw Error(ErrorKind::DimensionMismatch, "spearman_r: lengths differ (" + std::to_string(x.size()) + " vs " +
                                                      std::to_string(y.size()) + ")");
    const auto rx = average_ranks(x);
    const auto ry = average_ranks(y);
    return pearson_r(rx, ry);
}

}  // namespace blm
