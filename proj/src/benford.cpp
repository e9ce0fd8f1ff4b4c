#include "blm/benford.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "blm/error.hpp"
#include "blm/stats.hpp"

namespace blm {

BenfordPmf benford_pmf(int base, BenfordTable table) {
    if (base < 2) throw Error(ErrorKind::InvalidArgument, "benford_pmf: base must be >= 2, got " + std::to_string(base));
    BenfordPmf pmf;
    pmf.base_ = base;
    if (table == BenfordTable::Rounded) {
        if (base != 10) throw Error(ErrorKind::InvalidArgument, "benford_pmf: rounded table exists only for base 10");
        pmf.probs_ = {0.301, 0.176, 0.125, 0.097, 0.079, 0.067, 0.058, 0.051, 0.046};
        return pmf;
    }
    pmf.probs_.resize(static_cast<std::size_t>(base - 1));
    const double log_base = std::log(static_cast<double>(base));
    for (int d = 1; d < base; ++d)
        pmf.probs_[static_cast<std::size_t>(d - 1)] = std::log1p(1.0 / d) / log_base;
    return pmf;
}

double mlh_of_distribution(std::span<const double> digit_probs, BenfordTable table) {
    const int base = static_cast<int>(digit_probs.size()) + 1;
    const auto pmf = benford_pmf(base, table);
    if (digit_probs.size() < 2)
        throw Error(ErrorKind::UndefinedCorrelation, "MLH undefined: base " + std::to_string(base) +
                                                         " has a single significant digit");
    return pearson_r(digit_probs, pmf.probs());
}

MlhScore mlh(const DigitHistogram& hist, BenfordTable table) {
    if (hist.total() == 0) throw Error(ErrorKind::EmptyInput, "MLH: no countable values");
    if (hist.total() < 2) throw Error(ErrorKind::EmptyInput, "MLH: need at least 2 countable values");
    const auto p = hist.proportions();
    return {mlh_of_distribution(std::span(p).subspan(1), table), hist.total()};
}

MlhScore mlh(std::span<const double> values, int base, BenfordTable table) {
    return mlh(parallel_digit_histogram(values, base), table);
}

MlhScore mlh(std::span<const float> values, int base, BenfordTable table) {
    return mlh(parallel_digit_histogram(values, base), table);
}

double jensen_shannon(std::span<const double> p, std::span<const double> q) {
    if (p.size() != q.size()) throw Error(ErrorKind::DimensionMismatch, "jensen_shannon: lengths differ");
    double js = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double m = 0.5 * (p[i] + q[i]);
        if (p[i] > 0.0) js += 0.5 * p[i] * std::log2(p[i] / m);
        if (q[i] > 0.0) js += 0.5 * q[i] * std::log2(q[i] / m);
    }
    return std::clamp(js, 0.0, 1.0);
}

double jsd_benford(const DigitHistogram& hist) {
    if (hist.total() == 0) throw Error(ErrorKind::EmptyInput, "JSD: no countable values");
    const auto pmf = benford_pmf(hist.base());
    std::vector<double> p(hist.counts().begin() + 1, hist.counts().end());
    for (double& v : p) v /= static_cast<double>(hist.total());
    return jensen_shannon(p, pmf.probs());
}

}  // namespace blm
