#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "blm/digits.hpp"

namespace blm {

enum class BenfordTable {
    Exact,    ///< log_b(1 + 1/d)
    Rounded,  ///< the widely quoted base-10 percentages {30.1, 17.6, ...} / 100
};

/// Reference first-digit distribution for a base; probs()[d - 1] = P(d).
class BenfordPmf {
public:
    int base() const noexcept { return base_; }
    std::span<const double> probs() const noexcept { return probs_; }
    double operator()(int digit) const { return probs_.at(static_cast<std::size_t>(digit - 1)); }

private:
    friend BenfordPmf benford_pmf(int base, BenfordTable table);
    int base_ = 10;
    std::vector<double> probs_;
};

/// Throws Error(InvalidArgument) for base < 2, or for Rounded with base != 10.
BenfordPmf benford_pmf(int base = 10, BenfordTable table = BenfordTable::Exact);

struct MlhScore {
    double value = 0.0;
    std::uint64_t n_values = 0;
};

/// Pearson correlation between digit proportions 1..base-1 and the Benford
/// pmf of the histogram's base.
/// Throws Error(EmptyInput) when fewer than 2 values were counted and
/// Throws Error(EmptyInput) when nothing was counted and
/// Error(UndefinedCorrelation) when the proportions are constant (or the
/// base has a single significant digit).
MlhScore mlh(const DigitHistogram& hist, BenfordTable table = BenfordTable::Exact);
MlhScore mlh(std::span<const double> values, int base = 10, BenfordTable table = BenfordTable::Exact);
MlhScore mlh(std::span<const float> values, int base = 10, BenfordTable table = BenfordTable::Exact);

/// MLH of an already-normalized digit distribution over 1..base-1
/// (base - 1 entries), e.g. an analytic pmf.
double mlh_of_distribution(std::span<const double> digit_probs, BenfordTable table = BenfordTable::Exact);

/// Jensen-Shannon divergence (log base 2, so in [0, 1]) between the
/// renormalized digit proportions 1..base-1 and the exact Benford pmf.
double jsd_benford(const DigitHistogram& hist);

/// JS divergence of two discrete distributions of equal length.
double jensen_shannon(std::span<const double> p, std::span<const double> q);

}  // namespace blm
