#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "blm/digits.hpp"

namespace blm {

/// Inverse-temperature sweep of Boltzmann-Gibbs energy samples.
struct ThermoConfig {
    double beta_min = 0.1;
    double beta_max = 10.0;
    int steps = 10000;
    std::uint64_t samples_per_step = 1'000'000;
    std::uint64_t seed = 0;
    double k = 1.0;  // Boltzmann constant, dimensionless

    /// Throws Error(InvalidArgument) on an unusable configuration.
    void validate() const;
    /// Equally spaced betas; the last one is exactly beta_max.
    double beta_at(int step) const;
};

struct ThermoPoint {
    double beta;
    double mlh;
};

struct ThermoCurve {
    std::vector<ThermoPoint> points;
};

/// n i.i.d. draws from f(E) = k*beta * exp(-k*beta*E) by inverse CDF,
/// E = -ln(U) / (k*beta) with U uniform on (0, 1]. Deterministic in seed.
/// U == 1 gives E == 0, which a digit histogram then excludes.
///
/// Throws Error(InvalidArgument) for beta <= 0, k <= 0 or n == 0.
std::vector<double> sample_energies(double beta, std::uint64_t n, std::uint64_t seed, double k = 1.0);

/// Digit histogram of the same samples sample_energies would return,
/// without materializing them.
DigitHistogram energy_histogram(double beta, std::uint64_t n, std::uint64_t seed, double k = 1.0);

/// First-digit distribution of an exponential variable with the given
/// mean (scale = kT): P(d) = sum_n [exp(-d 10^n / s) - exp(-(d+1) 10^n / s)].
/// Entry d-1 holds P(d).
///
/// Throws Error(InvalidArgument) for scale <= 0 or non-finite scale.
std::array<double, 9> exp_digit_pmf(double scale);

/// One MLH per beta. Step i samples from stream_seed(seed, i), so the result
/// does not depend on `threads` (0 = default_thread_count()).
ThermoCurve sweep(const ThermoConfig& config, unsigned threads = 0);

}  // namespace blm
