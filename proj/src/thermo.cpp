#include "blm/thermo.hpp"

#include <cmath>
#include <string>

#include "blm/benford.hpp"
#include "blm/error.hpp"
#include "blm/parallel.hpp"
#include "blm/rng.hpp"

namespace blm {
namespace {

void check_sampling(double beta, std::uint64_t n, double k) {
    if (!(beta > 0.0) || !std::isfinite(beta)) throw Error(ErrorKind::InvalidArgument, "beta must be positive and finite");
    if (!(k > 0.0) || !std::isfinite(k)) throw Error(ErrorKind::InvalidArgument, "k must be positive and finite");
    if (n == 0) throw Error(ErrorKind::InvalidArgument, "need at least one sample");
}

template <typename Sink>
void draw_energies(double beta, std::uint64_t n, std::uint64_t seed, double k, Sink&& sink) {
    check_sampling(beta, n, k);
    const double kT = 1.0 / (k * beta);
    Rng rng(seed);
    for (std::uint64_t i = 0; i < n; ++i) sink(-std::log(rng.uniform_open_closed()) * kT);
}

}  // namespace

void ThermoConfig::validate() const {
    if (!(beta_min > 0.0) || !std::isfinite(beta_min)) throw Error(ErrorKind::InvalidArgument, "beta_min must be positive");
    if (!(beta_min < beta_max) || !std::isfinite(beta_max))
        throw Error(ErrorKind::InvalidArgument, "beta_min must be below beta_max");
    if (steps < 2) throw Error(ErrorKind::InvalidArgument, "steps must be >= 2");
    if (samples_per_step < 2) throw Error(ErrorKind::InvalidArgument, "samples_per_step must be >= 2");
    if (!(k > 0.0) || !std::isfinite(k)) throw Error(ErrorKind::InvalidArgument, "k must be positive");
}

double ThermoConfig::beta_at(int step) const {
    if (step == steps - 1) return beta_max;
    return beta_min + (beta_max - beta_min) * static_cast<double>(step) / static_cast<double>(steps - 1);
}

std::vector<double> sample_energies(double beta, std::uint64_t n, std::uint64_t seed, double k) {
    check_sampling(beta, n, k);
    std::vector<double> out;
    out.reserve(n);
    draw_energies(beta, n, seed, k, [&](double e) { out.push_back(e); });
    return out;
}

DigitHistogram energy_histogram(double beta, std::uint64_t n, std::uint64_t seed, double k) {
    DigitHistogram h(10);
    draw_energies(beta, n, seed, k, [&](double e) { h.add(e); });
    return h;
}

std::array<double, 9> exp_digit_pmf(double scale) {
    if (!(scale > 0.0) || !std::isfinite(scale))
        throw Error(ErrorKind::InvalidArgument, "exp_digit_pmf: scale must be positive and finite");
    // Magnitude bands with 10^n / scale below 1e-19 contribute about
    // 10^n / scale each (geometric tail < 1e-18); above ~1e4 exp() is zero.
    const int q = static_cast<int>(std::floor(std::log10(scale)));
    std::array<double, 9> p{};
    for (int n = q + 4; n >= q - 19; --n) {
        const double u = std::pow(10.0, n) / scale;
        const double band = -std::expm1(-u);  // 1 - exp(-u)
        for (int d = 1; d <= 9; ++d)
            p[static_cast<std::size_t>(d - 1)] += std::exp(-d * u) * band;  // exp(-d u) - exp(-(d+1) u)
    }
    return p;
}

ThermoCurve sweep(const ThermoConfig& config, unsigned threads) {
    config.validate();
    ThermoCurve curve;
    curve.points.resize(static_cast<std::size_t>(config.steps));
    parallel_chunks(curve.points.size(), threads, [&](std::size_t, std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const double beta = config.beta_at(static_cast<int>(i));
            const auto h = energy_histogram(beta, config.samples_per_step, stream_seed(config.seed, i), config.k);
            curve.points[i] = {beta, mlh(h).value};
        }
    });
    return curve;
}

}  // namespace blm
