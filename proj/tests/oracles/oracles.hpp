#pragma once

// Test-only reference implementations. Each one takes a deliberately
// different route from the library code it checks: digit extraction through
// printed strings, correlations through long double textbook sums, linear
// algebra through Gaussian elimination, distributions through quadrature.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace oracle {

/// First character of the shortest "%.*e" rendering that parses back to x.
inline std::optional<int> string_leading_digit(double x) {
    if (x == 0.0 || !std::isfinite(x)) return std::nullopt;
    char buf[64];
    for (int prec = 0; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*e", prec, std::fabs(x));
        if (std::strtod(buf, nullptr) == std::fabs(x)) return buf[0] - '0';
    }
    return std::nullopt;
}

inline std::optional<int> string_leading_digit(float x) {
    if (x == 0.0f || !std::isfinite(x)) return std::nullopt;
    char buf[64];
    for (int prec = 0; prec <= 9; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*e", prec, static_cast<double>(std::fabs(x)));
        if (std::strtof(buf, nullptr) == std::fabs(x)) return buf[0] - '0';
    }
    return std::nullopt;
}

template <typename T>
std::vector<double> string_digit_proportions(std::span<const T> xs) {
    std::vector<double> counts(10, 0.0);
    double total = 0.0;
    for (T x : xs)
        if (auto d = string_leading_digit(x)) {
            counts[static_cast<std::size_t>(*d)] += 1.0;
            total += 1.0;
        }
    for (double& c : counts) c /= total;
    return counts;
}

/// r = sum((x-mx)(y-my)) / sqrt(sum((x-mx)^2) sum((y-my)^2)) in long double.
inline double pearson(std::span<const double> x, std::span<const double> y) {
    long double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= x.size();
    my /= y.size();
    long double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    return static_cast<double>(sxy / std::sqrt(sxx * syy));
}

/// O(n^2) average ranks: 1 + #smaller + (#equal - 1) / 2.
inline std::vector<double> ranks(std::span<const double> x) {
    std::vector<double> r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        double less = 0, equal = 0;
        for (double v : x) {
            if (v < x[i]) less += 1;
            if (v == x[i]) equal += 1;
        }
        r[i] = 1.0 + less + (equal - 1.0) / 2.0;
    }
    return r;
}

inline double spearman(std::span<const double> x, std::span<const double> y) {
    const auto rx = ranks(x);
    const auto ry = ranks(y);
    return pearson(rx, ry);
}

using Matrix = std::vector<std::vector<long double>>;

/// Gaussian elimination with partial pivoting: log|det A| and A^-1.
inline void log_det_and_inverse(Matrix a, long double& log_det, Matrix& inv) {
    const std::size_t n = a.size();
    inv.assign(n, std::vector<long double>(n, 0));
    for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
    log_det = 0;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::fabs(a[r][c]) > std::fabs(a[piv][c])) piv = r;
        std::swap(a[c], a[piv]);
        std::swap(inv[c], inv[piv]);
        log_det += std::log(std::fabs(a[c][c]));
        const long double p = a[c][c];
        for (std::size_t k = 0; k < n; ++k) {
            a[c][k] /= p;
            inv[c][k] /= p;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c) continue;
            const long double f = a[r][c];
            if (f == 0) continue;
            for (std::size_t k = 0; k < n; ++k) {
                a[r][k] -= f * a[c][k];
                inv[r][k] -= f * inv[c][k];
            }
        }
    }
}

/// -1/2 y'C^-1 y - 1/2 log|C| - n/2 log 2pi with C = sf2 * RBF + (noise + jitter) I,
/// y centered and sf2 = var(y) (1 when constant), rows of x as points.
inline double gp_log_marginal_likelihood(const std::vector<std::vector<double>>& x, std::vector<double> y,
                                         double length_scale, double noise, double jitter) {
    const std::size_t n = y.size();
    long double mean = 0;
    for (double v : y) mean += v;
    mean /= n;
    long double var = 0;
    for (double& v : y) {
        v = static_cast<double>(v - mean);
        var += static_cast<long double>(v) * v;
    }
    var /= n;
    if (!(var > 0)) var = 1;
    Matrix c(n, std::vector<long double>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            long double d2 = 0;
            for (std::size_t k = 0; k < x[i].size(); ++k) d2 += (x[i][k] - x[j][k]) * (x[i][k] - x[j][k]);
            c[i][j] = var * std::exp(-d2 / (2.0L * length_scale * length_scale));
            if (i == j) c[i][j] += noise + jitter;
        }
    long double log_det = 0;
    Matrix inv;
    log_det_and_inverse(c, log_det, inv);
    long double quad = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) quad += y[i] * inv[i][j] * y[j];
    return static_cast<double>(-0.5L * quad - 0.5L * log_det - 0.5L * n * std::log(2.0L * std::numbers::pi_v<long double>));
}

/// Closed-form JSD (bits) between a point mass on digit 1 and Benford.
inline double jsd_point_mass_digit1() {
    const double p1 = std::log10(2.0);
    // KL(delta || M) = log2(2 / (1 + p1)); KL(P || M) = p1 log2(2 p1 / (1 + p1)) + (1 - p1)
    return 0.5 * std::log2(2.0 / (1.0 + p1)) + 0.5 * (p1 * std::log2(2.0 * p1 / (1.0 + p1)) + (1.0 - p1));
}

/// Probability that |N(0, sigma)| has leading digit d, summed exactly over decades.
inline std::vector<double> half_normal_digit_pmf(double sigma) {
    std::vector<double> p(9, 0.0);
    for (int d = 1; d <= 9; ++d)
        for (int n = -30; n <= 5; ++n) {
            const double lo = d * std::pow(10.0, n) / (sigma * std::sqrt(2.0));
            const double hi = (d + 1) * std::pow(10.0, n) / (sigma * std::sqrt(2.0));
            p[static_cast<std::size_t>(d - 1)] += std::erfc(lo) - std::erfc(hi);
        }
    return p;
}

/// Composite Gauss-Legendre (5 nodes, `panels` panels) of f over [a, b].
inline long double integrate(const std::function<long double(long double)>& f, long double a, long double b,
                             int panels) {
    static const long double nodes[5] = {-0.9061798459386639927976L, -0.5384693101056830910363L, 0.0L,
                                         0.5384693101056830910363L, 0.9061798459386639927976L};
    static const long double weights[5] = {0.2369268850561890875143L, 0.4786286704993664680413L,
                                           0.5688888888888888888889L, 0.4786286704993664680413L,
                                           0.2369268850561890875143L};
    const long double h = (b - a) / panels;
    long double sum = 0;
    for (int i = 0; i < panels; ++i) {
        const long double mid = a + (i + 0.5L) * h;
        for (int k = 0; k < 5; ++k) sum += weights[k] * f(mid + 0.5L * h * nodes[k]);
    }
    return sum * 0.5L * h;
}

/// P(leading digit = d) for Exp(mean = scale), by quadrature of the density
/// over each band [d 10^n, (d+1) 10^n).
inline double exp_digit_probability_quadrature(int d, double scale) {
    const long double s = scale;
    auto density = [s](long double e) { return std::exp(-e / s) / s; };
    long double total = 0;
    for (int n = -14; n <= 3; ++n) {
        const long double lo = d * std::pow(10.0L, n);
        const long double hi = (d + 1) * std::pow(10.0L, n);
        total += integrate(density, lo, hi, 200);
    }
    return static_cast<double>(total);
}

}  // namespace oracle
