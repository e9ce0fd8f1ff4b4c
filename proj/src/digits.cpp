#include "blm/digits.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <string>

#include "blm/error.hpp"
#include "blm/parallel.hpp"

namespace blm {
namespace {

void require_base(int base) {
    if (base < 2) throw Error(ErrorKind::InvalidArgument, "base must be >= 2, got " + std::to_string(base));
}

// Correctly rounded values of d * 10^e for every normal decade of T. The
// leading digit of the shortest round-trip decimal of a normal x is the d
// with bound(e, d) <= |x| < bound(e, d + 1), where bound(e, 10) is
// bound(e + 1, 1). Stored as T so comparisons happen in the input's own
// precision.
template <typename T>
class DecimalBounds {
public:
    static constexpr int kMinExp = std::numeric_limits<T>::min_exponent10 - 1;
    static constexpr int kMaxExp = std::numeric_limits<T>::max_exponent10;

    DecimalBounds() {
        char buf[32];
        for (int e = kMinExp; e <= kMaxExp; ++e) {
            for (int d = 1; d <= 9; ++d) {
                std::snprintf(buf, sizeof buf, "%de%d", d, e);
                rows_[static_cast<std::size_t>(e - kMinExp)][static_cast<std::size_t>(d)] = parse(buf);
            }
            rows_[static_cast<std::size_t>(e - kMinExp)][10] = std::numeric_limits<T>::infinity();
        }
        for (int e = kMinExp; e < kMaxExp; ++e)
            rows_[static_cast<std::size_t>(e - kMinExp)][10] = rows_[static_cast<std::size_t>(e + 1 - kMinExp)][1];
    }

    T bound(int e, int d) const {
        return rows_[static_cast<std::size_t>(e - kMinExp)][static_cast<std::size_t>(d)];
    }

private:
    static T parse(const char* s) {
        if constexpr (std::is_same_v<T, float>)
            return std::strtof(s, nullptr);
        else
            return std::strtod(s, nullptr);
    }

    std::array<std::array<T, 11>, kMaxExp - kMinExp + 1> rows_{};
};

template <typename T>
const DecimalBounds<T>& decimal_bounds() {
    static const DecimalBounds<T> table;
    return table;
}

template <typename T>
int shortest_repr_digit(T a) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, a);
    (void)res;
    return buf[0] - '0';
}

template <typename T>
int decimal_leading_digit(T a) {
    // Subnormals: several one-digit decimals can round to the same value, so
    // the boundary argument does not hold; ask the shortest printer directly.
    if (a < std::numeric_limits<T>::min()) return shortest_repr_digit(a);

    const auto& t = decimal_bounds<T>();
    using B = DecimalBounds<T>;
    int e = static_cast<int>(std::floor(std::log10(static_cast<double>(a))));
    e = std::clamp(e, B::kMinExp, B::kMaxExp);
    while (e < B::kMaxExp && a >= t.bound(e, 10)) ++e;
    while (e > B::kMinExp && a < t.bound(e, 1)) --e;

    int d = static_cast<int>(static_cast<double>(a) / static_cast<double>(t.bound(e, 1)));
    d = std::clamp(d, 1, 9);
    while (d < 9 && a >= t.bound(e, d + 1)) ++d;
    while (d > 1 && a < t.bound(e, d)) --d;
    return d;
}

int power_of_two_shift(int base) {
    if ((base & (base - 1)) != 0) return 0;
    int s = 0;
    while ((1 << s) < base) ++s;
    return s;
}

int binary_leading_digit(double a, int shift) {
    int k = 0;
    const double m = std::frexp(a, &k);  // a = m * 2^k, m in [0.5, 1)
    const int exp2 = k - 1;              // a = (2m) * 2^exp2
    const int q = exp2 >= 0 ? exp2 / shift : -((-exp2 + shift - 1) / shift);
    const int r = exp2 - q * shift;
    return static_cast<int>(std::floor(std::ldexp(2.0 * m, r)));
}

int generic_leading_digit(double a, int base) {
    const long double la = a;
    const long double lb = base;
    long double e = std::floor(std::log(la) / std::log(lb));
    long double p = std::pow(lb, e);
    if (la < p) {
        e -= 1;
        p = std::pow(lb, e);
    } else if (la >= p * lb) {
        e += 1;
        p = std::pow(lb, e);
    }
    int d = static_cast<int>(std::floor(la / p));
    return std::clamp(d, 1, base - 1);
}

template <typename T>
std::optional<int> leading_digit_impl(T x, int base) {
    if (x == T(0) || !std::isfinite(x)) return std::nullopt;
    const T a = std::fabs(x);
    if (base == 10) return decimal_leading_digit(a);
    if (const int s = power_of_two_shift(base); s > 0) return binary_leading_digit(static_cast<double>(a), s);
    return generic_leading_digit(static_cast<double>(a), base);
}

template <typename T>
DigitHistogram parallel_impl(std::span<const T> values, int base, unsigned threads) {
    require_base(base);
    if (threads == 0) threads = default_thread_count();
    // Below this size thread start-up dominates.
    constexpr std::size_t kMinPerThread = 1 << 16;
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(1, values.size() / kMinPerThread)));
    std::vector<DigitHistogram> partial(threads, DigitHistogram(base));
    parallel_chunks(values.size(), threads, [&](std::size_t c, std::size_t begin, std::size_t end) {
        partial[c].add(values.subspan(begin, end - begin));
    });
    DigitHistogram out(base);
    for (const auto& h : partial) out += h;
    return out;
}

}  // namespace

std::optional<int> leading_digit(double x, int base) {
    require_base(base);
    return leading_digit_impl(x, base);
}

DigitHistogram::DigitHistogram(int base) : base_(base) {
    require_base(base);
    counts_.assign(static_cast<std::size_t>(base), 0);
}

std::vector<double> DigitHistogram::proportions() const {
    std::vector<double> p(counts_.size(), 0.0);
    if (total_ == 0) return p;
    for (std::size_t i = 0; i < counts_.size(); ++i)
        p[i] = static_cast<double>(counts_[i]) / static_cast<double>(total_);
    return p;
}

void DigitHistogram::add(double x) {
    if (auto d = leading_digit_impl(x, base_)) {
        ++counts_[static_cast<std::size_t>(*d)];
        ++total_;
    } else {
        ++excluded_;
    }
}

void DigitHistogram::add(std::span<const double> xs) {
    for (double x : xs) add(x);
}

void DigitHistogram::add(std::span<const float> xs) {
    for (float x : xs) {
        if (auto d = leading_digit_impl(x, base_)) {
            ++counts_[static_cast<std::size_t>(*d)];
            ++total_;
        } else {
            ++excluded_;
        }
    }
}

DigitHistogram DigitHistogram::from_counts(int base, std::span<const std::uint64_t> counts,
                                           std::uint64_t excluded) {
    DigitHistogram h(base);
    if (counts.size() != h.counts_.size())
        throw Error(ErrorKind::DimensionMismatch, "histogram needs " + std::to_string(base) + " slots, got " +
                                                      std::to_string(counts.size()));
    if (counts[0] != 0) throw Error(ErrorKind::InvalidArgument, "digit slot 0 must be empty");
    for (std::size_t i = 0; i < counts.size(); ++i) {
        h.counts_[i] = counts[i];
        h.total_ += counts[i];
    }
    h.excluded_ = excluded;
    return h;
}

DigitHistogram& DigitHistogram::operator+=(const DigitHistogram& other) {
    if (other.base_ != base_)
        throw Error(ErrorKind::DimensionMismatch, "cannot merge histograms of different bases");
    for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
    total_ += other.total_;
    excluded_ += other.excluded_;
    return *this;
}

DigitHistogram digit_histogram(std::span<const double> values, int base) {
    DigitHistogram h(base);
    h.add(values);
    return h;
}

DigitHistogram digit_histogram(std::span<const float> values, int base) {
    DigitHistogram h(base);
    h.add(values);
    return h;
}

DigitHistogram parallel_digit_histogram(std::span<const double> values, int base, unsigned threads) {
    return parallel_impl(values, base, threads);
}

DigitHistogram parallel_digit_histogram(std::span<const float> values, int base, unsigned threads) {
    return parallel_impl(values, base, threads);
}

}  // namespace blm
