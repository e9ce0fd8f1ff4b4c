#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace blm {

/// First significant digit of |x| in `base`, or nullopt for zero, inf and NaN.
///
/// Base 10 agrees exactly with the first character of the shortest
/// round-trip decimal representation of x (what `std::to_chars` prints).
/// Power-of-two bases are exact on the binary value. Other bases use a
/// logarithm estimate corrected against long double digit boundaries.
///
/// Throws Error(InvalidArgument) for base < 2.
std::optional<int> leading_digit(double x, int base = 10);

/// Counts of leading digits. Slot 0 exists for layout compatibility with a
/// 0..base-1 bin vector and is always zero.
class DigitHistogram {
public:
    explicit DigitHistogram(int base = 10);

    int base() const noexcept { return base_; }
    std::span<const std::uint64_t> counts() const noexcept { return counts_; }
    std::uint64_t count(int digit) const { return counts_.at(static_cast<std::size_t>(digit)); }
    std::uint64_t total() const noexcept { return total_; }
    std::uint64_t excluded() const noexcept { return excluded_; }

    /// counts / total for slots 0..base-1; all zeros when total == 0.
    std::vector<double> proportions() const;

    void add(double x);
    void add(std::span<const double> xs);
    void add(std::span<const float> xs);

    /// Builds a histogram straight from digit counts (slot 0 must be zero).
    static DigitHistogram from_counts(int base, std::span<const std::uint64_t> counts,
                                      std::uint64_t excluded = 0);

    DigitHistogram& operator+=(const DigitHistogram& other);
    friend DigitHistogram operator+(DigitHistogram a, const DigitHistogram& b) { return a += b; }
    friend bool operator==(const DigitHistogram&, const DigitHistogram&) = default;

private:
    int base_;
    std::vector<std::uint64_t> counts_;
    std::uint64_t total_ = 0;
    std::uint64_t excluded_ = 0;
};

DigitHistogram digit_histogram(std::span<const double> values, int base = 10);
DigitHistogram digit_histogram(std::span<const float> values, int base = 10);

/// Same result as digit_histogram, computed over `threads` contiguous
/// partitions. threads == 0 means default_thread_count().
DigitHistogram parallel_digit_histogram(std::span<const double> values, int base = 10,
                                        unsigned threads = 0);
DigitHistogram parallel_digit_histogram(std::span<const float> values, int base = 10,
                                        unsigned threads = 0);

}  // namespace blm
