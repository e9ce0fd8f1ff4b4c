#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

namespace blm {

enum class StopMode { Max, Min };

struct StopConfig {
    int patience = 15;
    StopMode mode = StopMode::Max;
    double min_delta = 0.0;

    /// Throws Error(InvalidArgument) for patience < 1 or negative/non-finite min_delta.
    void validate() const;
};

enum class StopDecision { Improved, Continue, Stop };

std::string_view to_string(StopDecision d) noexcept;

struct BestObservation {
    double value;
    std::int64_t step;
};

/// Patience-based stopping on a scalar criterion. An observation improves
/// only if it beats the best so far by strictly more than min_delta; ties
/// count against patience. Steps are 0-based observation indices.
///
/// Single writer: not safe for concurrent observe().
class StopMonitor {
public:
    explicit StopMonitor(StopConfig config = {});

    /// Throws Error(Usage) after a Stop, Error(InvalidValue) for NaN/inf.
    StopDecision observe(double value);

    /// Throws Error(Usage) before the first observation.
    BestObservation best() const;

    const StopConfig& config() const noexcept { return config_; }
    int bad_count() const noexcept { return bad_count_; }
    std::int64_t step() const noexcept { return step_; }
    bool stopped() const noexcept { return stopped_; }

private:
    bool improves(double value) const;

    StopConfig config_;
    std::optional<BestObservation> best_;
    int bad_count_ = 0;
    std::int64_t step_ = 0;
    bool stopped_ = false;
};

}  // namespace blm
