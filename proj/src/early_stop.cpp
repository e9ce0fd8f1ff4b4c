#include "blm/early_stop.hpp"

#include <cmath>

#include "blm/error.hpp"

namespace blm {

void StopConfig::validate() const {
    if (patience < 1) throw Error(ErrorKind::InvalidArgument, "patience must be >= 1");
    if (!(min_delta >= 0.0) || !std::isfinite(min_delta))
        throw Error(ErrorKind::InvalidArgument, "min_delta must be finite and >= 0");
}

std::string_view to_string(StopDecision d) noexcept {
    switch (d) {
        case StopDecision::Improved: return "IMPROVED";
        case StopDecision::Continue: return "CONTINUE";
        case StopDecision::Stop: return "STOP";
    }
    return "UNKNOWN";
}

StopMonitor::StopMonitor(StopConfig config) : config_(config) { config_.validate(); }

bool StopMonitor::improves(double value) const {
    if (!best_) return true;
    if (config_.mode == StopMode::Max) return value - best_->value > config_.min_delta;
    return best_->value - value > config_.min_delta;
}

StopDecision StopMonitor::observe(double value) {
    if (stopped_) throw Error(ErrorKind::Usage, "observe() called after the monitor stopped");
    if (!std::isfinite(value)) throw Error(ErrorKind::InvalidValue, "observed value is not finite");

    const std::int64_t step = step_++;
    if (improves(value)) {
        best_ = BestObservation{value, step};
        bad_count_ = 0;
        return StopDecision::Improved;
    }
    if (++bad_count_ >= config_.patience) {
        stopped_ = true;
        return StopDecision::Stop;
    }
    return StopDecision::Continue;
}

BestObservation StopMonitor::best() const {
    if (!best_) throw Error(ErrorKind::Usage, "best() called before any observation");
    return *best_;
}

}  // namespace blm
