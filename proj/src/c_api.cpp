#include "blm/c_api.h"

#include <exception>
#include <span>
#include <string>

#include "blm/benford.hpp"
#include "blm/criteria.hpp"
#include "blm/early_stop.hpp"
#include "blm/error.hpp"

struct blm_monitor {
    blm::StopMonitor monitor;
};

namespace {

thread_local std::string g_last_error;

int status_of(blm::ErrorKind kind) {
    using blm::ErrorKind;
    switch (kind) {
        case ErrorKind::InvalidArgument: return BLM_ERR_INVALID_ARGUMENT;
        case ErrorKind::EmptyInput: return BLM_ERR_EMPTY_INPUT;
        case ErrorKind::UndefinedCorrelation: return BLM_ERR_UNDEFINED_CORRELATION;
        case ErrorKind::Domain: return BLM_ERR_DOMAIN;
        case ErrorKind::Usage: return BLM_ERR_USAGE;
        case ErrorKind::InvalidValue: return BLM_ERR_INVALID_VALUE;
        default: return BLM_ERR_OTHER;
    }
}

template <typename Fn>
int guarded(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return BLM_OK;
    } catch (const blm::Error& e) {
        g_last_error = e.what();
        return status_of(e.kind());
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return BLM_ERR_OTHER;
    }
}

template <typename T>
int histogram(const T* data, size_t n, uint64_t* counts, uint64_t* excluded) {
    if ((!data && n) || !counts) {
        g_last_error = "null pointer";
        return BLM_ERR_INVALID_ARGUMENT;
    }
    return guarded([&] {
        const auto h = blm::parallel_digit_histogram(std::span<const T>(data, n));
        for (int d = 0; d < 10; ++d) counts[d] = h.count(d);
        if (excluded) *excluded = h.excluded();
    });
}

template <typename T, typename Fn>
int score(const T* data, size_t n, double* out, Fn&& fn) {
    if ((!data && n) || !out) {
        g_last_error = "null pointer";
        return BLM_ERR_INVALID_ARGUMENT;
    }
    return guarded([&] { *out = fn(blm::parallel_digit_histogram(std::span<const T>(data, n))); });
}

double mlh_value(const blm::DigitHistogram& h) { return blm::mlh(h).value; }

}  // namespace

extern "C" {

const char* blm_last_error(void) { return g_last_error.c_str(); }

int blm_histogram_f32(const float* data, size_t n, uint64_t* counts, uint64_t* excluded) {
    return histogram(data, n, counts, excluded);
}
int blm_histogram_f64(const double* data, size_t n, uint64_t* counts, uint64_t* excluded) {
    return histogram(data, n, counts, excluded);
}

int blm_mlh_f32(const float* data, size_t n, double* out) { return score(data, n, out, mlh_value); }
int blm_mlh_f64(const double* data, size_t n, double* out) { return score(data, n, out, mlh_value); }
int blm_jsd_f32(const float* data, size_t n, double* out) { return score(data, n, out, blm::jsd_benford); }
int blm_jsd_f64(const double* data, size_t n, double* out) { return score(data, n, out, blm::jsd_benford); }

int blm_eic(double train_acc, double mlh, double* out) {
    if (!out) return BLM_ERR_INVALID_ARGUMENT;
    return guarded([&] { *out = blm::eic(train_acc, mlh); });
}

int blm_eic_scaled(double train_acc, double mlh, double* out) {
    if (!out) return BLM_ERR_INVALID_ARGUMENT;
    return guarded([&] { *out = blm::eic_scaled(train_acc, mlh); });
}

int blm_eic_sr(double train_acc, double mlh, double* out) {
    if (!out) return BLM_ERR_INVALID_ARGUMENT;
    return guarded([&] { *out = blm::eic_sr(train_acc, mlh); });
}

blm_monitor* blm_monitor_new(int patience, int mode_max, double min_delta) {
    blm_monitor* m = nullptr;
    const int status = guarded([&] {
        m = new blm_monitor{blm::StopMonitor(
            blm::StopConfig{patience, mode_max ? blm::StopMode::Max : blm::StopMode::Min, min_delta})};
    });
    return status == BLM_OK ? m : nullptr;
}

void blm_monitor_free(blm_monitor* monitor) { delete monitor; }

int blm_monitor_observe(blm_monitor* monitor, double value, int* decision) {
    if (!monitor || !decision) return BLM_ERR_INVALID_ARGUMENT;
    return guarded([&] {
        switch (monitor->monitor.observe(value)) {
            case blm::StopDecision::Improved: *decision = BLM_IMPROVED; break;
            case blm::StopDecision::Continue: *decision = BLM_CONTINUE; break;
            case blm::StopDecision::Stop: *decision = BLM_STOP; break;
        }
    });
}

int blm_monitor_best(const blm_monitor* monitor, double* value, int64_t* step) {
    if (!monitor || !value || !step) return BLM_ERR_INVALID_ARGUMENT;
    return guarded([&] {
        const auto b = monitor->monitor.best();
        *value = b.value;
        *step = b.step;
    });
}

}  // extern "C"
