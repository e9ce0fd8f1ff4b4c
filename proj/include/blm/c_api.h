/* Flat C interface over the blm core for foreign-language bindings.
 *
 * Every function returns BLM_OK or an error status; the message for the last
 * failure on the calling thread is available from blm_last_error(). All
 * functions except the monitor ones are pure and thread-safe. */
#ifndef BLM_C_API_H
#define BLM_C_API_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

enum blm_status {
    BLM_OK = 0,
    BLM_ERR_INVALID_ARGUMENT = 1,
    BLM_ERR_EMPTY_INPUT = 2,
    BLM_ERR_UNDEFINED_CORRELATION = 3,
    BLM_ERR_DOMAIN = 4,
    BLM_ERR_USAGE = 5,
    BLM_ERR_INVALID_VALUE = 6,
    BLM_ERR_OTHER = 99
};

enum blm_decision { BLM_IMPROVED = 0, BLM_CONTINUE = 1, BLM_STOP = 2 };

const char* blm_last_error(void);

/* counts must hold 10 entries (digits 0..9; slot 0 stays 0). */
int blm_histogram_f32(const float* data, size_t n, uint64_t* counts, uint64_t* excluded);
int blm_histogram_f64(const double* data, size_t n, uint64_t* counts, uint64_t* excluded);

int blm_mlh_f32(const float* data, size_t n, double* out);
int blm_mlh_f64(const double* data, size_t n, double* out);
int blm_jsd_f32(const float* data, size_t n, double* out);
int blm_jsd_f64(const double* data, size_t n, double* out);

int blm_eic(double train_acc, double mlh, double* out);
/* Uses the default scaling constants. */
int blm_eic_scaled(double train_acc, double mlh, double* out);
int blm_eic_sr(double train_acc, double mlh, double* out);

typedef struct blm_monitor blm_monitor;

/* mode_max: nonzero for "higher is better". Returns NULL on bad arguments. */
blm_monitor* blm_monitor_new(int patience, int mode_max, double min_delta);
void blm_monitor_free(blm_monitor* monitor);
int blm_monitor_observe(blm_monitor* monitor, double value, int* decision);
int blm_monitor_best(const blm_monitor* monitor, double* value, int64_t* step);

#ifdef __cplusplus
}
#endif

#endif /* BLM_C_API_H */
