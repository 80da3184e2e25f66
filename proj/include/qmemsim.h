/* qmemsim — exact and Monte Carlo simulator of an atomic-ensemble quantum
 * memory for single polarization photons.
 *
 * C API over the C++ core: opaque handles, integer status codes, strings
 * owned by the library and released with qms_string_free. All functions are
 * safe to call from multiple threads as long as each handle is used from one
 * thread at a time.
 */
#ifndef QMEMSIM_H
#define QMEMSIM_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#define QMS_OK 0
#define QMS_ERR_CONFIG 1
#define QMS_ERR_RUNTIME 2
#define QMS_ERR_INVALID_ARG 3

typedef struct qms_experiment qms_experiment;

const char* qms_version(void);

/* Fresh experiment with default configuration. Never returns NULL except on
 * allocation failure. */
qms_experiment* qms_experiment_create(void);
void qms_experiment_destroy(qms_experiment* exp);

/* Loads a flat "key = value" config file, replacing the current config. */
int qms_experiment_load_config(qms_experiment* exp, const char* path);

/* Sets one config key, same names as the config file. */
int qms_experiment_set(qms_experiment* exp, const char* key, const char* value);

/* Message for the most recent failing call on this handle; owned by the
 * handle, valid until the next call. */
const char* qms_experiment_last_error(const qms_experiment* exp);

/* JSON array of {key, message, severity} diagnostics; empty array means the
 * config is runnable. Caller frees with qms_string_free. */
char* qms_experiment_validate(qms_experiment* exp);

/* JSON object mapping outcome class to exact probability, computed by full
 * enumeration. Caller frees with qms_string_free; NULL on error. */
char* qms_experiment_exact_probabilities(qms_experiment* exp);

/* Runs the experiment and writes report files into out_dir.
 *   mode:    "exact", "montecarlo", or "both"
 *   formats: comma-separated subset of "json,csv" (NULL means "json")
 * Returns QMS_OK / QMS_ERR_CONFIG / QMS_ERR_RUNTIME. */
int qms_experiment_run(qms_experiment* exp, const char* mode, const char* out_dir,
                       const char* formats);

void qms_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* QMEMSIM_H */
