/* C interface to the INGRAIN trajectory imputation/prediction library.
 *
 * All functions return 0 on success, 1 on configuration/usage errors, and 2
 * on runtime errors; ingrain_last_error() describes the most recent failure
 * on the calling thread. Handles are opaque and must be released with their
 * destroy function.
 */
#ifndef INGRAIN_H
#define INGRAIN_H

#ifdef __cplusplus
extern "C" {
#endif

typedef struct ingrain_config ingrain_config;

#define INGRAIN_OK 0
#define INGRAIN_ERR_CONFIG 1
#define INGRAIN_ERR_RUNTIME 2

/* Create a configuration with default values. */
int ingrain_config_create(ingrain_config** out);

/* Load a flat `key = value` configuration file. */
int ingrain_config_load(const char* path, ingrain_config** out);

/* Override one key; unknown keys and bad values are rejected. */
int ingrain_config_set(ingrain_config* cfg, const char* key, const char* value);

/* Full cross-field validation (also performed by every run function). */
int ingrain_config_validate(const ingrain_config* cfg);

void ingrain_config_destroy(ingrain_config* cfg);

/* Write a synthetic trajectory CSV (user_id,timestamp,lat,lon). */
int ingrain_synth(const ingrain_config* cfg, const char* out_csv);

/* Train once per configured seed; writes model_seed<N>.bin and
 * train_log_seed<N>.csv under out_dir. When summary_out is non-NULL it
 * receives a malloc'd mean-of-best summary the caller frees with
 * ingrain_free(). */
int ingrain_train(const ingrain_config* cfg, const char* data_csv, const char* out_dir,
                  char** summary_out);

/* Evaluate a trained model plus baselines; writes the metrics CSV
 * (missing_rate,method,task,loss). */
int ingrain_eval(const ingrain_config* cfg, const char* model_path, const char* data_csv,
                 const char* out_csv);

/* Hyperparameter sweep over the configured axis; writes sweep.csv. */
int ingrain_sweep(const ingrain_config* cfg, const char* data_csv, const char* out_dir);

/* Message for the last failing call on this thread; empty string if none. */
const char* ingrain_last_error(void);

void ingrain_free(char* p);

#ifdef __cplusplus
}
#endif

#endif /* INGRAIN_H */
