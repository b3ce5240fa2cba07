#pragma once
#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

/* Degenerate parabolic-hyperbolic SPDE toolbox: C surface of the solver and
 * experiment pipelines. All entry points return a dph_status; on failure the
 * thread-local message from dph_last_error() describes the cause. */

typedef enum dph_status {
  DPH_OK = 0,
  DPH_ERR_CONFIG = 1,  /* unusable configuration or input file */
  DPH_ERR_NUMERIC = 2, /* solver or check broke down numerically */
  DPH_ERR_CHECK = 3    /* pipeline ran but an acceptance check failed */
} dph_status;

typedef struct dph_config dph_config;
typedef struct dph_record dph_record;

const char* dph_version(void);

/* last failure message of the calling thread; never NULL */
const char* dph_last_error(void);

/* comma-joined experiment names into buf (truncated if needed) */
dph_status dph_experiment_names(char* buf, size_t buflen);

/* ---- configuration: `key = value` lines under [section] headers -------- */

dph_status dph_config_load(const char* path, dph_config** out);
dph_status dph_config_parse(const char* text, dph_config** out);
dph_status dph_config_set(dph_config* c, const char* key, const char* value);
dph_status dph_config_get(const dph_config* c, const char* key, char* buf, size_t buflen);
/* content hash of the canonical form, as carried by every summary row */
dph_status dph_config_hash(const dph_config* c, char* buf, size_t buflen);
void dph_config_free(dph_config* c);

/* ---- runs --------------------------------------------------------------- */

/* validates the config, executes its experiment pipeline, and when the
 * config names an output directory persists metadata.txt and summary.csv */
dph_status dph_run(const dph_config* c, dph_record** out);

/* model hypothesis audit; *pass is 1 when every hypothesis holds */
dph_status dph_validate_model(const dph_config* c, int* pass);

/* re-runs the config into scratch_dir and byte-compares summary.csv with
 * reference_dir; *match is 1 on byte equality */
dph_status dph_replay(const dph_config* c, const char* reference_dir,
                      const char* scratch_dir, int* match);

/* ---- run records ---------------------------------------------------------
 * A record is the in-memory summary: one row per emitted result line, cells
 * keyed by column name, plus the verdict of the pipeline's own checks. */

int dph_record_pass(const dph_record* r);
const char* dph_record_experiment(const dph_record* r);
const char* dph_record_hash(const dph_record* r);
double dph_record_wall_seconds(const dph_record* r);
size_t dph_record_rows(const dph_record* r);
/* cell value by column name; empty string when the row lacks the column */
dph_status dph_record_cell(const dph_record* r, size_t row, const char* key, char* buf,
                           size_t buflen);
/* whole row rendered as `key=value` pairs joined by "; " */
dph_status dph_record_row(const dph_record* r, size_t row, char* buf, size_t buflen);
void dph_record_free(dph_record* r);

#ifdef __cplusplus
}
#endif
