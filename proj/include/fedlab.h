/* C interface to the federated-optimization laboratory.
 *
 * All functions return FL_OK (0) on success and a negative error code
 * otherwise; fl_last_error() describes the most recent failure on the
 * calling thread.  Handles are opaque and must be released with their
 * destroy function.
 */
#ifndef FEDLAB_H
#define FEDLAB_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

enum fl_status {
  FL_OK = 0,
  FL_ERR_INVALID = -1,      /* bad argument / null pointer */
  FL_ERR_CONFIG = -2,       /* config file problem */
  FL_ERR_SUITE_FAILED = -3, /* verify suite ran but did not pass */
  FL_ERR_NUMERIC = -4,      /* singular matrix, divergence, domain error */
  FL_ERR_IO = -5,           /* filesystem problem */
  FL_ERR_INTERNAL = -6
};

const char* fl_last_error(void);

/* ---- dataset handles ---- */
typedef struct fl_dataset fl_dataset;

int fl_dataset_generate(int d, int m, int s, int r, uint64_t seed,
                        fl_dataset** out);
int fl_dataset_load(const char* csv_path, const char* json_path,
                    fl_dataset** out);
int fl_dataset_save(const fl_dataset* ds, uint64_t seed, const char* csv_path,
                    const char* json_path);
int fl_dataset_info(const fl_dataset* ds, int* d, int* m, int* s, int* r);
void fl_dataset_destroy(fl_dataset* ds);

/* ---- command-level operations (mirror the CLI subcommands) ---- */
int fl_generate(const char* config_path, const char* out_dir, uint64_t seed);
int fl_run(const char* config_path, const char* out_dir, uint64_t seed,
           const char* phi_list /* comma separated, may be NULL */);
int fl_verify(const char* suite, const char* out_dir);
int fl_sweep(const char* config_path, const char* out_dir);

/* ---- direct calculators ---- */
int fl_erlang_cdf(double y, int b, double* out);
int fl_erlang_quantile(double p, int b, double* out);
int fl_fedave_optimal_b(double m, double eps_ratio, double phi, double tau,
                        double* b_star, double* T_star, double* gamma_est);

#ifdef __cplusplus
}
#endif

#endif /* FEDLAB_H */
