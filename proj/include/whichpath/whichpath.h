/* C interface to the whichpath simulator. All functions are reentrant; error
 * text is kept per thread and stays valid until the next call on that thread. */
#ifndef WHICHPATH_H
#define WHICHPATH_H

#include <stddef.h>

#if defined(_WIN32)
#if defined(WHICHPATH_BUILDING_LIBRARY)
#define WP_API __declspec(dllexport)
#else
#define WP_API __declspec(dllimport)
#endif
#else
#define WP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum wp_status {
    WP_OK = 0,
    WP_ERR_INVALID_ARGUMENT = 1,
    WP_ERR_INCOMPATIBLE = 2,    /* spectra on different grids */
    WP_ERR_DEGENERATE = 3,      /* no visibility structure to select modes from */
    WP_ERR_ZERO_REFERENCE = 4,  /* normalization reference carries no light */
    WP_ERR_PARSE = 5,
    WP_ERR_IO = 6,
    WP_ERR_INTERNAL = 7
} wp_status;

typedef struct wp_config wp_config;
typedef struct wp_sweep wp_sweep;

typedef struct wp_binned {
    double delta_lambda;
    double lambda_s;
    double p_plus;
    double p_minus;
    double delta_p;
    int valid; /* 0 when the setting was skipped */
} wp_binned;

WP_API const char* wp_status_string(wp_status status);
WP_API const char* wp_last_error(void);
/* Newline-separated warnings from the last command on this thread. */
WP_API const char* wp_last_warnings(void);
/* 0 success, 1 physics/degeneracy failure, 2 input failure. */
WP_API int wp_exit_code(wp_status status);

WP_API wp_status wp_config_create(wp_config** out);
WP_API wp_status wp_config_load(const char* path, wp_config** out);
WP_API wp_status wp_config_set(wp_config* config, const char* key, const char* value);
/* Copies the value with its terminator into buf when it fits; *needed gets the full size. */
WP_API wp_status wp_config_get(const wp_config* config, const char* key, char* buf, size_t buf_len,
                               size_t* needed);
WP_API wp_status wp_config_validate(const wp_config* config);
WP_API void wp_config_destroy(wp_config* config);

WP_API wp_status wp_cmd_scan(const wp_config* config, double delta_lambda);
WP_API wp_status wp_cmd_table(const wp_config* config);
WP_API wp_status wp_cmd_bins(const wp_config* config);
WP_API wp_status wp_cmd_danan(const wp_config* config);
WP_API wp_status wp_cmd_ingest(const wp_config* config, const char* arm1_path, const char* arm2_path);

WP_API wp_status wp_sweep_run(const wp_config* config, wp_sweep** out);
WP_API size_t wp_sweep_count(const wp_sweep* sweep);
WP_API wp_status wp_sweep_record(const wp_sweep* sweep, size_t index, wp_binned* out);
/* Mean over valid settings; delta_p is the mean of differences. */
WP_API wp_status wp_sweep_mean(const wp_sweep* sweep, wp_binned* out);
WP_API void wp_sweep_destroy(wp_sweep* sweep);

/* Per-wavelength primitives over plain arrays of length n. Undefined points
 * (no light) get NaN. */
WP_API wp_status wp_visibility(const double* i_max, const double* i_min, size_t n, double* out);
WP_API wp_status wp_distinguishability(const double* arm1, const double* arm2, size_t n, double* out);
WP_API wp_status wp_theory_extrema(const double* arm1, const double* arm2, size_t n, double* i_max,
                                   double* i_min);
WP_API wp_status wp_egy_check(double visibility, double distinguishability, double* sum_of_squares,
                              int* pass);

#ifdef __cplusplus
}
#endif

#endif
