/* C interface to the dimers library. All functions return a status code; on failure
 * dimers_last_error() describes the problem for the calling thread. */
#ifndef DIMERS_C_H
#define DIMERS_C_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define DIMERS_API __declspec(dllexport)
#else
#define DIMERS_API __attribute__((visibility("default")))
#endif

typedef enum dimers_status {
    DIMERS_OK = 0,
    DIMERS_INVALID_ARGUMENT = 1,
    DIMERS_VALIDATION = 2,
    DIMERS_NUMERIC = 3,
    DIMERS_IO = 4,
    DIMERS_INTERNAL = 5
} dimers_status;

typedef struct dimers_model dimers_model;
typedef struct dimers_chain dimers_chain;

DIMERS_API const char* dimers_version(void);
DIMERS_API const char* dimers_last_error(void);
DIMERS_API const char* dimers_rng_algorithm(void);

/* Models hold a parsed run configuration together with the surface and its weights. */
DIMERS_API dimers_status dimers_model_from_json(const char* json_text, dimers_model** out);
DIMERS_API dimers_status dimers_model_load(const char* path, dimers_model** out);
DIMERS_API void dimers_model_free(dimers_model* model);
DIMERS_API int dimers_model_genus(const dimers_model* model);
/* Writes the imaginary parts of the g x g period matrix, row-major; cap is the buffer length. */
DIMERS_API dimers_status dimers_model_period_matrix(dimers_model* model, double* imag_out, size_t cap);
/* Sampler face weights for an H x W vertex grid; (H-1)*(W-1) values. */
DIMERS_API dimers_status dimers_model_face_weights(dimers_model* model, int H, int W, double* out, size_t cap);
/* out receives x1, x2, s1, s2, rho, sigma, h, ReR, ImR, hess11, hess12, hess22. */
DIMERS_API dimers_status dimers_model_ronkin(dimers_model* model, double re_z, double im_z, double out[12]);

/* Runs a CLI command (validate, amoeba, ronkin, weights, sample, selftest).
 * out_dir may be NULL to use the configured directory; seed is used when has_seed != 0.
 * *exit_code receives 0, 2, 3 or 4; *summary_json (if not NULL) a string to release with dimers_string_free. */
DIMERS_API dimers_status dimers_run_command(dimers_model* model, const char* command, const char* out_dir,
                                            int has_seed, uint64_t seed, int require_periodic, int* exit_code,
                                            char** summary_json);
DIMERS_API void dimers_string_free(char* s);

/* Chains sample the model's face weights on an H x W vertex grid, starting from a brickwork pattern. */
DIMERS_API dimers_status dimers_chain_new(dimers_model* model, int H, int W, uint64_t seed, dimers_chain** out);
DIMERS_API void dimers_chain_free(dimers_chain* chain);
/* volume_mode 0: plain flips; 1: pairs at fixed volume, first driven to volume_target. */
DIMERS_API dimers_status dimers_chain_run(dimers_chain* chain, int64_t sweeps, int volume_mode, double volume_target,
                                          double* acceptance_rate);
DIMERS_API dimers_status dimers_chain_heights(const dimers_chain* chain, double* out, size_t cap);
DIMERS_API dimers_status dimers_chain_volume(const dimers_chain* chain, double* out);
/* Lowercase hex dump, one line per face row; release with dimers_string_free. */
DIMERS_API dimers_status dimers_chain_dump(const dimers_chain* chain, char** out);

#ifdef __cplusplus
}
#endif

#endif
