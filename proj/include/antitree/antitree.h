#ifndef ANTITREE_H
#define ANTITREE_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes returned by every fallible call. On failure a thread-local
 * message is available through at_last_error(). */
typedef enum {
    AT_OK = 0,
    AT_ERR_INVALID = 1,
    AT_ERR_CONFIG = 2,
    AT_ERR_CAPACITY = 3,
    AT_ERR_NUMERIC = 4,
    AT_ERR_DOMAIN = 5,
    AT_ERR_SINGULAR = 6,
    AT_ERR_IO = 7,
} at_status;

const char* at_version(void);
const char* at_last_error(void);

/* ---- operators ------------------------------------------------------- */

typedef struct at_operator at_operator;

/* Antitree adjacency on the n x r x s lattice with point weight w. */
at_status at_operator_antitree(int n, int r, int s, double w, at_operator** out);
/* Discrete Laplacian, periodic in the third coordinate. */
at_status at_operator_laplacian(int n, int r, int s, at_operator** out);
/* Mean-field projection I_{nr} (x) P_s. */
at_status at_operator_projection(int n, int r, int s, at_operator** out);

int64_t at_operator_dim(const at_operator* op);
at_status at_operator_entry(const at_operator* op, int64_t i, int64_t j, double* value);
/* Text dump: "dim nnz" header, then "i j value" rows (0-based, sorted). */
at_status at_operator_write_triplets(const at_operator* op, const char* path);
void at_operator_free(at_operator* op);

/* ---- spectra ---------------------------------------------------------- */

/* Disorder kinds: "point_mass", "uniform_symmetric", "two_point_symmetric",
 * "truncated_gaussian". sigma is the support half-width; param is the
 * point-mass location or the base standard deviation, 0 otherwise. */

/* All n*r*s eigenvalues of A^w + diag(v), ascending. `eigenvalues` must hold
 * n*r*s doubles. */
at_status at_full_spectrum(int n, int r, int s, double w, const char* disorder_kind,
                           double sigma, double param, uint64_t seed, double* eigenvalues);

/* Transfer-matrix secular scan over (lo, hi); writes up to `cap` eigenvalues
 * and the true count. AT_ERR_CAPACITY when cap is too small. */
at_status at_eigenvalue_scan(int n, int r, int s, double w, const char* disorder_kind,
                             double sigma, double param, uint64_t seed, double lo, double hi,
                             double* out, size_t cap, size_t* count);

/* Harmonic average h and variance sigma2 of 1/(lambda - v). */
at_status at_harmonic_average(const char* disorder_kind, double sigma, double param,
                              double lambda, double* h, double* sigma2);

/* Dense-oracle vs. scan comparison over the window; writes eigenvalue CSVs
 * and a manifest into out_dir and reports the max multiset deviation. */
at_status at_oracle_dump(int n, int r, int s, double w, const char* disorder_kind,
                         double sigma, double param, uint64_t seed, double window_lo,
                         double window_hi, const char* out_dir, double* max_abs_dev);

/* ---- experiments ------------------------------------------------------ */

at_status at_validate_config(const char* path);
at_status at_run_experiment(const char* path);

#ifdef __cplusplus
}
#endif

#endif /* ANTITREE_H */
