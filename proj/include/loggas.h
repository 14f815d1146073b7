/* C interface to the log-gas boundary-integral library.
 *
 * A model handle wraps a contour (given by its exterior Laurent-map
 * coefficients) sampled at M nodes, together with the boundary operators and
 * the interior conformal map built on demand. All functions return LG_OK on
 * success; on failure they return a status code and leave a human-readable
 * message in lg_last_error() (thread-local).
 *
 * Contour JSON fragment: {"r": 1.0, "a0": [0.0, 0.0], "coeffs": [[0.3, 0.0]]}
 * (complex numbers as [re, im] pairs).
 * Potential JSON: {"type": "zero"} | {"type": "fourier", "cos": [...],
 * "sin": [...], "c0": 0.0} | {"type": "wprime"}; NULL means zero.
 */

#ifndef LOGGAS_H
#define LOGGAS_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum lg_status {
  LG_OK = 0,
  LG_ERR_INVALID_ARGUMENT = 1,
  LG_ERR_NON_UNIVALENT = 2,
  LG_ERR_GRID_TOO_COARSE = 3,
  LG_ERR_NOT_EXTERIOR = 4,
  LG_ERR_NO_CONVERGENCE = 5,
  LG_ERR_CENTER_OUTSIDE = 6,
  LG_ERR_ILL_CONDITIONED = 7,
  LG_ERR_SOLVE_FAILURE = 8,
  LG_ERR_COMPLEX_SPECTRUM = 9,
  LG_ERR_SIDE_MISMATCH = 10,
  LG_ERR_COINCIDENT_POINTS = 11,
  LG_ERR_DEFORMATION_BREAKS_UNIVALENCE = 12,
  LG_ERR_CONFIG = 13,
  LG_ERR_IO = 14,
  LG_ERR_UNKNOWN = 15
} lg_status;

typedef struct lg_model lg_model;

const char* lg_version(void);
/* Message of the most recent failure on this thread. */
const char* lg_last_error(void);
void lg_string_free(char* s);

/* ---- model lifecycle -------------------------------------------------- */

lg_status lg_model_create(const char* contour_json, int M, lg_model** out);
void lg_model_destroy(lg_model* m);

lg_status lg_check_univalence(const char* contour_json, int* ok,
                              char* reason, size_t reason_cap);

int lg_model_size(const lg_model* m);           /* node count M */
double lg_model_perimeter(const lg_model* m);
double lg_model_radius(const lg_model* m);      /* exterior conformal radius */
/* Fills caller arrays of length M (any pointer may be NULL to skip). */
lg_status lg_model_nodes(const lg_model* m, double* re, double* im,
                         double* curvature, double* speed);

/* ---- expansion -------------------------------------------------------- */

typedef struct lg_expansion {
  double F0, F1, F2cl, F2q;
  double c1, c2;
  double detIV, logdetprimeN;
  double perimeter, radius;
  double lambda0, lambda1;
} lg_expansion;

/* rho0/rho1/rho2 may be NULL; otherwise they receive M values each. */
lg_status lg_expand(lg_model* m, double beta, const char* potential_json,
                    lg_expansion* out, double* rho0, double* rho1, double* rho2);

lg_status lg_predict_logz(const lg_expansion* e, double beta, long N,
                          double* out);

/* ---- spectra and determinants ----------------------------------------- */

/* Writes min(M, cap) descending eigenvalues; *count gets the full M. */
lg_status lg_spectrum(lg_model* m, double* eigenvalues, int cap, int* count);
lg_status lg_determinants(lg_model* m, double* detIV, double* logdetprimeN);

typedef struct lg_det_report {
  double logdet_int_rel;
  double logdet_ext_rel;
  double logdetprimeN;
  double surgery_residual;
} lg_det_report;

lg_status lg_logdet_interior(lg_model* m, double* out);
lg_status lg_logdet_exterior(lg_model* m, double* out);
lg_status lg_surgery_check(lg_model* m, lg_det_report* out);

/* ---- finite-N oracles -------------------------------------------------- */

lg_status lg_circle_logz(double r, double beta, long N, double* out);
lg_status lg_beta1_logz(lg_model* m, long N, const char* potential_json,
                        double* out);
lg_status lg_smalln_logz(lg_model* m, double beta, int N,
                         const char* potential_json, double* value,
                         double* error_estimate);
lg_status lg_mean_stress(lg_model* m, double beta, const char* potential_json,
                         const double z[2], double out[2]);
lg_status lg_bbgky_residual(lg_model* m, double beta,
                            const char* potential_json, double* out);

/* ---- sampler ----------------------------------------------------------- */

typedef struct lg_chain_config {
  uint64_t seed;
  long N;
  long steps;
  long burnin;
  double width;
  int density_bins;
} lg_chain_config;

/* density/density_err/bin_arclen receive density_bins values each (NULL ok). */
lg_status lg_sample_density(lg_model* m, double beta,
                            const char* potential_json,
                            const lg_chain_config* chain, double* density,
                            double* density_err, double* bin_arclen,
                            double* acceptance_rate);

/* ---- correlators ------------------------------------------------------- */

lg_status lg_phi_pair(lg_model* m, const double z[2], const double zeta[2],
                      double* out);
lg_status lg_dphi_sq(lg_model* m, const double z[2], double out[2]);
/* kind: 0 holomorphic, 1 absolute. */
lg_status lg_vertex_mean(lg_model* m, double beta, const double z[2],
                         double alpha, long N, int kind, double out[2]);

/* ---- config-driven runs ------------------------------------------------ */

/* Executes a command (expand | spectrum | sample | oracle | deform | verify)
 * against a configuration JSON, writing summary.json and CSV tables under
 * out_dir (NULL means the current directory). exit_code follows the CLI
 * convention: 0 ok, 1 validation failure, 2 configuration error. The summary
 * string is malloc'd; release it with lg_string_free. */
lg_status lg_run(const char* command, const char* config_json,
                 const char* out_dir, int* exit_code, char** summary_json);

#ifdef __cplusplus
}
#endif

#endif /* LOGGAS_H */
