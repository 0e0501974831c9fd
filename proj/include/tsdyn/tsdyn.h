/* C interface to tsdyn: translation surfaces, the Teichmueller flow and
 * Kontsevich-Zorich cocycle, Lyapunov spectra, cylinder counting and
 * contraction of the proxy AGY norm.
 *
 * Every function returns a tsdyn_status; on failure the message is
 * available from tsdyn_last_error() on the calling thread. Strings returned
 * through char** are owned by the caller and released with
 * tsdyn_string_free. Reports are JSON documents. */
#ifndef TSDYN_H
#define TSDYN_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define TSDYN_API __declspec(dllexport)
#elif defined(TSDYN_BUILDING_LIBRARY)
#define TSDYN_API __attribute__((visibility("default")))
#else
#define TSDYN_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tsdyn_status {
  TSDYN_OK = 0,
  TSDYN_INVALID_ARGUMENT = 1,
  TSDYN_NON_MATCHING_EDGE,
  TSDYN_DISCONNECTED,
  TSDYN_NEGATIVE_ANGLE_DEFECT,
  TSDYN_ZERO_AREA,
  TSDYN_BASIS_MISMATCH,
  TSDYN_DEGENERATE_POLYGON,
  TSDYN_IRRATIONAL_ANGLE,
  TSDYN_NON_SIMPLE_POLYGON,
  TSDYN_DEGENERATE_TRIANGLE,
  TSDYN_DIMENSION_MISMATCH,
  TSDYN_RANK_DEFICIENCY,
  TSDYN_HORIZON_TOO_SHORT,
  TSDYN_FRAME_DEGENERATE,
  TSDYN_CLUSTER_OVERLAP,
  TSDYN_BUDGET_EXCEEDED,
  TSDYN_BOUND_EXCEEDED,
  TSDYN_DEGENERATE_FAMILY,
  TSDYN_NOT_RECURRENT,
  TSDYN_CONFIG_INVALID,
  TSDYN_OVERFLOW,
  TSDYN_IO,
  TSDYN_INTERNAL
} tsdyn_status;

typedef struct tsdyn_surface tsdyn_surface;
typedef struct tsdyn_cocycle tsdyn_cocycle;
typedef struct tsdyn_catalog tsdyn_catalog;

TSDYN_API const char* tsdyn_version(void);
/* "NonMatchingEdge", "BudgetExceeded", ... */
TSDYN_API const char* tsdyn_status_name(tsdyn_status status);
TSDYN_API const char* tsdyn_last_error(void);
TSDYN_API void tsdyn_string_free(char* s);

/* Surfaces */
TSDYN_API tsdyn_status tsdyn_surface_load(const char* path, tsdyn_surface** out);
TSDYN_API tsdyn_status tsdyn_surface_from_json(const char* json, tsdyn_surface** out);
/* angles: "p/q,p/q,..." in units of pi; lengths may be NULL for triangles. */
TSDYN_API tsdyn_status tsdyn_surface_unfold(const char* angles, const double* lengths, size_t n_lengths,
                                            tsdyn_surface** out);
TSDYN_API void tsdyn_surface_free(tsdyn_surface* s);
TSDYN_API tsdyn_status tsdyn_surface_to_json(const tsdyn_surface* s, char** out);
TSDYN_API tsdyn_status tsdyn_surface_save(const tsdyn_surface* s, const char* path);
TSDYN_API tsdyn_status tsdyn_surface_genus(const tsdyn_surface* s, int* out);
TSDYN_API tsdyn_status tsdyn_surface_homology_rank(const tsdyn_surface* s, int* out);
TSDYN_API tsdyn_status tsdyn_surface_area(const tsdyn_surface* s, double* out);
/* "H(2)", "H(1,1)", "H(0)" */
TSDYN_API tsdyn_status tsdyn_surface_stratum(const tsdyn_surface* s, char** out);
/* Invariant checklist {"checks": [{"name", "pass", "detail"}], "pass": bool}. */
TSDYN_API tsdyn_status tsdyn_surface_validate(const tsdyn_surface* s, char** out);
/* Copy rescaled to area 1. */
TSDYN_API tsdyn_status tsdyn_surface_normalized(const tsdyn_surface* s, tsdyn_surface** out);

/* Teichmueller flow */
typedef struct tsdyn_flow_options {
  double t;
  double step;
  double theta; /* rotation applied first */
} tsdyn_flow_options;

TSDYN_API void tsdyn_flow_options_init(tsdyn_flow_options* o);
/* end may be NULL. */
TSDYN_API tsdyn_status tsdyn_flow(const tsdyn_surface* s, const tsdyn_flow_options* o, tsdyn_cocycle** cocycle,
                                  tsdyn_surface** end);

TSDYN_API void tsdyn_cocycle_free(tsdyn_cocycle* c);
TSDYN_API tsdyn_status tsdyn_cocycle_rank(const tsdyn_cocycle* c, int* relative_rank, int* genus);
TSDYN_API tsdyn_status tsdyn_cocycle_elapsed_time(const tsdyn_cocycle* c, double* out);
/* Row-major entries; capacity must be at least rank^2 (relative) or
 * (2 genus)^2 (absolute). */
TSDYN_API tsdyn_status tsdyn_cocycle_relative(const tsdyn_cocycle* c, int64_t* out, size_t capacity);
TSDYN_API tsdyn_status tsdyn_cocycle_absolute(const tsdyn_cocycle* c, int64_t* out, size_t capacity);
/* Exact integer check of M^T J M = J on the absolute part. */
TSDYN_API tsdyn_status tsdyn_cocycle_is_symplectic(const tsdyn_cocycle* c, int* out);
/* Composition: first then second. */
TSDYN_API tsdyn_status tsdyn_cocycle_compose(const tsdyn_cocycle* first, const tsdyn_cocycle* second,
                                             tsdyn_cocycle** out);
TSDYN_API tsdyn_status tsdyn_cocycle_to_json(const tsdyn_cocycle* c, char** out);

/* Lyapunov spectrum, symmetry residuals and Oseledets flags */
typedef enum tsdyn_driver { TSDYN_DRIVER_GEODESIC = 0, TSDYN_DRIVER_WALK = 1 } tsdyn_driver;

typedef struct tsdyn_lyapunov_options {
  tsdyn_driver driver;
  double horizon; /* Teichmueller time or number of walk steps */
  double qr_interval;
  uint64_t seed;
  double s_max;
  int batches;
  int bootstrap_resamples;
  double min_horizon;
  double flow_step;
  int flags;               /* nonzero: compute Oseledets flags */
  int64_t flag_past_steps; /* walk steps before the flag base point */
  int64_t flag_future_steps;
} tsdyn_lyapunov_options;

TSDYN_API void tsdyn_lyapunov_options_init(tsdyn_lyapunov_options* o);
TSDYN_API tsdyn_status tsdyn_lyapunov(const tsdyn_surface* s, const tsdyn_lyapunov_options* o, char** report);

/* Cylinders and the counting function */
typedef struct tsdyn_count_options {
  double l_max;
  double t_max;
  int grid;
  double fit_from;
  int64_t budget;
  int workers;
} tsdyn_count_options;

TSDYN_API void tsdyn_count_options_init(tsdyn_count_options* o);
/* Report with grid arrays t, N, cesaro and the fitted c1, c2. */
TSDYN_API tsdyn_status tsdyn_count(const tsdyn_surface* s, const tsdyn_count_options* o, char** report);

/* Cylinders of circumference <= l_max. */
TSDYN_API tsdyn_status tsdyn_catalog_build(const tsdyn_surface* s, double l_max, int workers, tsdyn_catalog** out);
TSDYN_API void tsdyn_catalog_free(tsdyn_catalog* c);
TSDYN_API tsdyn_status tsdyn_catalog_size(const tsdyn_catalog* c, int64_t* cylinders, int64_t* connections);
/* Number of cylinders with circumference <= T; BoundExceeded if T > l_max. */
TSDYN_API tsdyn_status tsdyn_catalog_count(const tsdyn_catalog* c, double T, int64_t* out);
/* circumference, height, holonomy x, holonomy y of cylinder i. */
TSDYN_API tsdyn_status tsdyn_catalog_cylinder(const tsdyn_catalog* c, int64_t i, double out[4]);

/* Proxy-norm contraction along a geodesic */
typedef struct tsdyn_norms_options {
  double t_max;
  double theta;
  double sample_interval;
  double thick_systole;
  double min_thick_fraction;
  double flow_step;
} tsdyn_norms_options;

TSDYN_API void tsdyn_norms_options_init(tsdyn_norms_options* o);
TSDYN_API tsdyn_status tsdyn_norms(const tsdyn_surface* s, const tsdyn_norms_options* o, char** report);

#ifdef __cplusplus
}
#endif

#endif
