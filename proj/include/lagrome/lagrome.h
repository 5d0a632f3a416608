#ifndef LAGROME_H
#define LAGROME_H

/* C interface to the lagrome library.
 *
 * Every call returns a lagrome_status.  On failure the message is available
 * from lagrome_last_error() until the next call on the same thread.
 * Strings returned through char** are owned by the caller and released with
 * lagrome_string_free().
 */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  LAGROME_OK = 0,
  LAGROME_ERR_ARGUMENT = 1,      /* malformed input, unknown names, bad JSON */
  LAGROME_ERR_CHART = 2,         /* point outside the open chart domain */
  LAGROME_ERR_DEGENERATE = 3,    /* induced metric too ill-conditioned */
  LAGROME_ERR_NUMERICAL = 4,     /* non-finite values, jet domain errors */
  LAGROME_ERR_IO = 5,
  LAGROME_ERR_INTERNAL = 6
} lagrome_status;

typedef struct lagrome_jet lagrome_jet;
typedef struct lagrome_immersion lagrome_immersion;

const char* lagrome_last_error(void);
const char* lagrome_version(void);
void lagrome_string_free(char* s);

/* Caps worker threads; 0 restores the hardware default. */
lagrome_status lagrome_set_threads(int threads);

/* Jets --------------------------------------------------------------- */

typedef enum {
  LAGROME_JET_ADD = 0,
  LAGROME_JET_MUL,
  LAGROME_JET_DIV,
  LAGROME_JET_NEG,
  LAGROME_JET_SIN,
  LAGROME_JET_COS,
  LAGROME_JET_EXP,
  LAGROME_JET_LOG,
  LAGROME_JET_SQRT,
  LAGROME_JET_ATAN,
  LAGROME_JET_POW
} lagrome_jet_op;

lagrome_status lagrome_jet_constant(int dim, int order, double value, lagrome_jet** out);
lagrome_status lagrome_jet_variable(int dim, int order, int index, double value, lagrome_jet** out);
/* Binary ops read a and b; unary ops ignore b.  POW takes the exponent from b's value. */
lagrome_status lagrome_jet_apply(lagrome_jet_op op, const lagrome_jet* a, const lagrome_jet* b, lagrome_jet** out);
/* Partial derivative d^alpha at the expansion point; alpha has `dim` entries. */
lagrome_status lagrome_jet_partial(const lagrome_jet* j, const int* alpha, double* out);
void lagrome_jet_free(lagrome_jet* j);

/* Immersions --------------------------------------------------------- */

lagrome_status lagrome_immersion_graph_torus(int n, const char* potential, lagrome_immersion** out);
/* translation may be NULL (origin); otherwise 2n values. */
lagrome_status lagrome_immersion_whitney_sphere(int n, double radius, const double* translation,
                                                lagrome_immersion** out);
lagrome_status lagrome_immersion_product_torus(int n, const double* radii, lagrome_immersion** out);
lagrome_status lagrome_immersion_whitney_cp(int n, double theta, lagrome_immersion** out);
/* {"kind": "graph_torus"|"whitney_sphere"|"product_torus"|"whitney_cp"|"plane", "n", "potential",
 *  "radius", "translation", "radii", "theta"} */
lagrome_status lagrome_immersion_from_json(const char* spec_json, lagrome_immersion** out);
void lagrome_immersion_free(lagrome_immersion* im);

lagrome_status lagrome_immersion_dim(const lagrome_immersion* im, int* n);
/* Writes 2n ambient components. */
lagrome_status lagrome_position(const lagrome_immersion* im, int chart, const double* coords, double* out);
lagrome_status lagrome_lagrangian_residual(const lagrome_immersion* im, int chart, const double* coords,
                                           double* out);

/* Point quantities as JSON.  `quantities` is a comma-separated list drawn from
 * position, g, h, H, K, htilde, T, divT, divdivT, theta, scalars, residuals;
 * NULL or "all" selects everything. */
lagrome_status lagrome_eval_json(const lagrome_immersion* im, int chart, const double* coords,
                                 const char* quantities, char** out_json);

/* Functional report as JSON.  `coarse_N` = 0 uses the default grid pair. */
lagrome_status lagrome_integrate_json(const lagrome_immersion* im, const char* functional, int coarse_N,
                                      char** out_json);

/* Matrix inequality ------------------------------------------------- */

/* B holds m symmetric n x n matrices, row-major, back to back. */
lagrome_status lagrome_lili(const double* B, int m, int n, double* lhs, double* rhs);
lagrome_status lagrome_lili_random(long trials, uint64_t seed, char** out_json);

/* Verification and flow --------------------------------------------- */

/* suite: one of the suite names or "all".  all_pass is set to 0 or 1. */
lagrome_status lagrome_verify_json(const char* suite, uint64_t seed, int* all_pass, char** out_json);

/* Runs the flow described by config_json; artifacts go to out_dir.
 * exit_code receives 0 (completed), 3 (blowup) or 4 (under-resolved).
 * summary_json (may be NULL) receives the run.json contents. */
lagrome_status lagrome_flow_run(const char* config_json, const char* out_dir, int* exit_code,
                                char** summary_json);

#ifdef __cplusplus
}
#endif

#endif
