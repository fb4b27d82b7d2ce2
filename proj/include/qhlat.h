/* Quasi-Hermitian lattice toolkit: C API of the shared library.
 *
 * The library builds discretized non-Hermitian lattice Hamiltonians,
 * constructs and solves for their quasilocal band-matrix metrics Theta,
 * factorizes metrics into Dyson maps Omega (Theta = Omega^dag Omega),
 * produces Hermitian isospectral partners h = Omega H Omega^{-1}, and
 * solves the discrete scattering problem with unitarity checks.
 *
 * Conventions:
 *  - every object is an opaque handle released with its qh_*_free function;
 *  - functions return qh_status; on failure qh_error_message() carries the
 *    detail for the calling thread and output parameters are untouched;
 *  - rationals cross the boundary as strings "p/q" (or "p"), matrices and
 *    reports as JSON strings released with qh_string_free;
 *  - matrices live on the symmetric index window -N..N.
 */

#ifndef QHLAT_H
#define QHLAT_H

#include <stddef.h>

#if defined(_WIN32)
#define QHLAT_API __declspec(dllexport)
#else
#define QHLAT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qh_status {
    QH_OK = 0,
    QH_ERR_INVALID_ARGUMENT = 1,
    QH_ERR_WINDOW_MISMATCH = 2,
    QH_ERR_SCALAR_MISMATCH = 3,
    QH_ERR_SPECTRAL_SINGULARITY = 4,
    QH_ERR_SINGULAR = 5,
    QH_ERR_NOT_POSITIVE = 6,
    QH_ERR_HERMITICITY = 7,
    QH_ERR_PARSE = 8,
    QH_ERR_INTERNAL = 9
} qh_status;

typedef enum qh_scalar_kind {
    QH_SCALAR_RATIONAL = 0, /* exact verification mode */
    QH_SCALAR_FLOAT = 1     /* scan mode */
} qh_scalar_kind;

typedef struct qh_model qh_model;   /* lattice Hamiltonian */
typedef struct qh_metric qh_metric; /* candidate metric Theta */
typedef struct qh_dyson qh_dyson;   /* Dyson map Omega */
typedef struct qh_matrix qh_matrix; /* band matrix (interchange format) */

QHLAT_API const char* qh_version(void);

/* Thread-local message describing the most recent failure. */
QHLAT_API const char* qh_error_message(void);

QHLAT_API void qh_string_free(char* text);

/* ---- lattice models ---------------------------------------------------- */

/* Descriptor examples:
 *   {"model":"free","N":20}
 *   {"model":"point_defect","g":"1/2","N":40}
 *   {"model":"two_center","g":"1/2","M":3,"N":40}
 *   {"model":"multiparam","params":["3/10","1/5","1/10"],"N":30}
 */
QHLAT_API qh_status qh_model_create_json(const char* descriptor_json, qh_model** out);
QHLAT_API void qh_model_free(qh_model* model);
QHLAT_API qh_status qh_model_descriptor_json(const qh_model* model, char** out);
QHLAT_API qh_status qh_model_matrix_json(const qh_model* model, qh_scalar_kind kind, char** out);

/* ---- metrics ----------------------------------------------------------- */

/* Closed-form R-band metric of the single-defect model; rejects |g| >= 1. */
QHLAT_API qh_status qh_metric_closed_form(const char* g, int bands, long window, qh_metric** out);

/* Exact solution of H^dag Theta = Theta H over the R-band ansatz with
 * unit-tail normalization. */
QHLAT_API qh_status qh_metric_solve(const qh_model* model, int bands, qh_metric** out);

/* Theta = sum_k weight_k * metric_k; weights are rationals in rational mode,
 * decimal literals in float mode. */
QHLAT_API qh_status qh_metric_superpose(const qh_metric* const* metrics,
                                        const char* const* weights, size_t count,
                                        qh_scalar_kind kind, qh_metric** out);

/* Diagonal metric of the multiparametric model (site products). */
QHLAT_API qh_status qh_metric_multiparam_diagonal(const char* const* params, size_t count,
                                                  long window, qh_metric** out);

/* Cross-shaped long-range demo pattern; quarantined from positivity and
 * factorization. */
QHLAT_API qh_status qh_metric_cross_demo(int k, long window, qh_metric** out);

QHLAT_API void qh_metric_free(qh_metric* metric);
QHLAT_API qh_status qh_metric_to_json(const qh_metric* metric, qh_scalar_kind kind, char** out);

/* Interior residual of H^dag Theta - Theta H. max_abs is a rational string
 * in exact mode, a decimal in float mode; exact_zero is 1 when the residual
 * vanishes identically. */
QHLAT_API qh_status qh_metric_residual(const qh_model* model, const qh_metric* metric,
                                       char** max_abs, int* exact_zero);

/* Positive definiteness of the truncated metric (exact pivots in rational
 * mode). pivot_site receives the first failing site when not positive. */
QHLAT_API qh_status qh_metric_positivity(const qh_metric* metric, int* positive,
                                         long* pivot_site);

QHLAT_API qh_status qh_metric_locality(const qh_metric* metric, long margin,
                                       char** report_json);

/* ---- Dyson maps and hermitization -------------------------------------- */

QHLAT_API qh_status qh_dyson_factor_diagonal(const qh_metric* metric, qh_dyson** out);

/* Explicit asymmetric tridiagonal map factorizing 2 Theta_1 - Theta_2,
 * together with its closed-form inverse; needs 0 < |g| < 1. */
QHLAT_API qh_status qh_dyson_tridiagonal(const char* g, long window, qh_dyson** out);

/* Banded Cholesky factor of a positive-definite metric. */
QHLAT_API qh_status qh_dyson_cholesky(const qh_metric* metric, qh_dyson** out);

QHLAT_API void qh_dyson_free(qh_dyson* map);
QHLAT_API qh_status qh_dyson_to_json(const qh_dyson* map, char** out);

/* h = Omega H Omega^{-1}; matrix_json receives the partner, report_json the
 * Hermiticity report (max interior asymmetry, interior half-width). */
QHLAT_API qh_status qh_hermitize(const qh_model* model, const qh_dyson* map,
                                 char** matrix_json, char** report_json);

/* Dense-spectrum comparison of H and its partner on a small window.
 * omega_kind is "diagonal", "tridiagonal" or "cholesky". */
QHLAT_API qh_status qh_isospectrality(const qh_model* model, const char* omega_kind,
                                      long small_window, char** report_json);

/* ---- scattering --------------------------------------------------------- */

/* E = 2 - 2 cos(kappa); kappa strictly inside (0, pi). */
QHLAT_API qh_status qh_dispersion(double kappa, double* energy);

/* out_values: E, Re R, Im R, Re T, Im T, unitarity deficit, condition. */
QHLAT_API qh_status qh_scatter(const qh_model* model, double kappa, double out_values[7]);

/* out_values: Re R, Im R, Re T, Im T (independent transfer-matrix route). */
QHLAT_API qh_status qh_transfer(const qh_model* model, double kappa, double out_values[4]);

/* CSV columns kappa,E,Re(R),Im(R),Re(T),Im(T),deficit (%.15e formatting),
 * plus a JSON summary with the maximal deficit and condition number.
 * kappa_max <= 0 selects pi - kappa_min. */
QHLAT_API qh_status qh_scatter_grid_csv(const qh_model* model, int points, double kappa_min,
                                        double kappa_max, char** csv, char** summary_json);

/* Positivity of 2 Theta_1 + gamma Theta_2 over a gamma grid, with a
 * bisection bracket of each positivity boundary. */
QHLAT_API qh_status qh_positivity_gamma_scan(const char* g, long window, double gamma_min,
                                             double gamma_max, double gamma_step,
                                             char** report_json);

/* ---- fixture replay ------------------------------------------------------ */

/* Replays the explicitly known matrices (band metrics R = 1..7, the
 * tridiagonal Dyson pair, both hermitized partners) at the given coupling;
 * all_passed is 1 when every check holds. */
QHLAT_API qh_status qh_verify_reference(const char* g, long window, int* all_passed,
                                        char** report_json);

/* ---- band-matrix interchange --------------------------------------------- */

QHLAT_API qh_status qh_matrix_from_json(const char* json, qh_matrix** out);
QHLAT_API void qh_matrix_free(qh_matrix* matrix);
QHLAT_API qh_status qh_matrix_to_json(const qh_matrix* matrix, char** out);
QHLAT_API qh_status qh_matrix_equal(const qh_matrix* a, const qh_matrix* b, int* equal);

#ifdef __cplusplus
}
#endif

#endif /* QHLAT_H */
