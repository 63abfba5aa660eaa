/*
 * dephase: N-qubit dephasing-channel simulator and Kraus-decomposition
 * toolkit, exposed as a C shared-library API.
 *
 * All handles are opaque; every function returns a dephase_status. Matrix
 * buffers are row-major interleaved doubles (re, im, re, im, ...) of length
 * 2 * rows * cols. On failure, dephase_last_error_message() returns a
 * thread-local description of what went wrong.
 */

#ifndef DEPHASE_H
#define DEPHASE_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dephase_status {
    DEPHASE_OK = 0,
    DEPHASE_ERR_INVALID_ARGUMENT = 1,
    DEPHASE_ERR_DIMENSION_MISMATCH = 2,
    DEPHASE_ERR_NOT_SQUARE = 3,
    DEPHASE_ERR_RANK_DEFICIENT = 4,
    DEPHASE_ERR_QUADRATURE = 5,
    DEPHASE_ERR_INFEASIBLE_WEIGHTS = 6,
    DEPHASE_ERR_BASIS_SEARCH = 7,
    DEPHASE_ERR_SINGULAR_SYSTEM = 8,
    DEPHASE_ERR_SEARCH_FAILED = 9,
    DEPHASE_ERR_CUTOFF_TOO_SMALL = 10,
    DEPHASE_ERR_SCHEME_UNAVAILABLE = 11,
    DEPHASE_ERR_BAD_CONFIG = 12,
    DEPHASE_ERR_IO = 13,
    DEPHASE_ERR_INTERNAL = 14
} dephase_status;

typedef struct dephase_bath dephase_bath;
typedef struct dephase_kraus_set dephase_kraus_set;
typedef struct dephase_report dephase_report;

const char* dephase_version(void);

/* Thread-local message describing the most recent failure. */
const char* dephase_last_error_message(void);

/* Documented CLI exit code for a status (0, or 1..6). */
int dephase_status_exit_code(dephase_status status);

/* ---- bath ---------------------------------------------------------------- */

dephase_status dephase_bath_create(const double* omegas, const double* couplings,
                                   size_t n_modes, dephase_bath** out);
void dephase_bath_free(dephase_bath* bath);

typedef struct dephase_coefficients {
    double t;
    double l1_re, l1_im;  /* vacuum-branch amplitude */
    double l2, l3;        /* odd / even branch weight roots */
    double gamma;         /* |l1| */
    double phi_re, phi_im; /* accumulated phase sum */
    double g_total;       /* sum_k |G_k(t)|^2 */
} dephase_coefficients;

dephase_status dephase_bath_coefficients(const dephase_bath* bath, double t,
                                         dephase_coefficients* out);

dephase_status dephase_bath_coherence_factor(const dephase_bath* bath, double t,
                                             double coupling_scale, double* out);

/* ---- Kraus sets ----------------------------------------------------------- */

/* Two-qubit common-bath non-RU triple (vacuum / odd / even). */
dephase_status dephase_kraus_common_nonru(const dephase_bath* bath, double t,
                                          dephase_kraus_set** out);

/* Two-qubit RU sign-pattern set. include_phase != 0 left-composes the
 * deterministic diagonal phase prefactor so the set reproduces the physical
 * channel of the complex l1. */
dephase_status dephase_kraus_common_ru(const dephase_bath* bath, double t, int include_phase,
                                       dephase_kraus_set** out);

/* Single-qubit parity pair sqrt(odd) sigma_z, sqrt(even) I. */
dephase_status dephase_kraus_single_qubit_parity(const dephase_bath* bath, double t,
                                                 dephase_kraus_set** out);

/* Tensor products of dim-2 factor sets, last factor fastest. */
dephase_status dephase_kraus_tensor(const dephase_kraus_set* const* factors, size_t n_factors,
                                    dephase_kraus_set** out);

/* General N-qubit RU construction: default sign basis, weights solved from
 * the Schur matrix at gamma. */
dephase_status dephase_kraus_ru_weights(int n_qubits, double gamma, dephase_kraus_set** out);

/* Numerical phase-diagonal RU search (multi-start, seeded, deterministic). */
dephase_status dephase_kraus_search_phase_ru(int n_qubits, double gamma, size_t n_ops,
                                             double tol, uint64_t seed,
                                             dephase_kraus_set** out);

void dephase_kraus_set_free(dephase_kraus_set* set);
size_t dephase_kraus_set_size(const dephase_kraus_set* set);
size_t dephase_kraus_set_dim(const dephase_kraus_set* set);
int dephase_kraus_set_has_weights(const dephase_kraus_set* set);
const char* dephase_kraus_set_label(const dephase_kraus_set* set, size_t index);
dephase_status dephase_kraus_set_weight(const dephase_kraus_set* set, size_t index,
                                        double* out);
/* Copies operator `index` into `out` (2 * dim * dim doubles). */
dephase_status dephase_kraus_set_matrix(const dephase_kraus_set* set, size_t index,
                                        double* out);
dephase_status dephase_kraus_set_completeness_residual(const dephase_kraus_set* set,
                                                       double* out);

/* rho_out = sum_i K_i rho_in K_i^dag; buffers hold 2 * dim * dim doubles. */
dephase_status dephase_kraus_apply(const dephase_kraus_set* set, const double* rho_in,
                                   double* rho_out);

/* Compares induced process maps on the matrix-unit basis. */
dephase_status dephase_kraus_equivalence(const dephase_kraus_set* a,
                                         const dephase_kraus_set* b, double tol,
                                         int* equal, double* max_deviation);

/* ---- Schur matrix ---------------------------------------------------------- */

/* Fills out (row-major, (2^n)^2 doubles) with gamma^{(w(i)-w(j))^2}. */
dephase_status dephase_schur_matrix(int n_qubits, double gamma, double* out);

/* Numeric rank of the Schur matrix; rel_tol <= 0 selects 1e-10 * sigma_max. */
dephase_status dephase_schur_rank(int n_qubits, double gamma, double rel_tol, int* out);

/* ---- config-driven commands ------------------------------------------------ */

/* Runs one CLI command ("coefficients", "decompose", "fock", "basis",
 * "restore") against a JSON config document. On some domain failures
 * (decompose with infeasible weights) a report is still produced; *out is
 * non-NULL whenever artifacts exist. seed_override may be NULL. */
dephase_status dephase_run(const char* command, const char* config_json,
                           const uint64_t* seed_override, dephase_report** out);

void dephase_report_free(dephase_report* report);
dephase_status dephase_report_status(const dephase_report* report);
const char* dephase_report_message(const dephase_report* report);
size_t dephase_report_artifact_count(const dephase_report* report);
const char* dephase_report_artifact_name(const dephase_report* report, size_t index);
const char* dephase_report_artifact_text(const dephase_report* report, size_t index);
size_t dephase_report_summary_count(const dephase_report* report);
const char* dephase_report_summary_line(const dephase_report* report, size_t index);

#ifdef __cplusplus
}
#endif

#endif /* DEPHASE_H */
