#ifndef INVSEP_H
#define INVSEP_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define INVSEP_API __declspec(dllexport)
#else
#define INVSEP_API __attribute__((visibility("default")))
#endif

typedef enum invsep_status {
    INVSEP_OK = 0,
    INVSEP_E_INVALID_ARGUMENT = 1,
    INVSEP_E_PARSE = 2,
    INVSEP_E_DIMENSION_MISMATCH = 3,
    INVSEP_E_DEGREE_OVERFLOW = 4,
    INVSEP_E_UNSUPPORTED = 5,
    INVSEP_E_GROUP_TOO_LARGE = 6,
    INVSEP_E_NOT_SEPARATING = 7,
    INVSEP_E_EXPONENT_EXHAUSTED = 8,
    INVSEP_E_UNKNOWN_CASE = 9,
    INVSEP_E_NOT_INVERTIBLE = 10,
    INVSEP_E_INTERNAL = 99
} invsep_status;

typedef enum invsep_verdict {
    INVSEP_SEPARATED = 0,
    INVSEP_NOT_SEPARATED = 1,
    INVSEP_INCONCLUSIVE = 2
} invsep_verdict;

typedef struct invsep_polynomial invsep_polynomial;
typedef struct invsep_group invsep_group;
typedef struct invsep_options invsep_options;

/* Message of the last failed call on this thread ("" if none). */
INVSEP_API const char* invsep_last_error(void);
INVSEP_API const char* invsep_status_name(invsep_status status);
INVSEP_API const char* invsep_version(void);
/* Releases strings returned through char** out-parameters. */
INVSEP_API void invsep_string_free(char* s);

INVSEP_API invsep_status invsep_polynomial_from_json(const char* json, invsep_polynomial** out);
INVSEP_API invsep_status invsep_polynomial_to_json(const invsep_polynomial* p, char** out);
INVSEP_API invsep_status invsep_polynomial_dimension(const invsep_polynomial* p, size_t* out);
/* Evaluates at the point (re[i] + i·im[i]); im may be NULL for real points. */
INVSEP_API invsep_status invsep_polynomial_eval(const invsep_polynomial* p, const double* re, const double* im, size_t n,
                                                double* out_re, double* out_im);
INVSEP_API void invsep_polynomial_free(invsep_polynomial* p);

/* GroupSpec JSON, e.g. {"kind":"symN","n":3}. */
INVSEP_API invsep_status invsep_group_from_json(const char* json, invsep_group** out);
/* Element count, or quadrature node count for the circle. */
INVSEP_API invsep_status invsep_group_order(const invsep_group* g, size_t* out);
INVSEP_API invsep_status invsep_group_dimension(const invsep_group* g, size_t* out);
INVSEP_API invsep_status invsep_group_describe(const invsep_group* g, char** out_json);
INVSEP_API void invsep_group_free(invsep_group* g);

/* m-th symmetrization (m = 1 gives S_G(Q)). */
INVSEP_API invsep_status invsep_symmetrize(const invsep_polynomial* q, const invsep_group* g, unsigned m,
                                           invsep_polynomial** out);
/* Evaluates the m-th symmetrization at one point without expanding it. */
INVSEP_API invsep_status invsep_symmetrize_eval(const invsep_polynomial* q, const invsep_group* g, unsigned m,
                                                const double* re, const double* im, size_t n, double* out_re,
                                                double* out_im);
INVSEP_API invsep_status invsep_verify_invariance(const invsep_polynomial* p, const invsep_group* g, size_t samples,
                                                  uint64_t seed, double* out_max_deviation);

/* Defaults: seed 42, 20000 samples, 200 polish steps, m_max 200, margin_tol 1e-6, eta unset, 1 job. */
INVSEP_API invsep_status invsep_options_new(invsep_options** out);
INVSEP_API invsep_status invsep_options_set_seed(invsep_options* o, uint64_t seed);
INVSEP_API invsep_status invsep_options_set_budget(invsep_options* o, size_t samples);
INVSEP_API invsep_status invsep_options_set_m_max(invsep_options* o, unsigned m_max);
INVSEP_API invsep_status invsep_options_set_margin_tol(invsep_options* o, double tol);
INVSEP_API invsep_status invsep_options_set_eta(invsep_options* o, double eta);
INVSEP_API invsep_status invsep_options_set_jobs(invsep_options* o, unsigned jobs);
INVSEP_API void invsep_options_free(invsep_options* o);

/* request: {"q": Polynomial, "group": GroupSpec, "set": SetSpec, "z": point}.
 * Writes the SeparationReport JSON and its verdict. */
INVSEP_API invsep_status invsep_separate(const char* request_json, const invsep_options* o, char** out_report,
                                         invsep_verdict* out_verdict);

/* JSON array of case ids in suite order. */
INVSEP_API invsep_status invsep_casebook_ids(char** out_json);
/* selectors_json: JSON array of ids or kinds, or NULL for the full suite.
 * Writes {"seed","budget","cases":[CaseReport...],"summary"} and whether every case passed. */
INVSEP_API invsep_status invsep_casebook_run(const char* selectors_json, const invsep_options* o, char** out_json,
                                             int* out_all_pass);

#ifdef __cplusplus
}
#endif

#endif
