/* probeq: probe-qubit spectral simulator for 3-bit exact cover.
 *
 * C interface of the shared library. All objects are opaque handles created
 * and destroyed here; every fallible call returns a pq_status and leaves a
 * human-readable message in pq_last_error() on failure. Handles are
 * immutable after creation and may be shared across threads.
 */

#ifndef PROBEQ_H
#define PROBEQ_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define PQ_API __declspec(dllexport)
#else
#define PQ_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
    PQ_OK = 0,
    PQ_ERR_PARSE = 1,
    PQ_ERR_INVALID_ARGUMENT = 2,
    PQ_ERR_RESOURCE = 3,
    PQ_ERR_NUMERIC = 4,
    PQ_ERR_IO = 5
} pq_status;

typedef enum {
    PQ_METHOD_EXACT_EIG = 0,
    PQ_METHOD_EXACT_KRYLOV = 1,
    PQ_METHOD_TROTTER = 2
} pq_method;

typedef struct pq_instance pq_instance;
typedef struct pq_spectrum pq_spectrum;
typedef struct pq_result pq_result;
typedef struct pq_table pq_table;

/* Thread-local message describing the most recent failure. */
PQ_API const char* pq_last_error(void);
PQ_API const char* pq_version(void);

/* Strings returned through char** out-parameters are heap-allocated and
 * must be released with pq_string_free. */
PQ_API void pq_string_free(char* s);

/* --- instances ------------------------------------------------------- */

PQ_API pq_status pq_instance_parse(const char* json_text, pq_instance** out);
PQ_API pq_status pq_instance_load(const char* path, pq_instance** out);
PQ_API void pq_instance_free(pq_instance* inst);
PQ_API int pq_instance_num_bits(const pq_instance* inst);
PQ_API int pq_instance_num_clauses(const pq_instance* inst);

/* --- exhaustive classical spectrum ----------------------------------- */

PQ_API pq_status pq_spectrum_solve(const pq_instance* inst, pq_spectrum** out);
PQ_API void pq_spectrum_free(pq_spectrum* s);
PQ_API int pq_spectrum_min_energy(const pq_spectrum* s);
PQ_API uint64_t pq_spectrum_degeneracy(const pq_spectrum* s, int energy);
PQ_API size_t pq_spectrum_num_minimizers(const pq_spectrum* s);
/* Writes the i-th minimizer as a 0/1 string; buffer needs n+1 bytes. */
PQ_API pq_status pq_spectrum_minimizer(const pq_spectrum* s, size_t i,
                                       char* buf, size_t bufsize);
PQ_API pq_status pq_spectrum_to_json(const pq_instance* inst,
                                     const pq_spectrum* s, char** out_json);

/* --- simulation ------------------------------------------------------ */

typedef struct {
    double omega;       /* probe frequency */
    double coupling;    /* probe-register coupling strength */
    double tau;         /* evolution time */
    pq_method method;
    int trotter_steps;  /* 0 = auto-select by doubling */
    int krylov_dim;
    double tolerance;
    double threshold;   /* conditional mass needed to report an assignment */
    uint64_t shots;     /* 0 = deterministic amplitude readout */
    uint64_t seed;
} pq_run_params;

/* Fills in the defaults: omega 1, coupling 0.002, exact method. */
PQ_API void pq_run_params_init(pq_run_params* params);

/* One protocol run at the given parameters. */
PQ_API pq_status pq_run(const pq_instance* inst, const pq_run_params* params,
                        pq_result** out);

/* Decision procedure at omega = 1 with doubling evolution-time guesses. */
PQ_API pq_status pq_solve(const pq_instance* inst, const pq_run_params* params,
                          pq_result** out);

PQ_API void pq_result_free(pq_result* r);
PQ_API double pq_result_p_decay(const pq_result* r);
PQ_API int pq_result_satisfiable(const pq_result* r);
PQ_API int pq_result_chosen_steps(const pq_result* r); /* -1 when not Trotter */
PQ_API size_t pq_result_num_solutions(const pq_result* r);
PQ_API pq_status pq_result_solution(const pq_result* r, size_t i, char* buf,
                                    size_t bufsize);
PQ_API pq_status pq_result_to_json(const pq_result* r, char** out_json);

/* --- sweeps ----------------------------------------------------------- */

PQ_API pq_status pq_sweep_tau(const pq_instance* inst,
                              const pq_run_params* params, const double* taus,
                              size_t count, pq_table** out);

/* fixed_tau <= 0 selects the doubling evolution-time guesses per point. */
PQ_API pq_status pq_sweep_omega(const pq_instance* inst,
                                const pq_run_params* params,
                                const double* omegas, size_t count,
                                double fixed_tau, pq_table** out);

PQ_API void pq_table_free(pq_table* t);
PQ_API size_t pq_table_rows(const pq_table* t);
PQ_API size_t pq_table_cols(const pq_table* t);
PQ_API const char* pq_table_column_name(const pq_table* t, size_t col);
PQ_API double pq_table_value(const pq_table* t, size_t row, size_t col);
PQ_API pq_status pq_table_to_csv(const pq_table* t, char** out_csv);
/* Returns 1 and writes the frequency when a resonance was found, else 0. */
PQ_API int pq_table_first_resonant_omega(const pq_table* t, double* omega_out);
/* Assignments extracted at the first resonance (omega sweeps only). */
PQ_API size_t pq_table_num_resonant_assignments(const pq_table* t);
PQ_API pq_status pq_table_resonant_assignment(const pq_table* t, size_t i,
                                              char* buf, size_t bufsize);

/* --- self verification ------------------------------------------------ */

typedef struct {
    int num_bits;            /* capped at 6 (dense comparisons) */
    uint64_t seed;
    int corrupt_sign_hook;   /* negative control: Hermiticity must fail */
} pq_verify_params;

PQ_API void pq_verify_params_init(pq_verify_params* params);

/* Runs the operator cross-checks on a seeded random instance. Returns
 * PQ_OK even when checks fail; *checks_failed carries the count. */
PQ_API pq_status pq_verify(const pq_verify_params* params, char** report_out,
                           int* checks_failed);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* PROBEQ_H */
