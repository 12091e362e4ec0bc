/* nrmlab — quantity-based revenue-management lab, C interface.
 *
 * All functions return nrm_status; NRM_OK is 0.  On failure,
 * nrm_last_error() describes what went wrong (thread-local storage).
 * Objects are opaque handles released with the matching *_free function;
 * every function tolerates NULL output pointers for values the caller does
 * not need, but never NULL handles.
 */
#ifndef NRMLAB_H
#define NRMLAB_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define NRM_API __declspec(dllexport)
#else
#define NRM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum nrm_status {
    NRM_OK = 0,
    NRM_ERROR_INVALID_ARGUMENT = 1, /* bad argument, window, policy name, ... */
    NRM_ERROR_PARSE = 2,            /* malformed JSON / unknown or missing key */
    NRM_ERROR_VALIDATION = 3,       /* structurally invalid instance */
    NRM_ERROR_NUMERICAL = 4,        /* solver safeguard tripped */
    NRM_ERROR_IO = 5,               /* file could not be read or written */
    NRM_ERROR_RUNTIME = 6           /* anything else */
} nrm_status;

typedef struct nrm_instance nrm_instance; /* validated problem instance */
typedef struct nrm_path nrm_path;         /* realized arrival path */
typedef struct nrm_table nrm_table;       /* aggregated experiment results */

NRM_API const char* nrm_version(void);

/* Message for the most recent failure on this thread; never NULL. */
NRM_API const char* nrm_last_error(void);

/* --- instances ---------------------------------------------------------- */

NRM_API nrm_status nrm_instance_parse_json(const char* json_text, nrm_instance** out);
NRM_API nrm_status nrm_instance_load_file(const char* path, nrm_instance** out);
NRM_API void nrm_instance_free(nrm_instance* inst);

NRM_API size_t nrm_instance_num_classes(const nrm_instance* inst);
NRM_API size_t nrm_instance_num_resources(const nrm_instance* inst);
NRM_API double nrm_instance_horizon(const nrm_instance* inst);

/* Solve the rate relaxation.  value_out receives the horizon-scaled
 * optimum; x_out (if non-NULL) must hold num_classes doubles.  The
 * degeneracy verdict counts solution entries at a box bound and binding
 * resources; the optimum is nondegenerate iff the counts sum to the number
 * of classes. */
NRM_API nrm_status nrm_solve_dlp(const nrm_instance* inst, double* value_out,
                                 double* x_out, int* bound_count_out,
                                 int* binding_count_out, int* nondegenerate_out);

/* --- arrival paths ------------------------------------------------------ */

NRM_API nrm_status nrm_path_sample(const nrm_instance* inst, uint64_t seed,
                                   nrm_path** out);
NRM_API nrm_status nrm_path_load_file(const nrm_instance* inst, const char* file,
                                      nrm_path** out);
NRM_API nrm_status nrm_path_dump_file(const nrm_path* path, const char* file);
NRM_API void nrm_path_free(nrm_path* path);
NRM_API size_t nrm_path_num_events(const nrm_path* path);

/* Clairvoyant optimum for one path. */
NRM_API nrm_status nrm_hindsight_value(const nrm_instance* inst, const nrm_path* path,
                                       double* value_out);

/* Run one policy ("SPA", "FR", "IR", "IRT" or "FRT") on one path.  If
 * trace_csv is non-NULL the per-event trace is written there (columns:
 * time, class, decision, prob, remaining capacities). */
NRM_API nrm_status nrm_policy_run(const nrm_instance* inst, const nrm_path* path,
                                  const char* policy, const char* trace_csv,
                                  double* revenue_out);

/* --- experiments --------------------------------------------------------- */

/* Run the experiment described by a spec file.  workers <= 0 picks the
 * hardware thread count; the result is identical for every worker count.
 * seed_override (applied when use_seed_override != 0) replaces the seed
 * from the spec. */
NRM_API nrm_status nrm_experiment_run_file(const char* spec_file, int workers,
                                           int use_seed_override, uint64_t seed_override,
                                           nrm_table** out);

NRM_API nrm_status nrm_table_export_csv(const nrm_table* table, const char* file);
NRM_API size_t nrm_table_num_rows(const nrm_table* table);

/* Read row `index`.  policy_out (if non-NULL) receives a pointer to a
 * static policy name. */
NRM_API nrm_status nrm_table_row(const nrm_table* table, size_t index, double* sweep_out,
                                 const char** policy_out, double* mean_regret_out,
                                 double* stderr_out, int* n_paths_out, double* v_dlp_out,
                                 double* v_ho_hat_out);

/* Least-squares slope of log(mean regret) vs log(sweep value) for one
 * policy. */
NRM_API nrm_status nrm_table_slope(const nrm_table* table, const char* policy,
                                   double* slope_out, double* r_squared_out);
NRM_API void nrm_table_free(nrm_table* table);

#ifdef __cplusplus
}
#endif

#endif /* NRMLAB_H */
