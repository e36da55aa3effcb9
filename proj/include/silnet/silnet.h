/*
 * silnet C API.
 *
 * Every object is an opaque handle created by a silnet_*_create/load/run
 * function and released with the matching *_free function (free functions
 * accept NULL). Fallible calls return a silnet_status; on failure a
 * description is available from silnet_last_error() on the same thread
 * until the next failing call.
 *
 * Strings returned as `char**` are owned by the caller and released with
 * silnet_string_free. `const char*` results stay valid for the lifetime of
 * the handle they came from.
 */
#ifndef SILNET_SILNET_H
#define SILNET_SILNET_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(SILNET_BUILDING_LIBRARY)
#    define SILNET_API __declspec(dllexport)
#  else
#    define SILNET_API __declspec(dllimport)
#  endif
#else
#  define SILNET_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum silnet_status {
    SILNET_OK = 0,
    SILNET_ERR_INVALID_ARGUMENT = 1, /* NULL handle/pointer, bad buffer size */
    SILNET_ERR_CONFIG = 2,           /* invalid parameters or suite config */
    SILNET_ERR_DIMENSION = 3,
    SILNET_ERR_DEGENERATE = 4,       /* e.g. zero weight range, K < 2 */
    SILNET_ERR_NUMERIC = 5,          /* eigensolver failure */
    SILNET_ERR_IO = 6,
    SILNET_ERR_PARSE = 7,
    SILNET_ERR_AGGREGATION = 8,
    SILNET_ERR_INTERNAL = 9
} silnet_status;

SILNET_API const char* silnet_version(void);
SILNET_API const char* silnet_status_name(silnet_status status);
SILNET_API const char* silnet_last_error(void);
SILNET_API void silnet_string_free(char* s);

/* ---- graphs ------------------------------------------------------------ */

typedef struct silnet_graph silnet_graph;

/* `weights` is n*n row-major, symmetric, zero diagonal, entries in [0,1]. */
SILNET_API silnet_status silnet_graph_from_dense(size_t n, const double* weights, silnet_graph** out);
/* `src<TAB>dst<TAB>weight` per line, '#' comments. */
SILNET_API silnet_status silnet_graph_read_edge_list(const char* path, silnet_graph** out);
SILNET_API silnet_status silnet_graph_write_edge_list(const silnet_graph* g, const char* path);
SILNET_API size_t silnet_graph_node_count(const silnet_graph* g);
SILNET_API size_t silnet_graph_edge_count(const silnet_graph* g);
SILNET_API const char* silnet_graph_node_id(const silnet_graph* g, size_t i);
SILNET_API void silnet_graph_free(silnet_graph* g);

/* ---- metrics ----------------------------------------------------------- */

/* Silhouette under d = 1 - w. `labels` are arbitrary integers; `per_node`
 * may be NULL, otherwise it must hold n doubles. */
SILNET_API silnet_status silnet_silhouette(const silnet_graph* g, const int* labels, size_t n,
                                           double* per_node, double* global);
/* Silhouette report as JSON: {"global", "per_node", "a", "b"}. */
SILNET_API silnet_status silnet_silhouette_json(const silnet_graph* g, const int* labels, size_t n,
                                                char** json_out);
SILNET_API silnet_status silnet_adjusted_rand_index(const int* a, const int* b, size_t n, double* out);

/* ---- K selection ------------------------------------------------------- */

typedef struct silnet_select_options {
    int k_min;                 /* default 2 */
    int k_max;                 /* default 20 */
    int kmeans_restarts;       /* default 25 */
    int kmeans_max_iterations; /* default 300 */
    double kmeans_tolerance;   /* default 1e-8 */
    unsigned jobs;             /* default 1; output does not depend on it */
} silnet_select_options;

SILNET_API void silnet_select_options_init(silnet_select_options* options);

typedef struct silnet_selection silnet_selection;

/* `options` may be NULL for defaults. */
SILNET_API silnet_status silnet_select_k(const silnet_graph* g, uint64_t seed, const silnet_select_options* options,
                                         silnet_selection** out);
SILNET_API int silnet_selection_best_k(const silnet_selection* s);
SILNET_API size_t silnet_selection_curve_size(const silnet_selection* s);
SILNET_API silnet_status silnet_selection_curve_at(const silnet_selection* s, size_t index, int* k, double* score);
/* Copies the selected assignment into `labels` (n entries). */
SILNET_API silnet_status silnet_selection_labels(const silnet_selection* s, int* labels, size_t n);
/* `k,silhouette` CSV text. */
SILNET_API silnet_status silnet_selection_curve_csv(const silnet_selection* s, char** csv_out);
/* `node,cluster` CSV text, node ids taken from g. */
SILNET_API silnet_status silnet_selection_assignment_csv(const silnet_selection* s, const silnet_graph* g,
                                                         char** csv_out);
SILNET_API void silnet_selection_free(silnet_selection* s);

/* ---- simulation suites ------------------------------------------------- */

typedef struct silnet_suite silnet_suite;

SILNET_API size_t silnet_builtin_suite_count(void);
SILNET_API const char* silnet_builtin_suite_name(size_t index);
SILNET_API silnet_status silnet_suite_builtin(const char* name, silnet_suite** out);
/* JSON array of scenario objects. */
SILNET_API silnet_status silnet_suite_load(const char* path, silnet_suite** out);
SILNET_API silnet_status silnet_suite_to_json(const silnet_suite* suite, char** json_out);
SILNET_API size_t silnet_suite_scenario_count(const silnet_suite* suite);
SILNET_API const char* silnet_suite_scenario_id(const silnet_suite* suite, size_t index);
/* Replaces every scenario's master seed. */
SILNET_API silnet_status silnet_suite_set_master_seed(silnet_suite* suite, uint64_t seed);
SILNET_API void silnet_suite_free(silnet_suite* suite);

typedef void (*silnet_log_fn)(const char* line, void* user);

typedef struct silnet_run_options {
    unsigned jobs;            /* default 1 */
    int replicates_override;  /* 0 keeps each scenario's count */
    int record_timing;        /* nonzero fills runtime_ms */
    silnet_log_fn log;        /* optional progress sink */
    void* log_user;
} silnet_run_options;

SILNET_API void silnet_run_options_init(silnet_run_options* options);

typedef struct silnet_suite_report silnet_suite_report;

/* Writes replicates.csv, curves.csv, summary.csv and suite.json into
 * out_dir. Returns SILNET_OK even when scenarios failed; check
 * silnet_suite_report_failed_scenarios. */
SILNET_API silnet_status silnet_suite_run(const silnet_suite* suite, const char* out_dir,
                                          const silnet_run_options* options, silnet_suite_report** out);
SILNET_API size_t silnet_suite_report_scenario_count(const silnet_suite_report* r);
SILNET_API const char* silnet_suite_report_line(const silnet_suite_report* r, size_t index);
SILNET_API size_t silnet_suite_report_failed_scenarios(const silnet_suite_report* r);
SILNET_API void silnet_suite_report_free(silnet_suite_report* r);

/* ---- case studies ------------------------------------------------------ */

typedef struct silnet_airline_report silnet_airline_report;

SILNET_API uint64_t silnet_airline_default_seed(void);
/* Loads arcs + city metadata, preprocesses, runs the K sweep and writes
 * airline_{clusters,density,curve}.csv, airline_map.geojson and
 * airline_summary.json into out_dir. `options` may be NULL. */
SILNET_API silnet_status silnet_airline_run(const char* edges_path, const char* meta_path, const char* out_dir,
                                            uint64_t seed, const silnet_select_options* options,
                                            silnet_airline_report** out);
SILNET_API int silnet_airline_report_best_k(const silnet_airline_report* r);
SILNET_API size_t silnet_airline_report_node_count(const silnet_airline_report* r);
SILNET_API size_t silnet_airline_report_edge_count(const silnet_airline_report* r);
SILNET_API size_t silnet_airline_report_cluster_size(const silnet_airline_report* r, size_t cluster);
SILNET_API double silnet_airline_report_diagonal_density(const silnet_airline_report* r, size_t cluster);
SILNET_API size_t silnet_airline_report_warning_count(const silnet_airline_report* r);
SILNET_API const char* silnet_airline_report_warning(const silnet_airline_report* r, size_t index);
SILNET_API void silnet_airline_report_free(silnet_airline_report* r);

/* Three concentric rings of 200 points at radii 1, 2, 3. Writes
 * rings_points.csv, rings_curve.csv and rings_summary.json. */
SILNET_API silnet_status silnet_rings_run(const char* out_dir, uint64_t seed, const silnet_select_options* options,
                                          int* best_k, double* ari);

#ifdef __cplusplus
}
#endif

#endif /* SILNET_SILNET_H */
