/* C interface for the euler-orient library.
 *
 * Graphs are opaque handles created by the eo_graph_* constructors and
 * released with eo_graph_free. Every fallible call returns an EoStatus and
 * writes results through out-pointers. Strings returned through out-pointers
 * are heap-allocated; release them with eo_string_free. eo_last_error_message
 * returns a copy of the current thread's most recent error message (or NULL).
 *
 * Exact counts are returned as decimal strings: Eulerian-orientation and
 * spanning-tree counts overflow fixed-width integers already at modest sizes.
 *
 * This header is maintained by hand; euler-orient-ffi's test suite checks it
 * against the exported symbol list.
 */

#ifndef EULER_ORIENT_H
#define EULER_ORIENT_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct EoGraph EoGraph;

typedef enum EoStatus {
  EO_OK = 0,
  EO_NULL_POINTER = 1,
  EO_INVALID_UTF8 = 2,
  EO_PARSE_ERROR = 3,
  EO_INVALID_INPUT = 4,
  EO_CAP_EXCEEDED = 5,
  EO_NUMERIC_ERROR = 6,
} EoStatus;

/* Error reporting and memory management. */
char *eo_last_error_message(void);
const char *eo_version(void);
void eo_string_free(char *s);

/* Constructors; every successful call must be paired with eo_graph_free. */
EoStatus eo_graph_parse(const char *edge_list_text, EoGraph **out);
EoStatus eo_graph_complete(uint32_t n, EoGraph **out);
EoStatus eo_graph_complete_bipartite(uint32_t a, uint32_t b, EoGraph **out);
EoStatus eo_graph_cycle(uint32_t n, EoGraph **out);
EoStatus eo_graph_random_even(uint32_t n, uint32_t toggles, uint64_t seed,
                              EoGraph **out);
void eo_graph_free(EoGraph *g);

/* Accessors. */
EoStatus eo_graph_vertex_count(const EoGraph *g, uint32_t *out);
EoStatus eo_graph_edge_count(const EoGraph *g, uint32_t *out);
EoStatus eo_graph_is_all_even(const EoGraph *g, uint8_t *out);
EoStatus eo_graph_is_connected(const EoGraph *g, uint8_t *out);
EoStatus eo_graph_to_edge_list(const EoGraph *g, char **out);

/* Exact counts (decimal strings) and spectral estimates. */
EoStatus eo_count_exact(const EoGraph *g, uint32_t edge_cap, char **out);
EoStatus eo_spanning_tree_count(const EoGraph *g, char **out);
EoStatus eo_theta_estimate_ln(const EoGraph *g, double *out);
EoStatus eo_algebraic_connectivity(const EoGraph *g, double *out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* EULER_ORIENT_H */
