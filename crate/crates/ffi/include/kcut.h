#ifndef KCUT_H
#define KCUT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum KcutStatus {
  KCUT_STATUS_OK = 0,
  KCUT_STATUS_NULL_POINTER = 1,
  KCUT_STATUS_INVALID_ARGUMENT = 2,
  KCUT_STATUS_PARSE = 3,
  KCUT_STATUS_INVALID_GRAPH = 4,
  KCUT_STATUS_TOO_LARGE = 5,
  KCUT_STATUS_OUT_OF_RANGE = 6,
  KCUT_STATUS_PANIC = 7,
} KcutStatus;

// Opaque graph handle.
typedef struct KcutGraph KcutGraph;

// Opaque enumeration result.
typedef struct KcutResult KcutResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or NULL. Valid until
// the next call into this library from the same thread.
const char *kcut_last_error(void);

// Builds a graph on vertices `0..n` from `m` edges `(us[i], vs[i], ws[i])`.
// Parallel edges are summed.
//
// # Safety
// `us`, `vs` and `ws` must each point to `m` readable elements (or may be
// NULL when `m == 0`); `out` must be writable.
enum KcutStatus kcut_graph_new(size_t n,
                               const size_t *us,
                               const size_t *vs,
                               const uint64_t *ws,
                               size_t m,
                               struct KcutGraph **out);

// Parses an edge list or DIMACS text (detected automatically).
//
// # Safety
// `text` must be a NUL-terminated UTF-8 string; `out` must be writable.
enum KcutStatus kcut_graph_parse(const char *text, struct KcutGraph **out);

// # Safety
// `graph` must come from this library and not be freed twice. NULL is a
// no-op.
void kcut_graph_free(struct KcutGraph *graph);

// # Safety
// `graph` must be NULL or a live handle.
size_t kcut_graph_vertex_count(const struct KcutGraph *graph);

// # Safety
// `graph` must be NULL or a live handle.
size_t kcut_graph_edge_count(const struct KcutGraph *graph);

// Every minimum k-cut of `graph`. `gamma_num / gamma_den` sets γ;
// `base_k == 0` keeps the default base case threshold.
//
// # Safety
// `graph` must be a live handle and `out` writable.
enum KcutStatus kcut_enumerate(const struct KcutGraph *graph,
                               size_t k,
                               int64_t gamma_num,
                               int64_t gamma_den,
                               size_t base_k,
                               uint64_t seed,
                               struct KcutResult **out);

// # Safety
// `result` must come from this library and not be freed twice. NULL is a
// no-op.
void kcut_result_free(struct KcutResult *result);

// Optimal weight, or 0 for NULL.
//
// # Safety
// `result` must be NULL or a live handle.
uint64_t kcut_result_weight(const struct KcutResult *result);

// Number of minimum k-cuts, or 0 for NULL.
//
// # Safety
// `result` must be NULL or a live handle.
size_t kcut_result_count(const struct KcutResult *result);

// Writes the part index of every vertex of cut `index` into `labels`,
// which holds `len` entries; `len` must be at least the vertex count.
// Parts are numbered by their smallest vertex.
//
// # Safety
// `result` must be a live handle and `labels` must point to `len`
// writable elements.
enum KcutStatus kcut_result_labels(const struct KcutResult *result,
                                   size_t index,
                                   size_t *labels,
                                   size_t len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* KCUT_H */
