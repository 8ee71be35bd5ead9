#ifndef KCUT_H
#define KCUT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Which solver branch to run.
 */
typedef enum KcutBranch {
  KCUT_BRANCH_AUTO = 0,
  KCUT_BRANCH_EXACT = 1,
  KCUT_BRANCH_SPARSIFY = 2,
} KcutBranch;

/**
 * Result code of every fallible call.
 */
typedef enum KcutStatus {
  KCUT_STATUS_OK = 0,
  KCUT_STATUS_NULL_POINTER = 1,
  KCUT_STATUS_INVALID_UTF8 = 2,
  KCUT_STATUS_PARSE = 3,
  /**
   * Bad argument: k out of range, weighted or non-simple graph, and so on.
   */
  KCUT_STATUS_INVALID_INPUT = 4,
  KCUT_STATUS_TOO_LARGE = 5,
  /**
   * Internal consistency check failed. Please report it.
   */
  KCUT_STATUS_INVARIANT = 6,
  KCUT_STATUS_BUFFER_TOO_SMALL = 7,
  KCUT_STATUS_PANIC = 8,
} KcutStatus;

/**
 * Opaque graph handle.
 */
typedef struct KcutGraph KcutGraph;

/**
 * Opaque result handle.
 */
typedef struct KcutReport KcutReport;

typedef struct KcutOptions {
  uint64_t seed;
  /**
   * Cap on contraction trials per round.
   */
  uint64_t trial_cap;
  enum KcutBranch branch;
} KcutOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread. Empty if none. The
 * pointer stays valid until the next failing call on the same thread.
 */
const char *kcut_last_error(void);

struct KcutOptions kcut_options_default(void);

/**
 * Parses an edge-list document (`n m` header, then one `u v` per line).
 *
 * # Safety
 * `text` must be a nul-terminated string and `out` a valid pointer.
 */
enum KcutStatus kcut_graph_parse(const char *text, struct KcutGraph **out);

/**
 * Builds a simple graph on `n` vertices from `m` edges given as `2m`
 * endpoints `u0 v0 u1 v1 ...`.
 *
 * # Safety
 * `endpoints` must point to `2 * m` readable values (it may be null when
 * `m == 0`) and `out` must be valid.
 */
enum KcutStatus kcut_graph_from_edges(size_t n,
                                      const size_t *endpoints,
                                      size_t m,
                                      struct KcutGraph **out);

/**
 * # Safety
 * `graph` must come from this library and not be freed already. Null is a no-op.
 */
void kcut_graph_free(struct KcutGraph *graph);

/**
 * Vertex count, or 0 for null.
 *
 * # Safety
 * `graph` must be null or a live handle.
 */
size_t kcut_graph_vertex_count(const struct KcutGraph *graph);

/**
 * Total edge weight, which is the edge count for simple graphs.
 *
 * # Safety
 * `graph` must be null or a live handle.
 */
uint64_t kcut_graph_edge_count(const struct KcutGraph *graph);

/**
 * Minimum k-cut with default options and the given seed.
 *
 * # Safety
 * `graph` must be a live handle and `out` a valid pointer.
 */
enum KcutStatus kcut_solve(const struct KcutGraph *graph,
                           size_t k,
                           uint64_t seed,
                           struct KcutReport **out);

/**
 * # Safety
 * `graph` must be a live handle, `options` and `out` valid pointers.
 */
enum KcutStatus kcut_solve_with_options(const struct KcutGraph *graph,
                                        size_t k,
                                        const struct KcutOptions *options,
                                        struct KcutReport **out);

/**
 * Exhaustive minimum k-cut; refuses graphs above 14 vertices.
 *
 * # Safety
 * `graph` must be a live handle and `out` a valid pointer.
 */
enum KcutStatus kcut_oracle(const struct KcutGraph *graph, size_t k, struct KcutReport **out);

/**
 * # Safety
 * `report` must be null or a live handle.
 */
uint64_t kcut_report_value(const struct KcutReport *report);

/**
 * # Safety
 * `report` must be null or a live handle.
 */
size_t kcut_report_k(const struct KcutReport *report);

/**
 * Number of labels, one per vertex.
 *
 * # Safety
 * `report` must be null or a live handle.
 */
size_t kcut_report_vertex_count(const struct KcutReport *report);

/**
 * Copies the part label of every vertex into `buf`. Labels are canonical:
 * part 0 contains vertex 0 and new labels appear in vertex order.
 *
 * # Safety
 * `report` must be a live handle and `buf` writable for `len` values.
 */
enum KcutStatus kcut_report_labels(const struct KcutReport *report, size_t *buf, size_t len);

/**
 * Full report as JSON. Release with [`kcut_string_free`]. Null if `report`
 * is null.
 *
 * # Safety
 * `report` must be null or a live handle.
 */
char *kcut_report_json(const struct KcutReport *report);

/**
 * # Safety
 * `s` must be null or come from [`kcut_report_json`].
 */
void kcut_string_free(char *s);

/**
 * # Safety
 * `report` must be null or a live handle.
 */
void kcut_report_free(struct KcutReport *report);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* KCUT_H */
