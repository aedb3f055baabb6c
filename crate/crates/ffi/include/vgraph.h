/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#ifndef VGRAPH_H
#define VGRAPH_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum VgFormat {
  /**
   * Edge list when the text mentions `n=` or a dash, graph6 otherwise.
   */
  VG_FORMAT_AUTO = 0,
  VG_FORMAT_EDGE_LIST = 1,
  VG_FORMAT_GRAPH6 = 2,
} VgFormat;

/**
 * Overall verdict; the values match the command-line exit codes.
 */
typedef enum VgOverall {
  VG_OVERALL_SOLVABLE_BY_MOVES = 0,
  VG_OVERALL_FINITE_SOLVABLE_UNDECIDED = 10,
  VG_OVERALL_FAILS_FINITE_SOLVABLE = 20,
  VG_OVERALL_NOT_SOLVABLE = 30,
} VgOverall;

typedef enum VgRule {
  VG_RULE_NONE = 0,
  VG_RULE_NOT_CONNECTED = 1,
  VG_RULE_NOT_BICONNECTED = 2,
  VG_RULE_MIN_DEGREE = 3,
  VG_RULE_ADJACENT_DEGREE2 = 4,
  VG_RULE_TOO_FEW_EDGES = 5,
  VG_RULE_SUBGRAPH_DEFICIENCY = 6,
  VG_RULE_DISJOINT_FAMILY_DEFICIENCY = 7,
} VgRule;

typedef enum VgStatus {
  VG_STATUS_OK = 0,
  VG_STATUS_NULL_POINTER = 1,
  VG_STATUS_PARSE = 2,
  VG_STATUS_INVALID = 3,
  VG_STATUS_DOMAIN = 4,
  VG_STATUS_TOO_LARGE = 5,
  VG_STATUS_DEGENERATE = 6,
  VG_STATUS_IO = 7,
  /**
   * The library panicked; this is a bug.
   */
  VG_STATUS_INTERNAL = 8,
  VG_STATUS_UTF8 = 9,
} VgStatus;

/**
 * An undirected simple graph on `n` cameras.
 */
typedef struct VgGraph VgGraph;

typedef struct VgOptions {
  size_t trials;
  int64_t bound;
  uint64_t seed;
} VgOptions;

typedef struct VgVerdict {
  enum VgOverall overall;
  enum VgRule violated_rule;
  bool moves_solvable;
  /**
   * False when a necessary condition fails and the tangent test is skipped.
   */
  bool finite_checked;
  bool finite_solvable;
  size_t kernel_dim;
  size_t expected_kernel_dim;
} VgVerdict;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * The message of the last failed call on this thread, or null. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *vg_last_error_message(void);

/**
 * Library version as a static string.
 */
const char *vg_version(void);

/**
 * Default options: 3 trials, bound 1000, seed 42.
 */
struct VgOptions vg_default_options(void);

/**
 * Parses a graph from NUL-terminated text.
 *
 * # Safety
 * `text` must be a valid C string and `out` writable.
 */
enum VgStatus vg_graph_parse(const char *text, enum VgFormat format, struct VgGraph **out);

/**
 * Builds a graph from `edge_count` 0-based pairs stored flat in `edges`.
 *
 * # Safety
 * `edges` must point to `2 * edge_count` values (or be null when
 * `edge_count` is 0) and `out` must be writable.
 */
enum VgStatus vg_graph_new(size_t n, const size_t *edges, size_t edge_count, struct VgGraph **out);

/**
 * A solvable graph with `n >= 2` vertices and the minimum edge count.
 *
 * # Safety
 * `out` must be writable.
 */
enum VgStatus vg_minimal_solvable(size_t n, struct VgGraph **out);

/**
 * Releases a graph. Null is ignored.
 *
 * # Safety
 * `g` must come from this library and not be used afterwards.
 */
void vg_graph_free(struct VgGraph *g);

/**
 * Vertex count, or 0 for null.
 *
 * # Safety
 * `g` must be null or a live handle.
 */
size_t vg_graph_vertex_count(const struct VgGraph *g);

/**
 * Edge count, or 0 for null.
 *
 * # Safety
 * `g` must be null or a live handle.
 */
size_t vg_graph_edge_count(const struct VgGraph *g);

/**
 * Serializes `g`; edge lists are 1-based. Free the result with
 * `vg_string_free`.
 *
 * # Safety
 * `g` must be a live handle and `out` writable.
 */
enum VgStatus vg_graph_to_string(const struct VgGraph *g, enum VgFormat format, char **out);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void vg_string_free(char *s);

/**
 * Runs every check and fills `out`. `opts` may be null for the defaults.
 *
 * # Safety
 * `g` must be a live handle, `opts` null or valid, `out` writable.
 */
enum VgStatus vg_check(const struct VgGraph *g,
                       const struct VgOptions *opts,
                       struct VgVerdict *out);

/**
 * The full report as JSON (1-based labels, no timings). Free the result
 * with `vg_string_free`.
 *
 * # Safety
 * `g` must be a live handle, `opts` null or valid, `out` writable.
 */
enum VgStatus vg_check_json(const struct VgGraph *g, const struct VgOptions *opts, char **out);

/**
 * Only the necessary conditions; `out` receives `VG_RULE_NONE` when all hold.
 *
 * # Safety
 * `g` must be a live handle and `out` writable.
 */
enum VgStatus vg_check_necessary(const struct VgGraph *g, enum VgRule *out);

/**
 * Whether the move closure reaches the complete graph.
 *
 * # Safety
 * `g` must be a live handle and `out` writable.
 */
enum VgStatus vg_moves_solvable(const struct VgGraph *g, bool *out);

/**
 * Minimum edge count of a solvable graph on `n >= 2` vertices.
 *
 * # Safety
 * `out` must be writable.
 */
enum VgStatus vg_e_min(size_t n, size_t *out);

/**
 * `7e - 11n + 15`.
 */
int64_t vg_deficiency(size_t n, size_t e);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* VGRAPH_H */
