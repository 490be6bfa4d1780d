#ifndef MINORLAB_H
#define MINORLAB_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum MlStatus {
  ML_STATUS_OK = 0,
  ML_STATUS_INVALID_ARGUMENT = 1,
  ML_STATUS_PARSE_ERROR = 2,
  ML_STATUS_LIMIT_EXCEEDED = 3,
  ML_STATUS_DENSITY_BELOW_THRESHOLD = 4,
  ML_STATUS_VERIFICATION_FAILED = 5,
  ML_STATUS_INTERNAL = 6,
  ML_STATUS_PANIC = 7,
} MlStatus;

typedef enum MlProfileKind {
  ML_PROFILE_KIND_DELTA = 0,
  ML_PROFILE_KIND_DELTA_N = 1,
} MlProfileKind;

typedef enum MlGenModel {
  ML_GEN_MODEL_GNP = 0,
  ML_GEN_MODEL_HIGH_GIRTH = 1,
  ML_GEN_MODEL_DISJOINT_CLIQUES = 2,
  ML_GEN_MODEL_RANDOM_REGULAR = 3,
} MlGenModel;

// Opaque graph handle.
typedef struct MlGraph MlGraph;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread; empty after a success.
// The pointer stays valid until the next `ml_` call on the same thread.
const char *ml_last_error(void);

// # Safety
// `s` must be null or a string returned by this library, not yet freed.
void ml_string_free(char *s);

// Builds a graph on `n` vertices from `m` pairs stored flat in `edges`.
//
// # Safety
// `edges` must point to `2 * m` readable values (or be null when `m == 0`);
// `out` must be writable.
enum MlStatus ml_graph_from_edges(size_t n, const size_t *edges, size_t m, struct MlGraph **out);

// Parses the edge-list text format (`p n m` header optional).
//
// # Safety
// `edge_list` must be a NUL-terminated string; `out` must be writable.
enum MlStatus ml_graph_parse(const char *edge_list, struct MlGraph **out);

// Seeded generator. `model` is an `MlGenModel` value; `base_c` only
// matters for `HighGirth`.
//
// # Safety
// `out` must be writable.
enum MlStatus ml_gen(uint32_t model,
                     size_t n,
                     uint64_t param,
                     uint64_t base_c,
                     uint64_t seed,
                     struct MlGraph **out);

// # Safety
// `g` must be null or a handle from this library, not yet freed.
void ml_graph_free(struct MlGraph *g);

// Vertex count, 0 for a null handle.
//
// # Safety
// `g` must be null or a live handle.
size_t ml_graph_order(const struct MlGraph *g);

// Edge count, 0 for a null handle.
//
// # Safety
// `g` must be null or a live handle.
size_t ml_graph_edge_count(const struct MlGraph *g);

// Canonical edge-list text of `g`.
//
// # Safety
// `g` must be a live handle; `out` must be writable.
enum MlStatus ml_graph_to_edge_list(const struct MlGraph *g, char **out);

// Expansion verdict as JSON. `kind` is an `MlProfileKind` value and
// `ambient_n == 0` means the graph order.
//
// # Safety
// `g` must be a live handle, `delta` a NUL-terminated `p/q` string and
// `json_out` writable.
enum MlStatus ml_check_expander(const struct MlGraph *g,
                                uint32_t kind,
                                const char *delta,
                                size_t ambient_n,
                                uint64_t seed,
                                char **json_out);

// Extracts an expander. `trace_json_out` may be null.
//
// # Safety
// `g` must be a live handle, `delta` a NUL-terminated string, `h_out`
// writable and `trace_json_out` null or writable.
enum MlStatus ml_extract(const struct MlGraph *g,
                         uint32_t kind,
                         const char *delta,
                         size_t ambient_n,
                         uint64_t seed,
                         struct MlGraph **h_out,
                         char **trace_json_out);

// Replays a JSON trace against `g`. `*valid` is set on `Ok`; a malformed
// trace is an error, a well-formed but wrong one gives `*valid = false`.
//
// # Safety
// `g` must be a live handle, `trace_json` a NUL-terminated string and
// `valid` writable.
enum MlStatus ml_verify_trace(const struct MlGraph *g, const char *trace_json, bool *valid);

// Full pipeline; the report is JSON. `c_of_t` may be null for the
// built-in values at `t = 3, 4, 5`.
//
// # Safety
// `g` must be a live handle, `epsilon` a NUL-terminated string, `c_of_t`
// null or NUL-terminated and `report_out` writable.
enum MlStatus ml_find_minor(const struct MlGraph *g,
                            size_t t,
                            const char *epsilon,
                            const char *c_of_t,
                            uint64_t seed,
                            char **report_out);

// Checks a JSON minor model against `g`.
//
// # Safety
// `g` must be a live handle, `model_json` a NUL-terminated string and
// `valid` writable.
enum MlStatus ml_verify_model(const struct MlGraph *g, const char *model_json, bool *valid);

// Exact Hadwiger number; graphs above the brute-force cap are rejected.
//
// # Safety
// `g` must be a live handle and `out` writable.
enum MlStatus ml_hadwiger_number(const struct MlGraph *g, size_t *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MINORLAB_H */
