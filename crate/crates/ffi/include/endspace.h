#ifndef ENDSPACE_H
#define ENDSPACE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum EsStatus {
  ES_STATUS_OK = 0,
  ES_STATUS_NULL_ARGUMENT = 1,
  ES_STATUS_INVALID_UTF8 = 2,
  ES_STATUS_PARSE = 3,
  /**
   * Inputs that do not fit the tree.
   */
  ES_STATUS_INVALID_INPUT = 4,
  ES_STATUS_NOT_UNIFORM = 5,
  ES_STATUS_NOT_FINITE_ADHESION = 6,
  ES_STATUS_EQUAL_ENDS = 7,
  ES_STATUS_PANIC = 8,
} EsStatus;

typedef enum EsVerdict {
  ES_VERDICT_CONVERGES = 0,
  ES_VERDICT_DIVERGES = 1,
  ES_VERDICT_UNKNOWN = 2,
} EsVerdict;

/**
 * A uniform graph on a described tree.
 */
typedef struct EsGraph EsGraph;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread. Valid until the next
 * failing call; never null.
 */
const char *es_last_error(void);

/**
 * Builds the graph for `spec` (`catalog:NAME` or the tree DSL). With
 * `alternate` the second pick enumeration is used.
 *
 * # Safety
 * `spec` must be a NUL-terminated string and `out` writable.
 */
enum EsStatus es_graph_new(const char *spec, bool alternate, struct EsGraph **out);

/**
 * # Safety
 * `g` must come from [`es_graph_new`] and not be used afterwards.
 */
void es_graph_free(struct EsGraph *g);

/**
 * Tree height, rendered, as an owned string.
 *
 * # Safety
 * `g` must be a live handle and `out` writable.
 */
enum EsStatus es_graph_height(const struct EsGraph *g, char **out);

/**
 * Runs the T-graph axiom checks on a truncation.
 *
 * # Safety
 * `g` must be a live handle and `pass` writable.
 */
enum EsStatus es_check_axioms(const struct EsGraph *g,
                              uint64_t depth,
                              uint64_t breadth,
                              bool *pass);

/**
 * Exact convergence of the template `seq` to the high-ray `target`.
 *
 * # Safety
 * `g` must be a live handle, the strings NUL-terminated, `out` writable.
 */
enum EsStatus es_converges(const struct EsGraph *g,
                           const char *seq,
                           const char *target,
                           enum EsVerdict *out);

/**
 * Convergence judged on a truncation of the given depth.
 *
 * # Safety
 * As for [`es_converges`].
 */
enum EsStatus es_oracle_converges(const struct EsGraph *g,
                                  const char *seq,
                                  const char *target,
                                  size_t depth,
                                  enum EsVerdict *out);

/**
 * A non-limit node lying on exactly one of the two high-rays; `on_first`
 * tells which.
 *
 * # Safety
 * `g` must be a live handle, the strings NUL-terminated, the outputs writable.
 */
enum EsStatus es_distinguish(const struct EsGraph *g,
                             const char *first,
                             const char *second,
                             char **node,
                             bool *on_first);

/**
 * # Safety
 * `s` must be a string from this library, or null.
 */
void es_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ENDSPACE_H */
