#ifndef CUBE_H
#define CUBE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum {
  CUBE_STATUS_OK = 0,
  CUBE_STATUS_PARSE_ERROR = 1,
  CUBE_STATUS_TYPE_ERROR = 2,
  CUBE_STATUS_FUEL_EXHAUSTED = 3,
  CUBE_STATUS_INVALID_ARGUMENT = 4,
  CUBE_STATUS_PRECONDITION = 5,
  CUBE_STATUS_INTERNAL = 6,
} CubeStatus;

/**
 * A system, a fuel budget and a context.
 */
typedef struct CubeSession CubeSession;

/**
 * A term scoped over the context of the session that produced it.
 */
typedef struct CubeTerm CubeTerm;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Valid until
 * the next call.
 */
const char *cube_last_error(void);

/**
 * Opens a session for a named system or rule list (`cc`, `PP,TP`, ...).
 * A `fuel` of 0 selects the default budget.
 *
 * # Safety
 * `system` must be a NUL-terminated string and `out` a valid pointer.
 */
CubeStatus cube_session_new(const char *system, uint64_t fuel, CubeSession **out);

/**
 * # Safety
 * `s` must come from `cube_session_new` and not be used afterwards.
 */
void cube_session_free(CubeSession *s);

/**
 * Replaces the session context; it must be well formed in the system.
 *
 * # Safety
 * `s` must be a live session and `src` a NUL-terminated string.
 */
CubeStatus cube_session_set_context(CubeSession *s, const char *src);

/**
 * # Safety
 * `s` must be a live session, `src` a NUL-terminated string and `out` a
 * valid pointer.
 */
CubeStatus cube_term_parse(const CubeSession *s, const char *src, CubeTerm **out);

/**
 * # Safety
 * `t` must come from this library and not be used afterwards.
 */
void cube_term_free(CubeTerm *t);

/**
 * Renders a term in concrete syntax.
 *
 * # Safety
 * `t` must be a live term and `out` a valid pointer.
 */
CubeStatus cube_term_print(const CubeTerm *t, char **out);

/**
 * # Safety
 * `p` must come from this library and not be used afterwards.
 */
void cube_string_free(char *p);

/**
 * Infers the type of a term.
 *
 * # Safety
 * Pointers must be live handles and `out` a valid pointer.
 */
CubeStatus cube_infer(const CubeSession *s, const CubeTerm *t, CubeTerm **out);

/**
 * Beta-eta normal form; does not type check.
 *
 * # Safety
 * Pointers must be live handles and `out` a valid pointer.
 */
CubeStatus cube_normalize(const CubeSession *s, const CubeTerm *t, CubeTerm **out);

/**
 * Eta-long form of the normal form of a well-typed term.
 *
 * # Safety
 * Pointers must be live handles and `out` a valid pointer.
 */
CubeStatus cube_eta_long(const CubeSession *s, const CubeTerm *t, CubeTerm **out);

/**
 * Measure of the normal form of a well-typed term.
 *
 * # Safety
 * Pointers must be live handles and `out` a valid pointer.
 */
CubeStatus cube_measure(const CubeSession *s, const CubeTerm *t, uint64_t *out);

/**
 * Marked translation as text: t*, or its eta-long form when `plus` is
 * nonzero.
 *
 * # Safety
 * Pointers must be live handles and `out` a valid pointer.
 */
CubeStatus cube_mark(const CubeSession *s, const CubeTerm *t, bool plus, char **out);

/**
 * Whether the two terms are beta-eta convertible.
 *
 * # Safety
 * Pointers must be live handles and `out` a valid pointer.
 */
CubeStatus cube_convertible(const CubeSession *s, const CubeTerm *a, const CubeTerm *b, bool *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CUBE_H */
