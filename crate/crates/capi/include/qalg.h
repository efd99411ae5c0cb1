/* C interface for the qalg quantum-algebra discriminant library. */

#ifndef QALG_H
#define QALG_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes; nonzero values match the CLI exit codes.
typedef enum QalgStatus {
  QALG_STATUS_OK = 0,
  QALG_STATUS_PARSE_ERROR = 1,
  QALG_STATUS_HYPOTHESIS_ERROR = 2,
  QALG_STATUS_MISMATCH = 3,
  QALG_STATUS_CLOSURE_UNKNOWN = 4,
  QALG_STATUS_NULL_ARGUMENT = 5,
  QALG_STATUS_INTERNAL_ERROR = 6,
} QalgStatus;

// Which discriminant route to run.
typedef enum QalgMethod {
  QALG_METHOD_BRUTE = 0,
  QALG_METHOD_FORMULA = 1,
} QalgMethod;

// Closed-form selector for verification.
typedef enum QalgFormula {
  QALG_FORMULA_AUTO = 0,
  QALG_FORMULA_SKEW_MONOMIAL = 1,
  QALG_FORMULA_Q_WEYL = 2,
  QALG_FORMULA_Q_WEYL_BOUNDED = 3,
  QALG_FORMULA_CLIFFORD_DET = 4,
} QalgFormula;

// An opaque parsed document plus its session limits.
typedef struct QalgDocument QalgDocument;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// The last error message on this thread; valid until the next failing
// call on the same thread. Never NULL.
const char *qalg_last_error_message(void);

// Library version as a static string.
const char *qalg_version(void);

// Parses an `.alg` document from a NUL-terminated UTF-8 string.
//
// # Safety
// `text` must point to a valid NUL-terminated string and `out` to a
// writable pointer slot.
enum QalgStatus qalg_document_parse(const char *text, struct QalgDocument **out);

// Releases a document handle.
//
// # Safety
// `doc` must come from `qalg_document_parse` and not be used afterwards.
void qalg_document_free(struct QalgDocument *doc);

// Releases a string returned through any out-pointer here.
//
// # Safety
// `s` must come from this library and not be used afterwards.
void qalg_string_free(char *s);

// Canonical rendering of the parsed document.
//
// # Safety
// `doc` must be a live handle; `out` a writable slot.
enum QalgStatus qalg_document_render(const struct QalgDocument *doc, char **out);

// Center analysis as JSON.
//
// # Safety
// `doc` must be a live handle; `out` a writable slot.
enum QalgStatus qalg_center_json(const struct QalgDocument *doc, char **out);

// Discriminant report as JSON.
//
// # Safety
// `doc` must be a live handle; `out` a writable slot.
enum QalgStatus qalg_discriminant_json(const struct QalgDocument *doc,
                                       enum QalgMethod method,
                                       bool factor,
                                       char **out);

// Runs the oracle against a closed form; `Ok` on a match, `Mismatch`
// otherwise. The JSON report lands in `out` either way.
//
// # Safety
// `doc` must be a live handle; `out` a writable slot.
enum QalgStatus qalg_verify_json(const struct QalgDocument *doc,
                                 enum QalgFormula formula,
                                 char **out);

// Divisor-closure certification as JSON; `Ok` when certified-full,
// `ClosureUnknown` otherwise. `substitutions` is an optional
// semicolon-separated list of `var=polynomial` rewrites applied to the
// discriminant first; pass NULL for none. `max_rounds = 0` uses the
// session default.
//
// # Safety
// `doc` must be a live handle, `substitutions` NULL or NUL-terminated,
// `out` a writable slot.
enum QalgStatus qalg_closure_json(const struct QalgDocument *doc,
                                  uint32_t max_rounds,
                                  const char *substitutions,
                                  char **out);

// Stage-by-stage diagonalization of the quadratic form, as JSON.
//
// # Safety
// `doc` must be a live handle; `out` a writable slot.
enum QalgStatus qalg_diagonalize_json(const struct QalgDocument *doc, char **out);

// Graded dimension series with the enumeration cross-check, as JSON.
//
// # Safety
// `doc` must be a live handle; `out` a writable slot.
enum QalgStatus qalg_hilbert_json(const struct QalgDocument *doc, uint32_t max_degree, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QALG_H */
