#ifndef MUKIT_H
#define MUKIT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes mirroring the CLI exit codes, plus FFI-specific failures.
 */
typedef enum MukitStatus {
  /**
   * The check passed.
   */
  MukitStatus_Ok = 0,
  /**
   * The check found a mathematical counterexample.
   */
  MukitStatus_Fail = 1,
  /**
   * A cap or budget was exhausted before a verdict.
   */
  MukitStatus_Unknown = 2,
  /**
   * Malformed input (schema, precondition, or validation error).
   */
  MukitStatus_InputError = 3,
  /**
   * A null pointer or invalid UTF-8 was passed in.
   */
  MukitStatus_BadPointer = 4,
  /**
   * A panic was caught at the boundary.
   */
  MukitStatus_Panic = 5,
} MukitStatus;

/**
 * Opaque certificate handle.
 */
typedef struct MukitCertificate MukitCertificate;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * The last error message on this thread, or null. Free with
 * [`mukit_string_free`].
 */
char *mukit_last_error_message(void);

/**
 * # Safety
 * `s` must be null or a string previously returned by this library.
 */
void mukit_string_free(char *s);

/**
 * # Safety
 * `cert` must be null or a handle previously returned by this library.
 */
void mukit_certificate_free(struct MukitCertificate *cert);

/**
 * Canonical JSON of a certificate. Free with [`mukit_string_free`].
 *
 * # Safety
 * `cert` must be a valid handle.
 */
char *mukit_certificate_json(const struct MukitCertificate *cert);

/**
 * The outcome of a certificate as a status code.
 *
 * # Safety
 * `cert` must be a valid handle.
 */
enum MukitStatus mukit_certificate_outcome(const struct MukitCertificate *cert);

/**
 * Least fixed point of a monotone endomap instance (kind: poset_map).
 * `engine` is one of kleene, zermelo, tarski, pataraia, monoid, all.
 *
 * # Safety
 * String arguments must be valid NUL-terminated UTF-8; `out_cert` may be
 * null when only the status is wanted.
 */
enum MukitStatus mukit_fixpoint(const char *engine,
                                const char *instance_json,
                                struct MukitCertificate **out_cert);

/**
 * Unique coalgebra-to-algebra morphism for a well-founded coalgebra.
 *
 * # Safety
 * As for [`mukit_fixpoint`].
 */
enum MukitStatus mukit_hylo(const char *coalgebra_json,
                            const char *algebra_json,
                            struct MukitCertificate **out_cert);

/**
 * Iterate the initial-algebra chain of a functor instance.
 *
 * # Safety
 * As for [`mukit_fixpoint`].
 */
enum MukitStatus mukit_chain(uint32_t budget,
                             const char *functor_json,
                             struct MukitCertificate **out_cert);

/**
 * Initial algebra from a pre-fixed point (kind: prefixed_point).
 * `via` is pataraia or zermelo.
 *
 * # Safety
 * As for [`mukit_fixpoint`].
 */
enum MukitStatus mukit_initial_algebra(const char *via,
                                       const char *prefixed_json,
                                       struct MukitCertificate **out_cert);

/**
 * Run both initial-algebra constructions and compare them.
 *
 * # Safety
 * As for [`mukit_fixpoint`].
 */
enum MukitStatus mukit_cross_validate(uint32_t budget,
                                      const char *prefixed_json,
                                      struct MukitCertificate **out_cert);

/**
 * Colimit characterization for a directed diagram of embeddings.
 *
 * # Safety
 * As for [`mukit_fixpoint`].
 */
enum MukitStatus mukit_verify_colimit(const char *diagram_json, struct MukitCertificate **out_cert);

/**
 * Smoothness of a directed subset family (kind: subset_family).
 *
 * # Safety
 * As for [`mukit_fixpoint`].
 */
enum MukitStatus mukit_check_smooth(const char *family_json, struct MukitCertificate **out_cert);

/**
 * Directed join of finite metric subspaces (kind: metric_family).
 *
 * # Safety
 * As for [`mukit_fixpoint`].
 */
enum MukitStatus mukit_metric_join(const char *family_json, struct MukitCertificate **out_cert);

/**
 * Re-verify a certificate by direct evaluation. `files_json`, when not
 * null, is a JSON array of [name, content] pairs matching the
 * certificate's inputs in order. `out_ok` receives the verdict.
 *
 * # Safety
 * As for [`mukit_fixpoint`]; `out_ok` must be valid when not null.
 */
enum MukitStatus mukit_recheck(const char *certificate_json, const char *files_json, bool *out_ok);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MUKIT_H */
