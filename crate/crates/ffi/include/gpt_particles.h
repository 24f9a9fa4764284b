#ifndef GPT_PARTICLES_H
#define GPT_PARTICLES_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes; the numeric values match the CLI exit codes.
 */
typedef enum GptpStatus {
  GPTP_STATUS_OK = 0,
  GPTP_STATUS_PROPERTY_FAILED = 1,
  GPTP_STATUS_INVALID_THEORY = 2,
  GPTP_STATUS_CLOSURE_EXCEEDED = 3,
  GPTP_STATUS_BAD_ARGUMENT = 4,
  /**
   * A panic was caught at the boundary.
   */
  GPTP_STATUS_INTERNAL = 5,
} GptpStatus;

/**
 * Which symmetric pure states to analyse.
 */
typedef enum GptpOption {
  /**
   * Extremal points of the symmetric slice.
   */
  GPTP_OPTION_EXTREMAL_SYMMETRIC = 1,
  /**
   * Composite vertices fixed by the swap.
   */
  GPTP_OPTION_SYMMETRIC_EXTREMAL = 2,
} GptpOption;

/**
 * Opaque theory handle.
 */
typedef struct GptpTheory GptpTheory;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *gptp_version(void);

/**
 * Message for the last failed call on this thread, or null. Valid until
 * the next call into the library on the same thread.
 */
const char *gptp_last_error(void);

/**
 * Loads a built-in theory. `d` and `parties` of zero mean the default.
 *
 * # Safety
 * `name` must be a NUL-terminated string and `out` a valid pointer.
 */
enum GptpStatus gptp_theory_builtin(const char *name,
                                    uint32_t d,
                                    uint32_t parties,
                                    struct GptpTheory **out);

/**
 * Loads a polytopal theory from its JSON interchange form.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum GptpStatus gptp_theory_from_json(const char *json, struct GptpTheory **out);

/**
 * Writes the interchange JSON of a polytopal theory.
 *
 * # Safety
 * `theory` must come from this library and `out` be a valid pointer.
 */
enum GptpStatus gptp_theory_export_json(const struct GptpTheory *theory, char **out);

/**
 * Releases a theory handle. Null is ignored.
 *
 * # Safety
 * `theory` must come from this library and not be used afterwards.
 */
void gptp_theory_free(struct GptpTheory *theory);

/**
 * Orbit and particle-type report. `max_group_size` of zero means the
 * default bound.
 *
 * # Safety
 * `theory` must come from this library and `out` be a valid pointer.
 */
enum GptpStatus gptp_orbits_json(const struct GptpTheory *theory,
                                 enum GptpOption option,
                                 uint64_t seed,
                                 double tolerance,
                                 size_t max_group_size,
                                 char **out);

/**
 * Sector decomposition report for the symmetrisation idempotent.
 *
 * # Safety
 * `theory` must come from this library and `out` be a valid pointer.
 */
enum GptpStatus gptp_split_json(const struct GptpTheory *theory,
                                uint64_t seed,
                                double tolerance,
                                char **out);

/**
 * Releases a string returned by the library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void gptp_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GPT_PARTICLES_H */
