#ifndef AMD_RELAY_H
#define AMD_RELAY_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call.
 */
typedef enum AmdRelayStatus {
  AMD_RELAY_STATUS_OK = 0,
  AMD_RELAY_STATUS_NULL_POINTER = 1,
  AMD_RELAY_STATUS_INVALID_ARGUMENT = 2,
  /**
   * Decoding or recovery output ⊥.
   */
  AMD_RELAY_STATUS_REJECTED = 3,
  AMD_RELAY_STATUS_UTF8 = 4,
  AMD_RELAY_STATUS_INTERNAL = 5,
} AmdRelayStatus;

/**
 * Sharing scheme family for [`amd_relay_scheme_new`].
 */
typedef enum AmdRelaySchemeKind {
  AMD_RELAY_SCHEME_KIND_ADDITIVE = 0,
  AMD_RELAY_SCHEME_KIND_SHAMIR = 1,
} AmdRelaySchemeKind;

/**
 * AMD code parameters.
 */
typedef struct AmdRelayCodec AmdRelayCodec;

/**
 * A finite field.
 */
typedef struct AmdRelayField AmdRelayField;

/**
 * AMD-coded linear secret sharing.
 */
typedef struct AmdRelayScheme AmdRelayScheme;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. Valid until the
 * next failing call on the same thread.
 */
const char *amd_relay_last_error(void);

/**
 * Static description of a status code.
 */
const char *amd_relay_status_str(enum AmdRelayStatus status);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library, not yet freed.
 */
void amd_relay_string_free(char *s);

/**
 * Field from a preset name such as `gf2_86` or `gf7`.
 *
 * # Safety
 * `name` must be a NUL-terminated string; `out` must be writable.
 */
enum AmdRelayStatus amd_relay_field_new(const char *name, struct AmdRelayField **out);

/**
 * # Safety
 * `field` must be NULL or a handle from [`amd_relay_field_new`], not yet freed.
 */
void amd_relay_field_free(struct AmdRelayField *field);

/**
 * Hex digits per element.
 *
 * # Safety
 * `field` must be a live handle.
 */
size_t amd_relay_field_hex_width(const struct AmdRelayField *field);

/**
 * AMD code over `field` for messages of `d` elements.
 *
 * # Safety
 * `field` must be a live handle; `out` must be writable.
 */
enum AmdRelayStatus amd_relay_codec_new(const struct AmdRelayField *field,
                                        size_t d,
                                        struct AmdRelayCodec **out);

/**
 * # Safety
 * `codec` must be NULL or a live handle.
 */
void amd_relay_codec_free(struct AmdRelayCodec *codec);

/**
 * Codeword length `d + 2`.
 *
 * # Safety
 * `codec` must be a live handle.
 */
size_t amd_relay_codec_encoded_len(const struct AmdRelayCodec *codec);

/**
 * Encode `message` (d hex elements); randomness comes from `seed`.
 *
 * # Safety
 * `codec` must be a live handle, `message` NUL-terminated, `out` writable.
 */
enum AmdRelayStatus amd_relay_encode(const struct AmdRelayCodec *codec,
                                     const char *message,
                                     uint64_t seed,
                                     char **out);

/**
 * Decode `codeword` (d+2 hex elements). Returns `Rejected` on ⊥, leaving
 * `out` untouched.
 *
 * # Safety
 * `codec` must be a live handle, `codeword` NUL-terminated, `out` writable.
 */
enum AmdRelayStatus amd_relay_decode(const struct AmdRelayCodec *codec,
                                     const char *codeword,
                                     char **out);

/**
 * Robust sharing over `n` shares; `threshold` is ignored for additive.
 *
 * # Safety
 * `codec` must be a live handle; `out` must be writable.
 */
enum AmdRelayStatus amd_relay_scheme_new(const struct AmdRelayCodec *codec,
                                         enum AmdRelaySchemeKind kind,
                                         size_t threshold,
                                         size_t n,
                                         struct AmdRelayScheme **out);

/**
 * # Safety
 * `scheme` must be NULL or a live handle.
 */
void amd_relay_scheme_free(struct AmdRelayScheme *scheme);

/**
 * Share `secret` (d hex elements); writes share JSON
 * `{"entries": [[hex, ...], ...]}`.
 *
 * # Safety
 * `scheme` must be a live handle, `secret` NUL-terminated, `out` writable.
 */
enum AmdRelayStatus amd_relay_share(const struct AmdRelayScheme *scheme,
                                    const char *secret,
                                    uint64_t seed,
                                    char **out);

/**
 * Recover from share JSON (absent shares as `null`). Returns `Rejected` on ⊥.
 *
 * # Safety
 * `scheme` must be a live handle, `shares_json` NUL-terminated, `out` writable.
 */
enum AmdRelayStatus amd_relay_recover(const struct AmdRelayScheme *scheme,
                                      const char *shares_json,
                                      char **out);

/**
 * Run `trials` seeded SECOQC key-shift attacks on `paths` paths with the
 * default dimensions; writes the fraction that misidentified the paths.
 *
 * # Safety
 * `delta2` must be NUL-terminated; `success_rate` must be writable.
 */
enum AmdRelayStatus amd_relay_secoqc_attack(size_t paths,
                                            const char *delta2,
                                            uint64_t trials,
                                            uint64_t seed,
                                            double *success_rate);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* AMD_RELAY_H */
