/* C interface to the sms-forge engine. All returned strings are owned by the library and must be released with sms_forge_string_free. */

#ifndef SMS_FORGE_H
#define SMS_FORGE_H

/* Generated by cbindgen from sms-forge-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Status codes mirroring the CLI exit-code contract.
 */
typedef enum SmsForgeStatus {
  SMS_FORGE_STATUS_OK = 0,
  SMS_FORGE_STATUS_INVALID_INPUT = 1,
  SMS_FORGE_STATUS_VERIFIED_NEGATIVE = 2,
  SMS_FORGE_STATUS_INCONCLUSIVE = 3,
  SMS_FORGE_STATUS_INTERNAL_ERROR = 4,
  SMS_FORGE_STATUS_NULL_POINTER = 5,
} SmsForgeStatus;

/*
 Opaque algebra handle.
 */
typedef struct SmsForgeAlgebra SmsForgeAlgebra;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Latest error message of the calling thread; valid until the next call
 into the library from this thread.
 */
const char *sms_forge_last_error(void);

/*
 Release a string allocated by this library.

 # Safety
 `s` must be a pointer previously returned by this library (or null).
 */
void sms_forge_string_free(char *s);

/*
 Release an algebra handle.

 # Safety
 `alg` must be a handle previously returned by this library (or null),
 not yet freed.
 */
void sms_forge_algebra_free(struct SmsForgeAlgebra *alg);

/*
 Build an algebra from an algebra document (JSON).

 # Safety
 `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum SmsForgeStatus sms_forge_algebra_from_json(const char *json, struct SmsForgeAlgebra **out);

/*
 Build one of the builtin fixture algebras by name
 (example3 | example4 | example5).

 # Safety
 `name` must be a NUL-terminated string and `out` a valid pointer.
 */
enum SmsForgeStatus sms_forge_algebra_builtin(const char *name, struct SmsForgeAlgebra **out);

/*
 Total dimension of the algebra; zero for a null handle.

 # Safety
 `alg` must be a live handle from this library, or null.
 */
uint64_t sms_forge_algebra_dim(const struct SmsForgeAlgebra *alg);

/*
 Self-injectivity check: Ok with a report when self-injective,
 VerifiedNegative otherwise.

 # Safety
 `alg` must be a live handle and `report` a valid pointer.
 */
enum SmsForgeStatus sms_forge_algebra_check(const struct SmsForgeAlgebra *alg, char **report);

/*
 Verify a simple-minded system candidate. Ok when verified; returns
 VerifiedNegative when refuted and Inconclusive on cap exhaustion, with the
 report describing the verdict in all three cases.

 # Safety
 `alg` must be a live handle; `members` a NUL-terminated string; `report`
 a valid pointer.
 */
enum SmsForgeStatus sms_forge_sms_verify(const struct SmsForgeAlgebra *alg,
                                         const char *members,
                                         uint64_t seed,
                                         uint64_t cap,
                                         char **report);

/*
 Mutate a simple-minded system at a subset of member labels
 (comma-separated). `sign_plus` nonzero selects the left mutation.

 # Safety
 `alg` must be a live handle; string arguments NUL-terminated; `report`
 a valid pointer.
 */
enum SmsForgeStatus sms_forge_sms_mutate(const struct SmsForgeAlgebra *alg,
                                         const char *members,
                                         const char *at,
                                         int32_t sign_plus,
                                         uint64_t seed,
                                         uint64_t cap,
                                         char **report);

/*
 Build the Okuyama complex at the given simple subset (comma-separated
 vertex names, or "all"/"none") and run the tilting test. Ok when tilting,
 VerifiedNegative otherwise.

 # Safety
 `alg` must be a live handle; `at` NUL-terminated; `report` valid.
 */
enum SmsForgeStatus sms_forge_okuyama_check(const struct SmsForgeAlgebra *alg,
                                            const char *at,
                                            uint64_t seed,
                                            char **report);

/*
 Verify that the Okuyama complex agrees with the shifted silting mutation
 of the regular module at the given simple subset. Ok when they agree.

 # Safety
 `alg` must be a live handle; `at` NUL-terminated; `report` valid.
 */
enum SmsForgeStatus sms_forge_okuyama_mutate_eq(const struct SmsForgeAlgebra *alg,
                                                const char *at,
                                                uint64_t seed,
                                                char **report);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SMS_FORGE_H */
