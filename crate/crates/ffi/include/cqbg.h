#ifndef CQBG_H
#define CQBG_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define CQBG_ROLE_UNSPECIFIED -1

#define CQBG_SCORER_BM25 0

#define CQBG_SCORER_TFIDF 1

#define CQBG_CRITERION_PAPER 0

#define CQBG_CRITERION_CITATION 1

#define CQBG_CRITERION_NEIGHBOR 2

#define CQBG_PAIRING_ALIGNED 0

#define CQBG_PAIRING_PRODUCT 1

typedef enum CqbgStatus {
  CQBG_STATUS_OK = 0,
  CQBG_STATUS_NULL_ARGUMENT = 1,
  CQBG_STATUS_INVALID_UTF8 = 2,
  CQBG_STATUS_NOT_FOUND = 3,
  CQBG_STATUS_INVALID_ARGUMENT = 4,
  CQBG_STATUS_IO = 5,
  CQBG_STATUS_FORMAT = 6,
  CQBG_STATUS_INTERNAL = 7,
} CqbgStatus;

typedef enum CqbgRole {
  CQBG_ROLE_PRIME_PROFESSOR = 0,
  CQBG_ROLE_ASSISTANT_PROFESSOR = 1,
  CQBG_ROLE_STUDENT = 2,
} CqbgRole;

// Opaque engine handle.
typedef struct CqbgEngine CqbgEngine;

typedef struct CqbgCounts {
  uint64_t papers;
  uint64_t authors;
  uint64_t edges;
  uint64_t citation_links;
} CqbgCounts;

// Recommendation request. Initialize with [`cqbg_request_default`] and set
// at least `name` and `query`. `interest` may be NULL.
typedef struct CqbgRequest {
  const char *name;
  const char *query;
  const char *interest;
  // A `CqbgRole` value, or `CQBG_ROLE_UNSPECIFIED` to classify the seed.
  int32_t seed_role;
  uint32_t top_k;
  int32_t scorer;
  double k1;
  double b;
  int32_t criterion;
  uint64_t t1;
  uint64_t t2;
  int32_t pairing;
  bool interest_in_query;
} CqbgRequest;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message describing the last failure on this thread, or NULL. The pointer
// stays valid until the next failing call on the same thread.
const char *cqbg_last_error(void);

// Library version as a static NUL-terminated string.
const char *cqbg_version(void);

// Parses a citation dump and builds an engine.
//
// # Safety
// `corpus_path` must be a NUL-terminated string; `out` must be a valid pointer.
enum CqbgStatus cqbg_engine_build(const char *corpus_path, struct CqbgEngine **out);

// Loads an engine from a snapshot written by `cqbg build` or [`cqbg_engine_save`].
//
// # Safety
// `snapshot_path` must be a NUL-terminated string; `out` must be a valid pointer.
enum CqbgStatus cqbg_engine_load(const char *snapshot_path, struct CqbgEngine **out);

// # Safety
// `engine` must come from this library; `snapshot_path` must be NUL-terminated.
enum CqbgStatus cqbg_engine_save(const struct CqbgEngine *engine, const char *snapshot_path);

// Releases an engine. NULL is ignored.
//
// # Safety
// `engine` must be NULL or a handle from this library not yet freed.
void cqbg_engine_free(struct CqbgEngine *engine);

// # Safety
// `engine` must come from this library; `out` must be a valid pointer.
enum CqbgStatus cqbg_engine_counts(const struct CqbgEngine *engine, struct CqbgCounts *out);

// Fills `out` with the default settings: BM25 (k1 = 1.5, b = 0.75), paper
// criterion with thresholds 20 / 40, top 5, aligned pairing, interest
// folded into the query, seed role classified. Strings are set to NULL.
//
// # Safety
// `out` must be a valid pointer.
enum CqbgStatus cqbg_request_default(struct CqbgRequest *out);

// Runs a recommendation and returns it as JSON (the same document
// `cqbg recommend` prints). Free the result with [`cqbg_string_free`].
//
// # Safety
// `engine` must come from this library, `request` must point to an
// initialized [`CqbgRequest`] whose strings are NUL-terminated, and
// `out_json` must be a valid pointer.
enum CqbgStatus cqbg_recommend_json(const struct CqbgEngine *engine,
                                    const struct CqbgRequest *request,
                                    char **out_json);

// Classifies an author. `out_metric` receives the value the role was
// decided on (papers, citations or co-author count) and may be NULL.
//
// # Safety
// `engine` must come from this library, `name` must be NUL-terminated and
// `out_role` must be a valid pointer.
enum CqbgStatus cqbg_classify(const struct CqbgEngine *engine,
                              const char *name,
                              int32_t criterion,
                              uint64_t t1,
                              uint64_t t2,
                              enum CqbgRole *out_role,
                              uint64_t *out_metric);

// Releases a string returned by this library. NULL is ignored.
//
// # Safety
// `s` must be NULL or a string returned by this library, not yet freed.
void cqbg_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CQBG_H */
