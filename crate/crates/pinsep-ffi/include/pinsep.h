#ifndef PINSEP_H
#define PINSEP_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum PinsepCommand {
  PINSEP_COMMAND_CLASSIFY = 0,
  PINSEP_COMMAND_TOWER = 1,
  PINSEP_COMMAND_JB = 2,
  PINSEP_COMMAND_DIFF = 3,
} PinsepCommand;

typedef enum PinsepStatus {
  PINSEP_STATUS_OK = 0,
  PINSEP_STATUS_SELFTEST_FAILED = 1,
  PINSEP_STATUS_PARSE_ERROR = 2,
  PINSEP_STATUS_ERROR = 3,
  PINSEP_STATUS_NULL_ARGUMENT = 4,
  PINSEP_STATUS_INVALID_UTF8 = 5,
  PINSEP_STATUS_PANIC = 6,
} PinsepStatus;

// A parsed and loaded input document.
typedef struct PinsepDocument PinsepDocument;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or null. Valid until the
// next failing call on the same thread.
const char *pinsep_last_error(void);

// Library version as a static string.
const char *pinsep_version(void);

// Parses and loads `text`. `max_dim = 0` uses the default limit.
//
// # Safety
// `text` must be a nul-terminated string and `out` a valid pointer.
enum PinsepStatus pinsep_document_parse(const char *text,
                                        size_t max_dim,
                                        struct PinsepDocument **out);

// Releases a document; null is ignored.
//
// # Safety
// `doc` must come from `pinsep_document_parse` and not be used afterwards.
void pinsep_document_free(struct PinsepDocument *doc);

// `dim_k C` of the document's algebra.
//
// # Safety
// `doc` must be a live document and `out` a valid pointer.
enum PinsepStatus pinsep_document_dim(const struct PinsepDocument *doc, size_t *out);

// Runs a command and returns its JSON report. `leg` may be null (`A:C`);
// `order < 0` uses the document's or the default order.
//
// # Safety
// `doc` must be a live document, `leg` null or a nul-terminated string and
// `json_out` a valid pointer. The returned string is released with
// `pinsep_string_free`.
enum PinsepStatus pinsep_run(const struct PinsepDocument *doc,
                             enum PinsepCommand command,
                             const char *leg,
                             int64_t order,
                             char **json_out);

// Runs the property suite on the bundled corpus; `filter` may be null.
// Returns `SelftestFailed` with the report filled in when a property fails.
//
// # Safety
// `filter` must be null or a nul-terminated string and `json_out` a valid
// pointer.
enum PinsepStatus pinsep_selftest(const char *filter, char **json_out);

// Releases a string returned by this library; null is ignored.
//
// # Safety
// `s` must come from this library and not be used afterwards.
void pinsep_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PINSEP_H */
