/* depsgd — streaming SGD estimation and experiment harness.
 *
 * C interface of the shared library. All functions are thread-compatible
 * (no shared mutable state); a config handle must not be used from two
 * threads at once. Functions that can fail return a nonzero error code
 * and, when err/err_len are given, a NUL-terminated message.
 */
#ifndef DEPSGD_H
#define DEPSGD_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct depsgd_config depsgd_config; /* opaque parsed run configuration */

/* Error codes. */
enum {
    DEPSGD_OK = 0,
    DEPSGD_ERR_PARSE = 1,   /* bad config text, unknown key, unknown preset */
    DEPSGD_ERR_RUN = 2,     /* experiment failed (I/O, numeric contract) */
    DEPSGD_ERR_USAGE = 3    /* null handle or bad argument */
};

/* Library version, e.g. "0.1.0". Static storage; do not free. */
const char* depsgd_version(void);

/* Parse a config from a file / from text / from a named preset.
 * Returns NULL on failure with a message in err. Free the handle with
 * depsgd_config_free. */
depsgd_config* depsgd_config_from_file(const char* path, char* err, size_t err_len);
depsgd_config* depsgd_config_from_text(const char* text, char* err, size_t err_len);
depsgd_config* depsgd_config_from_preset(const char* name, char* err, size_t err_len);

/* Apply a dotted-key override (e.g. "run.seed", "problem.d") and
 * re-validate. */
int depsgd_config_override(depsgd_config* cfg, const char* dotted_key, const char* value,
                           char* err, size_t err_len);

/* Canonical config text (what the manifest records). Writes up to len-1
 * bytes plus NUL; returns the full length regardless. */
size_t depsgd_config_describe(const depsgd_config* cfg, char* buf, size_t len);

/* Run the experiment: writes CSVs, manifest, and optional SVG under the
 * configured output directory. A human-readable run report is copied to
 * report when given. Returns DEPSGD_OK, or DEPSGD_ERR_RUN with err set.
 * A verify experiment that finds violations returns DEPSGD_ERR_RUN with
 * the report still filled. */
int depsgd_run(const depsgd_config* cfg, char* report, size_t report_len, char* err,
               size_t err_len);

/* Newline-separated preset names. Same truncation contract as
 * depsgd_config_describe. */
size_t depsgd_preset_names(char* buf, size_t len);

void depsgd_config_free(depsgd_config* cfg);

#ifdef __cplusplus
}
#endif

#endif /* DEPSGD_H */
