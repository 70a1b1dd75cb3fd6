#ifndef DIOC_C_H
#define DIOC_C_H

/* C interface to the choreography toolkit. All entry points return a status
 * code; string outputs are heap-allocated and must be released with
 * dioc_string_free. The context is not thread-safe. */

#ifdef __cplusplus
extern "C" {
#endif

typedef struct dioc_ctx dioc_ctx;

enum {
  DIOC_OK = 0,
  DIOC_FAIL = 1,          /* violations / counterexample found */
  DIOC_PARSE_ERROR = 2,
  DIOC_IO_ERROR = 3,
  DIOC_UNKNOWN_ROLE = 4,
  DIOC_BAD_SCHEDULE = 5,  /* also bad run configuration */
  DIOC_BUDGET_EXCEEDED = 6
};

dioc_ctx* dioc_ctx_new(void);
void dioc_ctx_free(dioc_ctx* ctx);

/* Message describing the most recent failure on this context. The pointer
 * stays valid until the next call on the context. */
const char* dioc_last_error(const dioc_ctx* ctx);

void dioc_string_free(char* s);

int dioc_load_program_file(dioc_ctx* ctx, const char* path);
int dioc_load_program_text(dioc_ctx* ctx, const char* text);

/* Directory of .upd files; each file name (without extension) becomes the
 * update's name. */
int dioc_load_updates_dir(dioc_ctx* ctx, const char* dir);

int dioc_load_host_file(dioc_ctx* ctx, const char* path);
int dioc_load_inputs_file(dioc_ctx* ctx, const char* path);
int dioc_load_schedule_file(dioc_ctx* ctx, const char* path);

/* Keys: max-steps, loop-bound, state-budget, seed, policy (first | seeded |
 * scripted), script (comma-separated choice indexes), json (0/1), weak (0/1),
 * force (0/1). */
int dioc_set_option(dioc_ctx* ctx, const char* key, const char* value);

/* Comma-separated sorted role names of the loaded program. */
int dioc_roles(dioc_ctx* ctx, char** out);

/* Connectedness report (text, or JSON with option json=1). */
int dioc_check(dioc_ctx* ctx, char** report);

/* Pretty-printed endpoint process for one role. Refuses non-connected
 * programs unless force=1. */
int dioc_project(dioc_ctx* ctx, const char* role, char** out);

/* One JSON label object per line; level is "dioc" or "dpoc". */
int dioc_run(dioc_ctx* ctx, const char* level, char** trace);

/* Bounded weak-trace equivalence of the program against its projection.
 * JSON report in *report. */
int dioc_equiv(dioc_ctx* ctx, char** report);

/* Deadlock / race / orphan freedom of the projection. JSON report. */
int dioc_props(dioc_ctx* ctx, char** report);

#ifdef __cplusplus
}
#endif

#endif /* DIOC_C_H */
