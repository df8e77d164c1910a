/* C API for the bphi function-space library.
 *
 * All objects are opaque handles; every function returns a status code and
 * writes results through out-parameters. String results are heap-allocated
 * and must be released with bphi_string_free(). Error details for the last
 * failing call on the current thread are available via bphi_last_error().
 */
#ifndef BPHI_LAB_H
#define BPHI_LAB_H

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bphi_status {
    BPHI_OK = 0,
    BPHI_ERR_ARGUMENT = 1,   /* bad label, flag or precondition */
    BPHI_ERR_DOMAIN = 2,     /* point outside the domain of an evaluation */
    BPHI_ERR_COMPUTE = 3,    /* evaluation / quadrature / fit failure */
    BPHI_ERR_IO = 4,         /* file could not be read or written */
    BPHI_ERR_VERIFY = 5      /* verification ran but some checks failed */
} bphi_status;

typedef struct bphi_function bphi_function;
typedef struct bphi_weight bphi_weight;

/* ---- handles ---- */

bphi_status bphi_function_create(const char* label, bphi_function** out);
void bphi_function_destroy(bphi_function* f);
bphi_status bphi_function_eval(const bphi_function* f, double re, double im,
                               double* out_re, double* out_im);
bphi_status bphi_function_deriv(const bphi_function* f, double re, double im,
                                double* out_re, double* out_im);

bphi_status bphi_weight_create(const char* label, bphi_weight** out);
void bphi_weight_destroy(bphi_weight* w);
bphi_status bphi_weight_phi(const bphi_weight* w, double t, double* out);
bphi_status bphi_weight_g(const bphi_weight* w, double x, double* out);

/* ---- JSON request/response endpoints (used by the CLI) ----
 *
 * Each takes a JSON request string and returns a JSON response string.
 * Request fields mirror the CLI flags; unknown fields are rejected with
 * BPHI_ERR_ARGUMENT. The response echoes the request under "request".
 */

/* {"kind":"bphi|bmoa|bmo-arc","fn":...,"weight":...,"r":...,"quadrature":{...}} */
bphi_status bphi_run_norm(const char* request_json, char** out_json);

/* {"weight":...,"x":...} */
bphi_status bphi_run_g(const char* request_json, char** out_json);

/* {"fn":...,"r":...,"ntheta":...,"lambda_max":...,"npoints":...} */
bphi_status bphi_run_dist(const char* request_json, char** out_json);

/* {"fn":...,"weight":...,"r":...,"gamma":...,"ntheta":...,"quadrature":{...}} */
bphi_status bphi_run_expint(const char* request_json, char** out_json);

/* {"fn":...,"weight":...,"r":...,"rays":...} */
bphi_status bphi_run_growth(const char* request_json, char** out_json);

/* Full RunConfig JSON plus {"theorems":["t1",...]}; writes report files
 * under the configured out_dir. Returns BPHI_ERR_VERIFY when any check
 * fails; *out_json carries the summary either way. */
bphi_status bphi_run_verify(const char* config_json, char** out_json);

/* JSON array of built-in corpus labels. */
bphi_status bphi_corpus_list(char** out_json);

void bphi_string_free(char* s);

/* Message for the last failing call on this thread ("" if none). */
const char* bphi_last_error(void);

#ifdef __cplusplus
}
#endif

#endif /* BPHI_LAB_H */
