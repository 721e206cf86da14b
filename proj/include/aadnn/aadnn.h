/* aadnn: sparse associative-array algebra over pluggable semirings, with a
 * ReLU-DNN layer for constructing exact solutions, analyzing single-feature
 * perturbations in closed form, and emitting/verifying test-vector bundles.
 *
 * All objects are opaque handles created and destroyed by this library.
 * Functions returning aadnn_status leave outputs untouched on failure;
 * aadnn_last_error() describes the most recent failure on this thread.
 */
#ifndef AADNN_H
#define AADNN_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum aadnn_status {
    AADNN_OK = 0,
    AADNN_ERR_NULL_ARGUMENT,
    AADNN_ERR_INVALID_ARGUMENT,
    AADNN_ERR_LENGTH_MISMATCH,
    AADNN_ERR_STRUCTURE,
    AADNN_ERR_PARSE,
    AADNN_ERR_INTEGRITY,
    AADNN_ERR_UNSUPPORTED_MODEL,
    AADNN_ERR_NOT_FOUND,
    AADNN_ERR_IO,
    AADNN_ERR_VERIFY_FAILED,
    AADNN_ERR_INTERNAL
} aadnn_status;

typedef enum aadnn_semiring {
    AADNN_PLUS_TIMES = 0, /* (+, *, 0, 1) */
    AADNN_MAX_PLUS,       /* (max, +, -inf, 0) */
    AADNN_MIN_PLUS,       /* (min, +, +inf, 0) */
    AADNN_MAX_TIMES,      /* (max, *, 0, 1) on [0, inf) */
    AADNN_MIN_TIMES,      /* (min, *, +inf, 1) on (0, inf] */
    AADNN_MAX_MIN,        /* (max, min, -inf, +inf) */
    AADNN_MIN_MAX         /* (min, max, +inf, -inf) */
} aadnn_semiring;

typedef enum aadnn_engine {
    AADNN_ENGINE_RELU = 0,  /* max(Wy + b, 0) per layer */
    AADNN_ENGINE_SEMIRING,  /* plus-times product, max-plus combine */
    AADNN_ENGINE_COLLAPSED  /* single block array iterated depth times */
} aadnn_engine;

typedef struct aadnn_array aadnn_array;
typedef struct aadnn_model aadnn_model;
typedef struct aadnn_sweep aadnn_sweep;
typedef struct aadnn_verify_report aadnn_verify_report;

const char* aadnn_version(void);
const char* aadnn_status_name(aadnn_status status);
/* Message for the most recent failure on the calling thread. */
const char* aadnn_last_error(void);

/* Name lookup: "plus-times", "max-plus", ... */
aadnn_status aadnn_semiring_by_name(const char* name, aadnn_semiring* out);
const char* aadnn_semiring_name(aadnn_semiring semiring);

/* ---- sparse associative arrays ------------------------------------- */

/* Builds from triples; duplicate coordinates fold with the semiring add in
 * input order; add-identity values are elided. */
aadnn_status aadnn_array_build(const char* const* rows, const char* const* cols,
                               const double* values, size_t n, aadnn_semiring semiring,
                               aadnn_array** out);
aadnn_status aadnn_array_identity(const char* const* keys, size_t n, aadnn_array** out);
aadnn_status aadnn_array_identity_like(const char* const* row_keys, const char* const* col_keys,
                                       size_t n, aadnn_array** out);
aadnn_status aadnn_array_ones(const char* const* row_keys, size_t n_rows,
                              const char* const* col_keys, size_t n_cols, aadnn_array** out);
void aadnn_array_free(aadnn_array* array);

size_t aadnn_array_nnz(const aadnn_array* array);
/* *present = 0 and *value = the plus-times background for absent entries. */
aadnn_status aadnn_array_get(const aadnn_array* array, const char* row, const char* col,
                             double* value, int* present);
aadnn_status aadnn_array_equal(const aadnn_array* a, const aadnn_array* b, int* out_equal);

aadnn_status aadnn_array_ewise_add(const aadnn_array* a, const aadnn_array* b,
                                   aadnn_semiring semiring, aadnn_array** out);
aadnn_status aadnn_array_ewise_mult(const aadnn_array* a, const aadnn_array* b,
                                    aadnn_semiring semiring, aadnn_array** out);
aadnn_status aadnn_array_matmul(const aadnn_array* a, const aadnn_array* b,
                                aadnn_semiring semiring, aadnn_array** out);
aadnn_status aadnn_array_kron(const aadnn_array* a, const aadnn_array* b,
                              aadnn_semiring semiring, const char* separator, aadnn_array** out);
aadnn_status aadnn_array_transpose(const aadnn_array* a, aadnn_array** out);
aadnn_status aadnn_array_zero_norm(const aadnn_array* a, aadnn_array** out);

/* TSV triples "row<TAB>col<TAB>value", sorted, shortest round-trip decimals. */
aadnn_status aadnn_array_read_tsv(const char* path, aadnn_semiring semiring, aadnn_array** out);
aadnn_status aadnn_array_write_tsv(const aadnn_array* array, const char* path);

/* ---- models --------------------------------------------------------- */

aadnn_status aadnn_model_read_file(const char* path, aadnn_model** out);
aadnn_status aadnn_model_write_file(const aadnn_model* model, const char* path);
void aadnn_model_free(aadnn_model* model);

size_t aadnn_model_depth(const aadnn_model* model);
size_t aadnn_model_category_count(const aadnn_model* model);
size_t aadnn_model_input_count(const aadnn_model* model);
/* Pointers remain valid while the model lives; NULL when out of range. */
const char* aadnn_model_category_name(const aadnn_model* model, size_t index);
const char* aadnn_model_input_name(const aadnn_model* model, size_t index);

/* out_dropped_rows (nullable) counts batch rows outside the model's input
 * space, which are ignored. */
aadnn_status aadnn_model_infer(const aadnn_model* model, const aadnn_array* y0,
                               aadnn_engine engine, aadnn_array** out_yl,
                               size_t* out_dropped_rows);
aadnn_status aadnn_model_flatten(const aadnn_model* model, aadnn_array** out);
aadnn_status aadnn_model_exact_input(const aadnn_model* model, aadnn_array** out);
/* *out_exact = 1 when the exact input reproduces the identity over the
 * categories; otherwise 0 with the first offending entry described in msg. */
aadnn_status aadnn_model_verify_exact(const aadnn_model* model, int* out_exact, char* msg,
                                      size_t msg_len);

/* ---- builders -------------------------------------------------------- */

/* Plan grammar: stages ';', groups '|', members ',' (e.g. "f1,f2|f3,f4;f12,f34").
 * Betas: one per stage, or a single value for every stage. */
aadnn_status aadnn_build_combinatoric(const size_t* set_sizes, size_t n_sets, const char* plan,
                                      const double* betas, size_t n_betas, aadnn_model** out);
aadnn_status aadnn_build_selective(const char* const* words, size_t n_words, const char* plan,
                                   const double* betas, size_t n_betas, aadnn_model** out);
aadnn_status aadnn_build_selective_file(const char* words_path, const char* plan,
                                        const double* betas, size_t n_betas, aadnn_model** out);
/* IDX image/label files; pixels strictly above threshold count as on. out_y0
 * receives the exact input (one sample column per image). max_images = 0
 * ingests everything. */
aadnn_status aadnn_build_images(const char* images_path, const char* labels_path,
                                double threshold, size_t trim, size_t max_images, double beta,
                                aadnn_model** out_model, aadnn_array** out_y0);

/* ---- perturbation ----------------------------------------------------- */

aadnn_status aadnn_r_detect(const aadnn_model* model, const char* category, const char* feature,
                            double* out);
aadnn_status aadnn_sweep_run(const aadnn_model* model, const char* category, const char* feature,
                             double start, double stop, double step, aadnn_sweep** out);
void aadnn_sweep_free(aadnn_sweep* sweep);
double aadnn_sweep_rd_closed(const aadnn_sweep* sweep);
/* +inf when no grid point detects; below the grid start when all do. */
double aadnn_sweep_rd_empirical(const aadnn_sweep* sweep);
size_t aadnn_sweep_points(const aadnn_sweep* sweep);
aadnn_status aadnn_sweep_point(const aadnn_sweep* sweep, size_t index, double* r, int* pd,
                               int* pfa);
int aadnn_sweep_pd_is_unit_step(const aadnn_sweep* sweep);
int aadnn_sweep_pfa_all_zero(const aadnn_sweep* sweep);
aadnn_status aadnn_sweep_write_tsv(const aadnn_sweep* sweep, const char* path);

/* ---- test-vector bundles ---------------------------------------------- */

/* Writes dir/{model.txt,y0.tsv,yl.tsv,meta.txt}. y0 = NULL uses the model's
 * exact input. precision: "exact" or a fractional bit count. */
aadnn_status aadnn_bundle_export(const aadnn_model* model, const aadnn_array* y0,
                                 const char* precision, const char* builder,
                                 const char* parameters, const char* dir);
/* Compares a candidate output against the bundle at the bundle's precision.
 * Mismatches are report content, not errors. */
aadnn_status aadnn_bundle_verify(const char* dir, const aadnn_array* candidate_yl,
                                 aadnn_verify_report** out);
void aadnn_verify_report_free(aadnn_verify_report* report);
size_t aadnn_verify_mismatch_count(const aadnn_verify_report* report);
aadnn_status aadnn_verify_mismatch(const aadnn_verify_report* report, size_t index,
                                   const char** row, const char** col, double* expected,
                                   double* got);
size_t aadnn_verify_sample_count(const aadnn_verify_report* report);
size_t aadnn_verify_argmax_agreements(const aadnn_verify_report* report);
double aadnn_verify_argmax_rate(const aadnn_verify_report* report);

/* ---- algebra self-test ------------------------------------------------- */

/* Randomized law checks over every registered semiring. Writes the number of
 * violations to out_violations and, when detail is non-NULL, a short
 * description of the first few into detail. */
aadnn_status aadnn_check_algebra(size_t trials, uint64_t seed, size_t* out_violations,
                                 char* detail, size_t detail_len);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* AADNN_H */
