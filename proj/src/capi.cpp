#include "aadnn/aadnn.h"

#include <cstring>
#include <string>
#include <vector>

#include "builders.hpp"
#include "bundle.hpp"
#include "dnn.hpp"
#include "error.hpp"
#include "laws.hpp"
#include "model_io.hpp"
#include "perturb.hpp"
#include "quantize.hpp"
#include "tsv.hpp"

struct aadnn_array {
    aadnn::Array impl;
};
struct aadnn_model {
    aadnn::Model impl;
};
struct aadnn_sweep {
    aadnn::SweepReport impl;
};
struct aadnn_verify_report {
    aadnn::BundleVerifyReport impl;
};

namespace {

thread_local std::string g_last_error;

aadnn_status map_code(aadnn::Errc code) {
    using aadnn::Errc;
    switch (code) {
        case Errc::ok: return AADNN_OK;
        case Errc::null_argument: return AADNN_ERR_NULL_ARGUMENT;
        case Errc::invalid_argument: return AADNN_ERR_INVALID_ARGUMENT;
        case Errc::length_mismatch: return AADNN_ERR_LENGTH_MISMATCH;
        case Errc::structure_error: return AADNN_ERR_STRUCTURE;
        case Errc::parse_error: return AADNN_ERR_PARSE;
        case Errc::integrity_error: return AADNN_ERR_INTEGRITY;
        case Errc::unsupported_model: return AADNN_ERR_UNSUPPORTED_MODEL;
        case Errc::not_found: return AADNN_ERR_NOT_FOUND;
        case Errc::io_error: return AADNN_ERR_IO;
        case Errc::verify_failed: return AADNN_ERR_VERIFY_FAILED;
    }
    return AADNN_ERR_INTERNAL;
}

template <typename F>
aadnn_status wrap(F&& f) {
    try {
        f();
        return AADNN_OK;
    } catch (const aadnn::Error& e) {
        g_last_error = e.what();
        return map_code(e.code());
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return AADNN_ERR_INTERNAL;
    }
}

aadnn_status fail_null(const char* what) {
    g_last_error = std::string("null argument: ") + what;
    return AADNN_ERR_NULL_ARGUMENT;
}

#define REQUIRE(p) \
    do { \
        if (!(p)) return fail_null(#p); \
    } while (0)

const aadnn::Semiring* to_semiring(aadnn_semiring s) {
    switch (s) {
        case AADNN_PLUS_TIMES: return &aadnn::semiring(aadnn::SemiringId::plus_times);
        case AADNN_MAX_PLUS: return &aadnn::semiring(aadnn::SemiringId::max_plus);
        case AADNN_MIN_PLUS: return &aadnn::semiring(aadnn::SemiringId::min_plus);
        case AADNN_MAX_TIMES: return &aadnn::semiring(aadnn::SemiringId::max_times);
        case AADNN_MIN_TIMES: return &aadnn::semiring(aadnn::SemiringId::min_times);
        case AADNN_MAX_MIN: return &aadnn::semiring(aadnn::SemiringId::max_min);
        case AADNN_MIN_MAX: return &aadnn::semiring(aadnn::SemiringId::min_max);
    }
    return nullptr;
}

aadnn_status bad_semiring() {
    g_last_error = "unknown semiring";
    return AADNN_ERR_INVALID_ARGUMENT;
}

std::vector<aadnn::Key> to_keys(const char* const* keys, size_t n) {
    std::vector<aadnn::Key> out;
    out.reserve(n);
    for (size_t i = 0; i < n; ++i) {
        if (!keys[i]) aadnn::raise(aadnn::Errc::null_argument, "null key at index " + std::to_string(i));
        out.emplace_back(keys[i]);
    }
    return out;
}

std::vector<double> to_betas(const double* betas, size_t n) {
    if (!betas || n == 0) aadnn::raise(aadnn::Errc::null_argument, "betas missing");
    return std::vector<double>(betas, betas + n);
}

void copy_msg(char* buf, size_t len, const std::string& text) {
    if (!buf || len == 0) return;
    size_t n = text.size() < len - 1 ? text.size() : len - 1;
    std::memcpy(buf, text.data(), n);
    buf[n] = '\0';
}

aadnn::Array collapsed_infer(const aadnn::Model& m, const aadnn::Array& y0, size_t* dropped) {
    aadnn::InferStats stats;
    aadnn::CollapsedModel cm = aadnn::collapse(m);
    aadnn::Array y = aadnn::infer_collapsed(cm, y0, &stats);
    if (dropped) *dropped = stats.dropped_input_rows;
    return aadnn::select(y, m.category_keys, std::nullopt);
}

} // namespace

extern "C" {

const char* aadnn_version(void) { return "1.0.0"; }

const char* aadnn_status_name(aadnn_status status) {
    switch (status) {
        case AADNN_OK: return "ok";
        case AADNN_ERR_NULL_ARGUMENT: return "null argument";
        case AADNN_ERR_INVALID_ARGUMENT: return "invalid argument";
        case AADNN_ERR_LENGTH_MISMATCH: return "length mismatch";
        case AADNN_ERR_STRUCTURE: return "structure error";
        case AADNN_ERR_PARSE: return "parse error";
        case AADNN_ERR_INTEGRITY: return "integrity error";
        case AADNN_ERR_UNSUPPORTED_MODEL: return "unsupported model";
        case AADNN_ERR_NOT_FOUND: return "not found";
        case AADNN_ERR_IO: return "io error";
        case AADNN_ERR_VERIFY_FAILED: return "verification failed";
        case AADNN_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

const char* aadnn_last_error(void) { return g_last_error.c_str(); }

aadnn_status aadnn_semiring_by_name(const char* name, aadnn_semiring* out) {
    REQUIRE(name);
    REQUIRE(out);
    const aadnn::Semiring* s = aadnn::find_semiring(name);
    if (!s) {
        g_last_error = std::string("unknown semiring '") + name + "'";
        return AADNN_ERR_NOT_FOUND;
    }
    *out = static_cast<aadnn_semiring>(s->id);
    return AADNN_OK;
}

const char* aadnn_semiring_name(aadnn_semiring semiring) {
    const aadnn::Semiring* s = to_semiring(semiring);
    return s ? s->name : nullptr;
}

/* ---- arrays ---- */

aadnn_status aadnn_array_build(const char* const* rows, const char* const* cols,
                               const double* values, size_t n, aadnn_semiring semiring,
                               aadnn_array** out) {
    REQUIRE(out);
    if (n > 0) {
        REQUIRE(rows);
        REQUIRE(cols);
        REQUIRE(values);
    }
    const aadnn::Semiring* s = to_semiring(semiring);
    if (!s) return bad_semiring();
    return wrap([&] {
        std::vector<aadnn::Entry> entries;
        entries.reserve(n);
        for (size_t i = 0; i < n; ++i) {
            if (!rows[i] || !cols[i])
                aadnn::raise(aadnn::Errc::null_argument, "null key at index " + std::to_string(i));
            entries.emplace_back(rows[i], cols[i], values[i]);
        }
        *out = new aadnn_array{aadnn::build(entries, *s)};
    });
}

aadnn_status aadnn_array_identity(const char* const* keys, size_t n, aadnn_array** out) {
    REQUIRE(out);
    if (n > 0) REQUIRE(keys);
    return wrap([&] { *out = new aadnn_array{aadnn::identity(to_keys(keys, n))}; });
}

aadnn_status aadnn_array_identity_like(const char* const* row_keys, const char* const* col_keys,
                                       size_t n, aadnn_array** out) {
    REQUIRE(out);
    if (n > 0) {
        REQUIRE(row_keys);
        REQUIRE(col_keys);
    }
    return wrap([&] {
        *out = new aadnn_array{aadnn::identity_like(to_keys(row_keys, n), to_keys(col_keys, n))};
    });
}

aadnn_status aadnn_array_ones(const char* const* row_keys, size_t n_rows,
                              const char* const* col_keys, size_t n_cols, aadnn_array** out) {
    REQUIRE(out);
    if (n_rows > 0) REQUIRE(row_keys);
    if (n_cols > 0) REQUIRE(col_keys);
    return wrap([&] {
        *out = new aadnn_array{aadnn::ones(to_keys(row_keys, n_rows), to_keys(col_keys, n_cols))};
    });
}

void aadnn_array_free(aadnn_array* array) { delete array; }

size_t aadnn_array_nnz(const aadnn_array* array) { return array ? array->impl.nnz() : 0; }

aadnn_status aadnn_array_get(const aadnn_array* array, const char* row, const char* col,
                             double* value, int* present) {
    REQUIRE(array);
    REQUIRE(row);
    REQUIRE(col);
    REQUIRE(value);
    const double* v = array->impl.find(row, col);
    if (present) *present = v ? 1 : 0;
    *value = v ? *v : 0.0;
    return AADNN_OK;
}

aadnn_status aadnn_array_equal(const aadnn_array* a, const aadnn_array* b, int* out_equal) {
    REQUIRE(a);
    REQUIRE(b);
    REQUIRE(out_equal);
    *out_equal = a->impl == b->impl ? 1 : 0;
    return AADNN_OK;
}

#define AADNN_BINOP(name, fn) \
    aadnn_status name(const aadnn_array* a, const aadnn_array* b, aadnn_semiring semiring, \
                      aadnn_array** out) { \
        REQUIRE(a); \
        REQUIRE(b); \
        REQUIRE(out); \
        const aadnn::Semiring* s = to_semiring(semiring); \
        if (!s) return bad_semiring(); \
        return wrap([&] { *out = new aadnn_array{aadnn::fn(a->impl, b->impl, *s)}; }); \
    }

AADNN_BINOP(aadnn_array_ewise_add, ewise_add)
AADNN_BINOP(aadnn_array_ewise_mult, ewise_mult)
AADNN_BINOP(aadnn_array_matmul, matmul)

#undef AADNN_BINOP

aadnn_status aadnn_array_kron(const aadnn_array* a, const aadnn_array* b,
                              aadnn_semiring semiring, const char* separator, aadnn_array** out) {
    REQUIRE(a);
    REQUIRE(b);
    REQUIRE(out);
    const aadnn::Semiring* s = to_semiring(semiring);
    if (!s) return bad_semiring();
    return wrap([&] {
        *out = new aadnn_array{aadnn::kron(a->impl, b->impl, *s, separator ? separator : "")};
    });
}

aadnn_status aadnn_array_transpose(const aadnn_array* a, aadnn_array** out) {
    REQUIRE(a);
    REQUIRE(out);
    return wrap([&] { *out = new aadnn_array{aadnn::transpose(a->impl)}; });
}

aadnn_status aadnn_array_zero_norm(const aadnn_array* a, aadnn_array** out) {
    REQUIRE(a);
    REQUIRE(out);
    return wrap([&] { *out = new aadnn_array{aadnn::zero_norm(a->impl)}; });
}

aadnn_status aadnn_array_read_tsv(const char* path, aadnn_semiring semiring, aadnn_array** out) {
    REQUIRE(path);
    REQUIRE(out);
    const aadnn::Semiring* s = to_semiring(semiring);
    if (!s) return bad_semiring();
    return wrap([&] { *out = new aadnn_array{aadnn::read_tsv_file(path, *s)}; });
}

aadnn_status aadnn_array_write_tsv(const aadnn_array* array, const char* path) {
    REQUIRE(array);
    REQUIRE(path);
    return wrap([&] { aadnn::write_tsv_file(path, array->impl); });
}

/* ---- models ---- */

aadnn_status aadnn_model_read_file(const char* path, aadnn_model** out) {
    REQUIRE(path);
    REQUIRE(out);
    return wrap([&] { *out = new aadnn_model{aadnn::read_model_file(path)}; });
}

aadnn_status aadnn_model_write_file(const aadnn_model* model, const char* path) {
    REQUIRE(model);
    REQUIRE(path);
    return wrap([&] { aadnn::write_model_file(path, model->impl); });
}

void aadnn_model_free(aadnn_model* model) { delete model; }

size_t aadnn_model_depth(const aadnn_model* model) { return model ? model->impl.depth() : 0; }

size_t aadnn_model_category_count(const aadnn_model* model) {
    return model ? model->impl.category_keys.size() : 0;
}

size_t aadnn_model_input_count(const aadnn_model* model) {
    return model ? model->impl.input_keys.size() : 0;
}

const char* aadnn_model_category_name(const aadnn_model* model, size_t index) {
    if (!model || index >= model->impl.category_keys.size()) return nullptr;
    return model->impl.category_keys[index].c_str();
}

const char* aadnn_model_input_name(const aadnn_model* model, size_t index) {
    if (!model || index >= model->impl.input_keys.size()) return nullptr;
    return model->impl.input_keys[index].c_str();
}

aadnn_status aadnn_model_infer(const aadnn_model* model, const aadnn_array* y0,
                               aadnn_engine engine, aadnn_array** out_yl,
                               size_t* out_dropped_rows) {
    REQUIRE(model);
    REQUIRE(y0);
    REQUIRE(out_yl);
    return wrap([&] {
        aadnn::InferStats stats;
        aadnn::Array y;
        switch (engine) {
            case AADNN_ENGINE_RELU: y = aadnn::infer_relu(model->impl, y0->impl, &stats); break;
            case AADNN_ENGINE_SEMIRING:
                y = aadnn::infer_semiring(model->impl, y0->impl, &stats);
                break;
            case AADNN_ENGINE_COLLAPSED:
                y = collapsed_infer(model->impl, y0->impl, &stats.dropped_input_rows);
                break;
            default: aadnn::raise(aadnn::Errc::invalid_argument, "unknown inference engine");
        }
        if (out_dropped_rows) *out_dropped_rows = stats.dropped_input_rows;
        *out_yl = new aadnn_array{std::move(y)};
    });
}

aadnn_status aadnn_model_flatten(const aadnn_model* model, aadnn_array** out) {
    REQUIRE(model);
    REQUIRE(out);
    return wrap([&] { *out = new aadnn_array{aadnn::flatten(model->impl)}; });
}

aadnn_status aadnn_model_exact_input(const aadnn_model* model, aadnn_array** out) {
    REQUIRE(model);
    REQUIRE(out);
    return wrap([&] { *out = new aadnn_array{aadnn::exact_input(model->impl)}; });
}

aadnn_status aadnn_model_verify_exact(const aadnn_model* model, int* out_exact, char* msg,
                                      size_t msg_len) {
    REQUIRE(model);
    REQUIRE(out_exact);
    return wrap([&] {
        aadnn::ExactnessReport rep = aadnn::verify_exact(model->impl);
        *out_exact = rep.ok ? 1 : 0;
        copy_msg(msg, msg_len, rep.describe());
    });
}

/* ---- builders ---- */

aadnn_status aadnn_build_combinatoric(const size_t* set_sizes, size_t n_sets, const char* plan,
                                      const double* betas, size_t n_betas, aadnn_model** out) {
    REQUIRE(set_sizes);
    REQUIRE(plan);
    REQUIRE(out);
    return wrap([&] {
        std::vector<size_t> sizes(set_sizes, set_sizes + n_sets);
        aadnn::Model m = aadnn::build_combinatoric(aadnn::make_letter_features(sizes),
                                                   aadnn::LayerPlan::parse(plan),
                                                   to_betas(betas, n_betas));
        *out = new aadnn_model{std::move(m)};
    });
}

aadnn_status aadnn_build_selective(const char* const* words, size_t n_words, const char* plan,
                                   const double* betas, size_t n_betas, aadnn_model** out) {
    REQUIRE(words);
    REQUIRE(plan);
    REQUIRE(out);
    return wrap([&] {
        std::vector<std::string> list;
        list.reserve(n_words);
        for (size_t i = 0; i < n_words; ++i) {
            if (!words[i])
                aadnn::raise(aadnn::Errc::null_argument, "null word at index " + std::to_string(i));
            list.emplace_back(words[i]);
        }
        aadnn::Model m = aadnn::build_selective(list, aadnn::LayerPlan::parse(plan),
                                                to_betas(betas, n_betas));
        *out = new aadnn_model{std::move(m)};
    });
}

aadnn_status aadnn_build_selective_file(const char* words_path, const char* plan,
                                        const double* betas, size_t n_betas, aadnn_model** out) {
    REQUIRE(words_path);
    REQUIRE(plan);
    REQUIRE(out);
    return wrap([&] {
        aadnn::Model m =
            aadnn::build_selective(aadnn::read_word_list(words_path),
                                   aadnn::LayerPlan::parse(plan), to_betas(betas, n_betas));
        *out = new aadnn_model{std::move(m)};
    });
}

aadnn_status aadnn_build_images(const char* images_path, const char* labels_path,
                                double threshold, size_t trim, size_t max_images, double beta,
                                aadnn_model** out_model, aadnn_array** out_y0) {
    REQUIRE(images_path);
    REQUIRE(labels_path);
    REQUIRE(out_model);
    return wrap([&] {
        std::vector<aadnn::IdxImage> images = aadnn::read_idx_images_file(images_path);
        std::vector<uint8_t> labels = aadnn::read_idx_labels_file(labels_path);
        if (max_images > 0) {
            if (images.size() > max_images) images.resize(max_images);
            if (labels.size() > max_images) labels.resize(max_images);
        }
        aadnn::ImageBuildResult res =
            aadnn::build_from_images(images, labels, threshold, trim, beta);
        *out_model = new aadnn_model{std::move(res.model)};
        if (out_y0) *out_y0 = new aadnn_array{std::move(res.y0)};
    });
}

/* ---- perturbation ---- */

aadnn_status aadnn_r_detect(const aadnn_model* model, const char* category, const char* feature,
                            double* out) {
    REQUIRE(model);
    REQUIRE(category);
    REQUIRE(feature);
    REQUIRE(out);
    return wrap([&] { *out = aadnn::r_detect(model->impl, category, feature); });
}

aadnn_status aadnn_sweep_run(const aadnn_model* model, const char* category, const char* feature,
                             double start, double stop, double step, aadnn_sweep** out) {
    REQUIRE(model);
    REQUIRE(category);
    REQUIRE(feature);
    REQUIRE(out);
    return wrap([&] {
        aadnn::SweepReport rep =
            aadnn::sweep(model->impl, category, feature, aadnn::make_grid(start, stop, step));
        *out = new aadnn_sweep{std::move(rep)};
    });
}

void aadnn_sweep_free(aadnn_sweep* sweep) { delete sweep; }

double aadnn_sweep_rd_closed(const aadnn_sweep* sweep) {
    return sweep ? sweep->impl.rd_closed : 0.0;
}

double aadnn_sweep_rd_empirical(const aadnn_sweep* sweep) {
    return sweep ? sweep->impl.rd_empirical : 0.0;
}

size_t aadnn_sweep_points(const aadnn_sweep* sweep) { return sweep ? sweep->impl.r.size() : 0; }

aadnn_status aadnn_sweep_point(const aadnn_sweep* sweep, size_t index, double* r, int* pd,
                               int* pfa) {
    REQUIRE(sweep);
    if (index >= sweep->impl.r.size()) {
        g_last_error = "sweep point index out of range";
        return AADNN_ERR_INVALID_ARGUMENT;
    }
    if (r) *r = sweep->impl.r[index];
    if (pd) *pd = sweep->impl.pd[index];
    if (pfa) *pfa = sweep->impl.pfa[index];
    return AADNN_OK;
}

int aadnn_sweep_pd_is_unit_step(const aadnn_sweep* sweep) {
    return sweep && sweep->impl.pd_is_unit_step() ? 1 : 0;
}

int aadnn_sweep_pfa_all_zero(const aadnn_sweep* sweep) {
    return sweep && sweep->impl.pfa_all_zero() ? 1 : 0;
}

aadnn_status aadnn_sweep_write_tsv(const aadnn_sweep* sweep, const char* path) {
    REQUIRE(sweep);
    REQUIRE(path);
    return wrap([&] { aadnn::write_sweep_tsv_file(path, sweep->impl); });
}

/* ---- bundles ---- */

aadnn_status aadnn_bundle_export(const aadnn_model* model, const aadnn_array* y0,
                                 const char* precision, const char* builder,
                                 const char* parameters, const char* dir) {
    REQUIRE(model);
    REQUIRE(precision);
    REQUIRE(dir);
    return wrap([&] {
        aadnn::Array input = y0 ? y0->impl : aadnn::exact_input(model->impl);
        aadnn::TestVectorBundle b =
            aadnn::make_bundle(model->impl, input, aadnn::QuantSpec::parse(precision),
                               builder ? builder : "", parameters ? parameters : "");
        aadnn::write_bundle(b, dir);
    });
}

aadnn_status aadnn_bundle_verify(const char* dir, const aadnn_array* candidate_yl,
                                 aadnn_verify_report** out) {
    REQUIRE(dir);
    REQUIRE(candidate_yl);
    REQUIRE(out);
    return wrap([&] {
        aadnn::TestVectorBundle b = aadnn::read_bundle(dir);
        *out = new aadnn_verify_report{aadnn::verify_bundle(b, candidate_yl->impl)};
    });
}

void aadnn_verify_report_free(aadnn_verify_report* report) { delete report; }

size_t aadnn_verify_mismatch_count(const aadnn_verify_report* report) {
    return report ? report->impl.mismatches.size() : 0;
}

aadnn_status aadnn_verify_mismatch(const aadnn_verify_report* report, size_t index,
                                   const char** row, const char** col, double* expected,
                                   double* got) {
    REQUIRE(report);
    if (index >= report->impl.mismatches.size()) {
        g_last_error = "mismatch index out of range";
        return AADNN_ERR_INVALID_ARGUMENT;
    }
    const auto& mm = report->impl.mismatches[index];
    if (row) *row = mm.row.c_str();
    if (col) *col = mm.col.c_str();
    if (expected) *expected = mm.expected;
    if (got) *got = mm.got;
    return AADNN_OK;
}

size_t aadnn_verify_sample_count(const aadnn_verify_report* report) {
    return report ? report->impl.sample_count : 0;
}

size_t aadnn_verify_argmax_agreements(const aadnn_verify_report* report) {
    return report ? report->impl.argmax_agreements : 0;
}

double aadnn_verify_argmax_rate(const aadnn_verify_report* report) {
    return report ? report->impl.argmax_rate() : 0.0;
}

/* ---- algebra ---- */

aadnn_status aadnn_check_algebra(size_t trials, uint64_t seed, size_t* out_violations,
                                 char* detail, size_t detail_len) {
    REQUIRE(out_violations);
    return wrap([&] {
        std::vector<aadnn::LawViolation> violations = aadnn::check_algebra(trials, seed);
        *out_violations = violations.size();
        if (detail && detail_len > 0) {
            std::string text;
            for (const aadnn::LawViolation& v : violations) {
                std::string line = v.semiring + ": " + v.law + " (trial " +
                                   std::to_string(v.trial) + ")\n";
                if (text.size() + line.size() > 4096) break;
                text += line;
            }
            copy_msg(detail, detail_len, text);
        }
    });
}

} /* extern "C" */
