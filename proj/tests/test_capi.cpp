#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "aadnn/aadnn.h"

namespace {

namespace fs = std::filesystem;

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

aadnn_array* make_array(const std::vector<const char*>& rows,
                        const std::vector<const char*>& cols, const std::vector<double>& vals,
                        aadnn_semiring s = AADNN_PLUS_TIMES) {
    aadnn_array* out = nullptr;
    REQUIRE(aadnn_array_build(rows.data(), cols.data(), vals.data(), vals.size(), s, &out) ==
            AADNN_OK);
    return out;
}

aadnn_model* build_test_model() {
    size_t sizes[] = {2, 2, 2, 2};
    double beta = 1.0;
    aadnn_model* m = nullptr;
    REQUIRE(aadnn_build_combinatoric(sizes, 4, "f1,f2|f3,f4;f12,f34", &beta, 1, &m) == AADNN_OK);
    return m;
}

} // namespace

TEST_CASE("version and status names are stable strings") {
    REQUIRE(aadnn_version() != nullptr);
    CHECK(std::string(aadnn_version()) == "1.0.0");
    CHECK(std::string(aadnn_status_name(AADNN_OK)) == "ok");
    CHECK(std::string(aadnn_status_name(AADNN_ERR_PARSE)).find("parse") != std::string::npos);
}

TEST_CASE("null arguments are rejected with a message") {
    CHECK(aadnn_array_build(nullptr, nullptr, nullptr, 0, AADNN_PLUS_TIMES, nullptr) ==
          AADNN_ERR_NULL_ARGUMENT);
    CHECK(std::strlen(aadnn_last_error()) > 0);

    aadnn_array* out = nullptr;
    CHECK(aadnn_array_read_tsv(nullptr, AADNN_PLUS_TIMES, &out) == AADNN_ERR_NULL_ARGUMENT);
    CHECK(aadnn_model_read_file(nullptr, nullptr) == AADNN_ERR_NULL_ARGUMENT);
    CHECK(out == nullptr);
}

TEST_CASE("semiring name lookup") {
    aadnn_semiring s;
    CHECK(aadnn_semiring_by_name("max-plus", &s) == AADNN_OK);
    CHECK(s == AADNN_MAX_PLUS);
    CHECK(std::string(aadnn_semiring_name(AADNN_MIN_TIMES)) == "min-times");
    CHECK(aadnn_semiring_by_name("bogus", &s) == AADNN_ERR_NOT_FOUND);
}

TEST_CASE("array build, query and algebra through the C surface") {
    aadnn_array* a = make_array({"r", "r"}, {"c", "c"}, {2.0, 3.0});
    CHECK(aadnn_array_nnz(a) == 1); // duplicates fold

    double v = 0;
    int present = 0;
    CHECK(aadnn_array_get(a, "r", "c", &v, &present) == AADNN_OK);
    CHECK(present == 1);
    CHECK(v == 5.0);
    CHECK(aadnn_array_get(a, "r", "zz", &v, &present) == AADNN_OK);
    CHECK(present == 0);
    CHECK(v == 0.0);

    aadnn_array* b = make_array({"r"}, {"c"}, {5.0});
    int eq = 0;
    CHECK(aadnn_array_equal(a, b, &eq) == AADNN_OK);
    CHECK(eq == 1);

    aadnn_array* sum = nullptr;
    REQUIRE(aadnn_array_ewise_add(a, b, AADNN_PLUS_TIMES, &sum) == AADNN_OK);
    CHECK(aadnn_array_get(sum, "r", "c", &v, &present) == AADNN_OK);
    CHECK(v == 10.0);

    aadnn_array* t = nullptr;
    REQUIRE(aadnn_array_transpose(a, &t) == AADNN_OK);
    CHECK(aadnn_array_get(t, "c", "r", &v, &present) == AADNN_OK);
    CHECK(v == 5.0);

    aadnn_array* z = nullptr;
    REQUIRE(aadnn_array_zero_norm(a, &z) == AADNN_OK);
    CHECK(aadnn_array_get(z, "r", "c", &v, &present) == AADNN_OK);
    CHECK(v == 1.0);

    aadnn_array* id = nullptr;
    const char* keys[] = {"x", "y"};
    REQUIRE(aadnn_array_identity(keys, 2, &id) == AADNN_OK);
    CHECK(aadnn_array_nnz(id) == 2);

    aadnn_array* prod = nullptr;
    REQUIRE(aadnn_array_matmul(id, id, AADNN_PLUS_TIMES, &prod) == AADNN_OK);
    CHECK(aadnn_array_equal(prod, id, &eq) == AADNN_OK);
    CHECK(eq == 1);

    aadnn_array* k = nullptr;
    REQUIRE(aadnn_array_kron(a, b, AADNN_PLUS_TIMES, "", &k) == AADNN_OK);
    CHECK(aadnn_array_get(k, "rr", "cc", &v, &present) == AADNN_OK);
    CHECK(v == 25.0);

    for (aadnn_array* arr : {a, b, sum, t, z, id, prod, k}) aadnn_array_free(arr);
    aadnn_array_free(nullptr); // must be a no-op
}

TEST_CASE("array TSV io round-trips through files") {
    TempDir dir("aadnn_capi_tsv");
    aadnn_array* a = make_array({"r1", "r2"}, {"c1", "c2"}, {0.5, -2.0});
    std::string path = dir.file("a.tsv");
    REQUIRE(aadnn_array_write_tsv(a, path.c_str()) == AADNN_OK);

    aadnn_array* back = nullptr;
    REQUIRE(aadnn_array_read_tsv(path.c_str(), AADNN_PLUS_TIMES, &back) == AADNN_OK);
    int eq = 0;
    CHECK(aadnn_array_equal(a, back, &eq) == AADNN_OK);
    CHECK(eq == 1);

    aadnn_array* bad = nullptr;
    CHECK(aadnn_array_read_tsv(dir.file("missing.tsv").c_str(), AADNN_PLUS_TIMES, &bad) ==
          AADNN_ERR_IO);
    CHECK(bad == nullptr);

    aadnn_array_free(a);
    aadnn_array_free(back);
}

TEST_CASE("models build, describe themselves and infer") {
    aadnn_model* m = build_test_model();
    CHECK(aadnn_model_depth(m) == 2);
    CHECK(aadnn_model_input_count(m) == 8);
    CHECK(aadnn_model_category_count(m) == 16);
    CHECK(std::string(aadnn_model_category_name(m, 0)) == "1a2a3a4a");
    CHECK(std::string(aadnn_model_input_name(m, 0)) == "1a");
    CHECK(aadnn_model_category_name(m, 99) == nullptr);

    int exact = 0;
    char msg[256];
    REQUIRE(aadnn_model_verify_exact(m, &exact, msg, sizeof msg) == AADNN_OK);
    CHECK(exact == 1);

    aadnn_array* y0 = nullptr;
    REQUIRE(aadnn_model_exact_input(m, &y0) == AADNN_OK);

    for (aadnn_engine engine : {AADNN_ENGINE_RELU, AADNN_ENGINE_SEMIRING,
                                AADNN_ENGINE_COLLAPSED}) {
        aadnn_array* yl = nullptr;
        size_t dropped = 99;
        REQUIRE(aadnn_model_infer(m, y0, engine, &yl, &dropped) == AADNN_OK);
        CHECK(dropped == 0);
        CHECK(aadnn_array_nnz(yl) == 16);
        double v = 0;
        int present = 0;
        CHECK(aadnn_array_get(yl, "1b2b3b4b", "1b2b3b4b", &v, &present) == AADNN_OK);
        CHECK(v == 1.0);
        aadnn_array_free(yl);
    }

    aadnn_array* w = nullptr;
    REQUIRE(aadnn_model_flatten(m, &w) == AADNN_OK);
    CHECK(aadnn_array_nnz(w) == 64);
    aadnn_array_free(w);

    aadnn_array_free(y0);
    aadnn_model_free(m);
}

TEST_CASE("model files round-trip through the C surface") {
    TempDir dir("aadnn_capi_model");
    aadnn_model* m = build_test_model();
    std::string path = dir.file("m.txt");
    REQUIRE(aadnn_model_write_file(m, path.c_str()) == AADNN_OK);

    aadnn_model* back = nullptr;
    REQUIRE(aadnn_model_read_file(path.c_str(), &back) == AADNN_OK);
    CHECK(aadnn_model_depth(back) == 2);
    CHECK(aadnn_model_category_count(back) == 16);

    aadnn_model* bad = nullptr;
    CHECK(aadnn_model_read_file(dir.file("no.txt").c_str(), &bad) == AADNN_ERR_IO);

    aadnn_model_free(m);
    aadnn_model_free(back);
}

TEST_CASE("builder argument errors surface as statuses") {
    size_t sizes[] = {2, 2};
    double beta = 1.0;
    aadnn_model* m = nullptr;
    CHECK(aadnn_build_combinatoric(sizes, 2, "f1,f3", &beta, 1, &m) ==
          AADNN_ERR_INVALID_ARGUMENT);
    CHECK(m == nullptr);
    CHECK(aadnn_build_combinatoric(sizes, 2, "f1,,f2", &beta, 1, &m) == AADNN_ERR_PARSE);
    double bad_beta = 1.5;
    CHECK(aadnn_build_combinatoric(sizes, 2, "f1,f2", &bad_beta, 1, &m) ==
          AADNN_ERR_INVALID_ARGUMENT);

    const char* words[] = {"ab", "abc"};
    CHECK(aadnn_build_selective(words, 2, "f1,f2", &beta, 1, &m) == AADNN_ERR_INVALID_ARGUMENT);
}

TEST_CASE("selective models build from word arrays") {
    const char* words[] = {"ad", "ah", "hi"};
    double beta = 1.0;
    aadnn_model* m = nullptr;
    REQUIRE(aadnn_build_selective(words, 3, "f1,f2", &beta, 1, &m) == AADNN_OK);
    CHECK(aadnn_model_category_count(m) == 3);
    CHECK(aadnn_model_input_count(m) == 5);
    aadnn_model_free(m);
}

TEST_CASE("perturbation sweeps through the C surface") {
    aadnn_model* m = build_test_model();

    double rd = 0;
    REQUIRE(aadnn_r_detect(m, "1a2a3a4a", "1a", &rd) == AADNN_OK);
    CHECK(rd == 0.0); // beta 1 everywhere
    CHECK(aadnn_r_detect(m, "zz", "1a", &rd) == AADNN_ERR_NOT_FOUND);

    aadnn_sweep* sweep = nullptr;
    REQUIRE(aadnn_sweep_run(m, "1a2a3a4a", "1a", 0.0, 2.0, 0.25, &sweep) == AADNN_OK);
    CHECK(aadnn_sweep_points(sweep) == 9);
    CHECK(aadnn_sweep_rd_closed(sweep) == 0.0);
    CHECK(aadnn_sweep_rd_empirical(sweep) == 0.125);
    CHECK(aadnn_sweep_pd_is_unit_step(sweep) == 1);
    CHECK(aadnn_sweep_pfa_all_zero(sweep) == 1);

    double r = 0;
    int pd = 0, pfa = 0;
    REQUIRE(aadnn_sweep_point(sweep, 0, &r, &pd, &pfa) == AADNN_OK);
    CHECK(r == 0.0);
    CHECK(pd == 0);
    CHECK(pfa == 0);
    REQUIRE(aadnn_sweep_point(sweep, 8, &r, &pd, &pfa) == AADNN_OK);
    CHECK(r == 2.0);
    CHECK(pd == 1);
    CHECK(aadnn_sweep_point(sweep, 9, &r, &pd, &pfa) == AADNN_ERR_INVALID_ARGUMENT);

    TempDir dir("aadnn_capi_sweep");
    CHECK(aadnn_sweep_write_tsv(sweep, dir.file("s.tsv").c_str()) == AADNN_OK);

    aadnn_sweep_free(sweep);
    aadnn_model_free(m);
}

TEST_CASE("bundles export and verify through the C surface") {
    TempDir dir("aadnn_capi_bundle");
    aadnn_model* m = build_test_model();
    std::string bdir = dir.file("bundle");
    REQUIRE(aadnn_bundle_export(m, nullptr, "exact", "combinatoric", "sets=2,2,2,2",
                                bdir.c_str()) == AADNN_OK);

    aadnn_array* y0 = nullptr;
    REQUIRE(aadnn_model_exact_input(m, &y0) == AADNN_OK);
    aadnn_array* yl = nullptr;
    REQUIRE(aadnn_model_infer(m, y0, AADNN_ENGINE_RELU, &yl, nullptr) == AADNN_OK);

    aadnn_verify_report* report = nullptr;
    REQUIRE(aadnn_bundle_verify(bdir.c_str(), yl, &report) == AADNN_OK);
    CHECK(aadnn_verify_mismatch_count(report) == 0);
    CHECK(aadnn_verify_sample_count(report) == 16);
    CHECK(aadnn_verify_argmax_agreements(report) == 16);
    CHECK(aadnn_verify_argmax_rate(report) == 1.0);
    aadnn_verify_report_free(report);

    // a corrupted candidate produces mismatches, not an error
    aadnn_array* wrong = make_array({"1a2a3a4a"}, {"1a2a3a4a"}, {0.25});
    REQUIRE(aadnn_bundle_verify(bdir.c_str(), wrong, &report) == AADNN_OK);
    CHECK(aadnn_verify_mismatch_count(report) > 0);
    const char *row = nullptr, *col = nullptr;
    double expected = 0, got = 0;
    REQUIRE(aadnn_verify_mismatch(report, 0, &row, &col, &expected, &got) == AADNN_OK);
    CHECK(row != nullptr);
    CHECK(aadnn_verify_argmax_rate(report) < 1.0);
    aadnn_verify_report_free(report);

    aadnn_array_free(wrong);
    aadnn_array_free(yl);
    aadnn_array_free(y0);
    aadnn_model_free(m);
}

TEST_CASE("image building through the C surface") {
    TempDir dir("aadnn_capi_idx");
    // 4x4 images: header 2051, then raw rows
    auto be = [](uint32_t v) {
        std::string s(4, '\0');
        s[0] = char(v >> 24); s[1] = char(v >> 16); s[2] = char(v >> 8); s[3] = char(v);
        return s;
    };
    std::string imgs = be(2051) + be(2) + be(4) + be(4);
    std::string px(16, '\0');
    px[5] = char(255);
    imgs += px;
    px[5] = '\0';
    px[10] = char(255);
    imgs += px;
    std::string labels = be(2049) + be(2);
    labels.push_back(0);
    labels.push_back(1);
    {
        std::ofstream fi(dir.file("i.idx"), std::ios::binary);
        fi << imgs;
        std::ofstream fl(dir.file("l.idx"), std::ios::binary);
        fl << labels;
    }

    aadnn_model* m = nullptr;
    aadnn_array* y0 = nullptr;
    REQUIRE(aadnn_build_images(dir.file("i.idx").c_str(), dir.file("l.idx").c_str(), 0.5, 1, 0,
                               1.0, &m, &y0) == AADNN_OK);
    CHECK(aadnn_model_category_count(m) == 2);
    CHECK(std::string(aadnn_model_category_name(m, 0)) == "0_00000");
    double v = 0;
    int present = 0;
    CHECK(aadnn_array_get(y0, "aa", "0_00000", &v, &present) == AADNN_OK);
    CHECK(present == 1);
    CHECK(aadnn_array_get(y0, "bb", "1_00001", &v, &present) == AADNN_OK);
    CHECK(present == 1);
    aadnn_array_free(y0);
    aadnn_model_free(m);
}

TEST_CASE("check_algebra through the C surface") {
    size_t violations = 99;
    char detail[256] = {0};
    REQUIRE(aadnn_check_algebra(40, 3, &violations, detail, sizeof detail) == AADNN_OK);
    CHECK(violations == 0);
}
