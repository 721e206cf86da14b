// Command-line front end for libaadnn. Talks to the library exclusively
// through the public C API.

#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "aadnn/aadnn.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

int fail(const std::string& what) {
    std::cerr << "error: " << what << ": " << aadnn_last_error() << '\n';
    return kExitUsage;
}

struct ModelHandle {
    aadnn_model* m = nullptr;
    ~ModelHandle() { aadnn_model_free(m); }
};

struct ArrayHandle {
    aadnn_array* a = nullptr;
    ~ArrayHandle() { aadnn_array_free(a); }
};

bool parse_grid(const std::string& text, double& start, double& stop, double& step) {
    size_t c1 = text.find(':');
    size_t c2 = c1 == std::string::npos ? std::string::npos : text.find(':', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos) return false;
    try {
        size_t n1 = 0, n2 = 0, n3 = 0;
        start = std::stod(text.substr(0, c1), &n1);
        stop = std::stod(text.substr(c1 + 1, c2 - c1 - 1), &n2);
        step = std::stod(text.substr(c2 + 1), &n3);
        return n1 == c1 && n2 == c2 - c1 - 1 && n3 == text.size() - c2 - 1;
    } catch (const std::exception&) {
        return false;
    }
}

int run_build_combinatoric(const std::vector<size_t>& sizes, const std::string& plan,
                           const std::vector<double>& betas, const std::string& out) {
    ModelHandle model;
    if (aadnn_build_combinatoric(sizes.data(), sizes.size(), plan.c_str(), betas.data(),
                                 betas.size(), &model.m) != AADNN_OK)
        return fail("build-combinatoric");
    if (aadnn_model_write_file(model.m, out.c_str()) != AADNN_OK) return fail("write " + out);
    return kExitOk;
}

int run_build_selective(const std::string& words, const std::string& plan,
                        const std::vector<double>& betas, const std::string& out) {
    ModelHandle model;
    if (aadnn_build_selective_file(words.c_str(), plan.c_str(), betas.data(), betas.size(),
                                   &model.m) != AADNN_OK)
        return fail("build-selective");
    if (aadnn_model_write_file(model.m, out.c_str()) != AADNN_OK) return fail("write " + out);
    return kExitOk;
}

int run_build_images(const std::string& images, const std::string& labels, double threshold,
                     size_t trim, size_t max_images, const std::string& out) {
    ModelHandle model;
    ArrayHandle y0;
    if (aadnn_build_images(images.c_str(), labels.c_str(), threshold, trim, max_images, 1.0,
                           &model.m, &y0.a) != AADNN_OK)
        return fail("build-images");
    char params[256];
    std::snprintf(params, sizeof params, "threshold=%g trim=%zu max=%zu", threshold, trim,
                  max_images);
    if (aadnn_bundle_export(model.m, y0.a, "exact", "images", params, out.c_str()) != AADNN_OK)
        return fail("write bundle " + out);
    return kExitOk;
}

int run_infer(const std::string& model_path, const std::string& input, const std::string& output,
              const std::string& engine_name) {
    aadnn_engine engine;
    if (engine_name == "relu") engine = AADNN_ENGINE_RELU;
    else if (engine_name == "semiring") engine = AADNN_ENGINE_SEMIRING;
    else if (engine_name == "collapsed") engine = AADNN_ENGINE_COLLAPSED;
    else {
        std::cerr << "error: unknown engine '" << engine_name
                  << "' (expected relu, semiring or collapsed)\n";
        return kExitUsage;
    }
    ModelHandle model;
    if (aadnn_model_read_file(model_path.c_str(), &model.m) != AADNN_OK)
        return fail("read " + model_path);
    ArrayHandle y0;
    if (aadnn_array_read_tsv(input.c_str(), AADNN_PLUS_TIMES, &y0.a) != AADNN_OK)
        return fail("read " + input);
    ArrayHandle yl;
    size_t dropped = 0;
    if (aadnn_model_infer(model.m, y0.a, engine, &yl.a, &dropped) != AADNN_OK)
        return fail("infer");
    if (dropped > 0)
        std::cerr << "note: ignored " << dropped << " input rows outside the model's input space\n";
    if (aadnn_array_write_tsv(yl.a, output.c_str()) != AADNN_OK) return fail("write " + output);
    return kExitOk;
}

int run_verify_exact(const std::string& model_path) {
    ModelHandle model;
    if (aadnn_model_read_file(model_path.c_str(), &model.m) != AADNN_OK)
        return fail("read " + model_path);
    int exact = 0;
    char msg[512];
    if (aadnn_model_verify_exact(model.m, &exact, msg, sizeof msg) != AADNN_OK)
        return fail("verify-exact");
    if (!exact) {
        std::cerr << "verify-exact: " << msg << '\n';
        return kExitCheckFailed;
    }
    std::cout << "exact (" << aadnn_model_category_count(model.m) << " categories)\n";
    return kExitOk;
}

int run_flatten(const std::string& model_path, const std::string& out) {
    ModelHandle model;
    if (aadnn_model_read_file(model_path.c_str(), &model.m) != AADNN_OK)
        return fail("read " + model_path);
    ArrayHandle w;
    if (aadnn_model_flatten(model.m, &w.a) != AADNN_OK) return fail("flatten");
    if (aadnn_array_write_tsv(w.a, out.c_str()) != AADNN_OK) return fail("write " + out);
    return kExitOk;
}

int run_perturb(const std::string& model_path, const std::string& category,
                const std::string& feature, const std::string& grid, const std::string& out) {
    double start = 0, stop = 0, step = 0;
    if (!parse_grid(grid, start, stop, step)) {
        std::cerr << "error: bad grid '" << grid << "' (expected start:stop:step)\n";
        return kExitUsage;
    }
    ModelHandle model;
    if (aadnn_model_read_file(model_path.c_str(), &model.m) != AADNN_OK)
        return fail("read " + model_path);
    aadnn_sweep* sweep = nullptr;
    if (aadnn_sweep_run(model.m, category.c_str(), feature.c_str(), start, stop, step, &sweep) !=
        AADNN_OK)
        return fail("perturb");
    aadnn_status st = aadnn_sweep_write_tsv(sweep, out.c_str());
    aadnn_sweep_free(sweep);
    if (st != AADNN_OK) return fail("write " + out);
    return kExitOk;
}

int run_export_testvec(const std::string& model_path, const std::string& precision,
                       const std::string& out) {
    ModelHandle model;
    if (aadnn_model_read_file(model_path.c_str(), &model.m) != AADNN_OK)
        return fail("read " + model_path);
    std::string params = "source=" + model_path + " precision=" + precision;
    if (aadnn_bundle_export(model.m, nullptr, precision.c_str(), "model-file", params.c_str(),
                            out.c_str()) != AADNN_OK)
        return fail("export " + out);
    return kExitOk;
}

int run_verify_bundle(const std::string& dir, const std::string& candidate_path) {
    ArrayHandle candidate;
    if (aadnn_array_read_tsv(candidate_path.c_str(), AADNN_PLUS_TIMES, &candidate.a) != AADNN_OK)
        return fail("read " + candidate_path);
    aadnn_verify_report* report = nullptr;
    if (aadnn_bundle_verify(dir.c_str(), candidate.a, &report) != AADNN_OK)
        return fail("verify-bundle");
    size_t mismatches = aadnn_verify_mismatch_count(report);
    size_t samples = aadnn_verify_sample_count(report);
    size_t agreements = aadnn_verify_argmax_agreements(report);
    std::printf("samples\t%zu\n", samples);
    std::printf("argmax_agreement\t%zu/%zu\t%.6f\n", agreements, samples,
                aadnn_verify_argmax_rate(report));
    std::printf("mismatches\t%zu\n", mismatches);
    for (size_t i = 0; i < mismatches; ++i) {
        const char *row = nullptr, *col = nullptr;
        double expected = 0, got = 0;
        aadnn_verify_mismatch(report, i, &row, &col, &expected, &got);
        std::printf("mismatch\t%s\t%s\texpected=%.17g\tgot=%.17g\n", row, col, expected, got);
    }
    aadnn_verify_report_free(report);
    return mismatches == 0 ? kExitOk : kExitCheckFailed;
}

int run_check_algebra(size_t trials, uint64_t seed) {
    size_t violations = 0;
    char detail[4096];
    if (aadnn_check_algebra(trials, seed, &violations, detail, sizeof detail) != AADNN_OK)
        return fail("check-algebra");
    std::printf("trials\t%zu\nseed\t%" PRIu64 "\nviolations\t%zu\n", trials, seed, violations);
    if (violations > 0) {
        std::cerr << detail;
        return kExitCheckFailed;
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sparse associative-array DNN toolkit"};
    app.require_subcommand(1);

    int rc = kExitOk;

    // build-combinatoric
    std::vector<size_t> sizes;
    std::string plan, out_path, words_path;
    std::vector<double> betas{1.0};
    auto* bc = app.add_subcommand("build-combinatoric",
                                  "Build a Kronecker cross-product model and write it");
    bc->add_option("--sets", sizes, "Feature set sizes, e.g. 2,2,2,2")->required()->delimiter(',');
    bc->add_option("--plan", plan, "Merge plan, e.g. f1,f2|f3,f4;f12,f34")->required();
    bc->add_option("--beta", betas, "Gap parameter per layer (or one for all)")->delimiter(',');
    bc->add_option("-o,--output", out_path, "Model file to write")->required();
    bc->callback([&] { rc = run_build_combinatoric(sizes, plan, betas, out_path); });

    // build-selective
    auto* bs = app.add_subcommand("build-selective",
                                  "Build a word-category model and write it");
    bs->add_option("--words", words_path, "Word list file, one word per line")->required();
    bs->add_option("--plan", plan, "Merge plan, e.g. f1,f2|f2,f3;f12,f23")->required();
    bs->add_option("--beta", betas, "Gap parameter per layer (or one for all)")->delimiter(',');
    bs->add_option("-o,--output", out_path, "Model file to write")->required();
    bs->callback([&] { rc = run_build_selective(words_path, plan, betas, out_path); });

    // build-images
    std::string images_path, labels_path;
    double threshold = 0.5;
    size_t trim = 1, max_images = 0;
    auto* bi = app.add_subcommand("build-images",
                                  "Build a model from IDX images and export it as a bundle");
    bi->add_option("--images", images_path, "IDX image file")->required();
    bi->add_option("--labels", labels_path, "IDX label file")->required();
    bi->add_option("--threshold", threshold, "On-pixel threshold (strictly above)")->capture_default_str();
    bi->add_option("--trim", trim, "Pixels trimmed from each border")->capture_default_str();
    bi->add_option("--max", max_images, "Use at most this many images (0 = all)")->capture_default_str();
    bi->add_option("-o,--output", out_path, "Bundle directory to write")->required();
    bi->callback(
        [&] { rc = run_build_images(images_path, labels_path, threshold, trim, max_images, out_path); });

    // infer
    std::string model_path, input_path, engine = "relu";
    auto* in = app.add_subcommand("infer", "Run forward inference on a batch");
    in->add_option("-m,--model", model_path, "Model file")->required();
    in->add_option("-i,--input", input_path, "Input batch TSV")->required();
    in->add_option("-o,--output", out_path, "Output batch TSV")->required();
    in->add_option("--engine", engine, "relu, semiring or collapsed")->capture_default_str();
    in->callback([&] { rc = run_infer(model_path, input_path, out_path, engine); });

    // verify-exact
    auto* ve = app.add_subcommand("verify-exact",
                                  "Check that the exact input reproduces the identity");
    ve->add_option("-m,--model", model_path, "Model file")->required();
    ve->callback([&] { rc = run_verify_exact(model_path); });

    // flatten
    auto* fl = app.add_subcommand("flatten", "Write the equivalent single-layer weight array");
    fl->add_option("-m,--model", model_path, "Model file")->required();
    fl->add_option("-o,--output", out_path, "Weight TSV to write")->required();
    fl->callback([&] { rc = run_flatten(model_path, out_path); });

    // perturb
    std::string category, feature, grid = "0:2:0.001";
    auto* pe = app.add_subcommand("perturb",
                                  "Sweep a single-feature perturbation and write Pd/Pfa");
    pe->add_option("-m,--model", model_path, "Model file")->required();
    pe->add_option("-c,--category", category, "Category to detect")->required();
    pe->add_option("-f,--feature", feature, "Supporting feature to perturb")->required();
    pe->add_option("--grid", grid, "start:stop:step within [0,2]")->capture_default_str();
    pe->add_option("-o,--output", out_path, "Sweep TSV to write")->required();
    pe->callback([&] { rc = run_perturb(model_path, category, feature, grid, out_path); });

    // export-testvec
    std::string precision = "exact";
    auto* ex = app.add_subcommand("export-testvec",
                                  "Write a test-vector bundle for the model's exact input");
    ex->add_option("-m,--model", model_path, "Model file")->required();
    ex->add_option("--precision", precision, "'exact' or fractional bits")->capture_default_str();
    ex->add_option("-o,--output", out_path, "Bundle directory to write")->required();
    ex->callback([&] { rc = run_export_testvec(model_path, precision, out_path); });

    // verify-bundle
    std::string bundle_dir, candidate_path;
    auto* vb = app.add_subcommand("verify-bundle",
                                  "Compare a candidate output against a bundle");
    vb->add_option("-b,--bundle", bundle_dir, "Bundle directory")->required();
    vb->add_option("-i,--input", candidate_path, "Candidate output TSV")->required();
    vb->callback([&] { rc = run_verify_bundle(bundle_dir, candidate_path); });

    // check-algebra
    size_t trials = 1000;
    uint64_t seed = 42;
    auto* ca = app.add_subcommand("check-algebra", "Randomized semiring law self-test");
    ca->add_option("--trials", trials, "Trials per law per semiring")->capture_default_str();
    ca->add_option("--seed", seed, "RNG seed")->capture_default_str();
    ca->callback([&] { rc = run_check_algebra(trials, seed); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }
    return rc;
}
