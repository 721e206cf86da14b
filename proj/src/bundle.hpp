#pragma once

#include <string>
#include <vector>

#include "dnn.hpp"
#include "quantize.hpp"

namespace aadnn {

// Conformance artifact: a model plus one input batch and the expected output
// at a stated precision, written as a directory (model.txt, y0.tsv, yl.tsv,
// meta.txt with FNV-1a checksums).
struct TestVectorBundle {
    Model model;
    Array y0;
    Array expected_yl;
    QuantSpec precision;
    std::string builder;    // provenance: which builder produced the model
    std::string parameters; // provenance: its parameters, free text
};

// Runs inference on (m, y0) and stores the result quantized at `precision`.
TestVectorBundle make_bundle(const Model& m, const Array& y0, QuantSpec precision,
                             std::string builder, std::string parameters);

void write_bundle(const TestVectorBundle& b, const std::string& dir);

// Verifies the format version and per-file checksums before parsing; failures
// raise integrity errors.
TestVectorBundle read_bundle(const std::string& dir);

struct BundleVerifyReport {
    struct Mismatch {
        Key row, col;
        double expected = 0, got = 0;
    };
    std::vector<Mismatch> mismatches; // in (row, col) key order
    size_t sample_count = 0;
    size_t argmax_agreements = 0;

    bool ok() const { return mismatches.empty(); }
    double argmax_rate() const {
        return sample_count ? static_cast<double>(argmax_agreements) / static_cast<double>(sample_count)
                            : 1.0;
    }
};

// Quantizes the candidate at the bundle's precision and compares entry-exact;
// also reports per-sample strict-argmax agreement. Mismatches are report
// content, not errors.
BundleVerifyReport verify_bundle(const TestVectorBundle& b, const Array& candidate_yl);

} // namespace aadnn
