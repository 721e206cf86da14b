#pragma once

#include <map>
#include <string>
#include <vector>

#include "array.hpp"

namespace aadnn {

struct Layer {
    Array W;
    std::map<Key, double> bias; // one entry per nonzero row of W
    double beta = 1.0;
};

// Feed-forward ReLU network over associative arrays. Layer ℓ's column keys
// live in layer ℓ-1's row space; layer 0's columns live in input_keys.
struct Model {
    std::vector<Layer> layers;
    std::vector<Key> input_keys;
    std::vector<Key> category_keys;

    size_t depth() const { return layers.size(); }
};

struct InferStats {
    size_t dropped_input_rows = 0; // batch rows outside input_keys, ignored
};

// b(r) = β·|rowsum|₀ − rowsum for every stored row of W (β − degree for 0/1
// weights). Rows absent from W get no entry.
std::map<Key, double> make_bias(const Array& w, double beta);

// B(r, s) = b(r) for every bias row r and every sample column s of Y.
Array replicate_bias(const std::map<Key, double>& bias, const Array& y);

// L ReLU layers: Y ← max(WY + B, 0) with B replicated over the batch's sample
// columns. Negative and exactly-zero results are elided. Batch rows outside
// input_keys are dropped (counted in stats).
Array infer_relu(const Model& m, const Array& y0, InferStats* stats = nullptr);

// Same computation phrased as a plus-times product followed by a max-plus
// combine step; must match infer_relu entry-exactly.
Array infer_semiring(const Model& m, const Array& y0, InferStats* stats = nullptr);

// All layers stacked into one block array plus one stacked bias vector.
// Requires layer row spaces pairwise disjoint and disjoint from input_keys.
struct CollapsedModel {
    Array W;
    std::map<Key, double> bias;
    size_t depth = 0;
    std::vector<Key> input_keys;
    std::vector<Key> category_keys;
};

CollapsedModel collapse(const Model& m);

// Iterates the single-block ReLU step depth times. The activation wave climbs
// one layer per iteration; reading earlier shows intermediate rows.
Array infer_collapsed(const CollapsedModel& cm, const Array& y0, InferStats* stats = nullptr);

// Max-times product of the weight layers in descending order: the equivalent
// single-layer 0/1 weight array (rows = categories, cols = inputs).
Array flatten(const Model& m);

// Y₀ = flatten(m)ᵀ: one sample column per category, ones on its features.
Array exact_input(const Model& m);

// Runs the exact input through the model and compares against the identity
// over category_keys. On failure carries the first offending entry in key
// order.
struct ExactnessReport {
    bool ok = false;
    Key category, sample;
    double expected = 0, got = 0;
    std::string describe() const;
};

ExactnessReport verify_exact(const Model& m);

} // namespace aadnn
