#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dnn.hpp"
#include "idx.hpp"

namespace aadnn {

// Leaf feature block, e.g. id "f2" with keys {"2a","2b"}. The position prefix
// keeps keys from different blocks distinct.
struct FeatureSet {
    std::string id;
    std::vector<Key> keys;
};

// Merge schedule: stages of groups of block ids. Each group combines ≥2
// blocks covering a contiguous position span; merged ids concatenate the
// positions ("f1,f2|f2,f3" yields blocks f12 and f23). The final stage must
// produce a single block spanning every position.
struct LayerPlan {
    std::vector<std::vector<std::vector<std::string>>> stages;

    // Grammar: stages ';', groups '|', members ','.
    static LayerPlan parse(const std::string& text);
    std::string to_string() const;
};

// Generates sets f1..fm with keys "<position><letter>" ("1a","1b",...).
std::vector<FeatureSet> make_letter_features(const std::vector<size_t>& sizes);

// Kronecker construction: every group's categories are the full cross product
// of its member keys; each category row carries one 1 per member. Betas: one
// per stage, or a single value for all stages.
Model build_combinatoric(const std::vector<FeatureSet>& sets, const LayerPlan& plan,
                         const std::vector<double>& betas);

// Category-driven construction over equal-length lowercase words: only the
// substrings that occur in the words become neurons; each merged block wires
// an identity from every member block.
Model build_selective(const std::vector<std::string>& words, const LayerPlan& plan,
                      const std::vector<double>& betas);

// One word per line, lowercase ASCII.
std::vector<std::string> read_word_list(const std::string& path);

// Thresholded binary images: each image becomes one category row with ones at
// its on-pixels; pixel (i,j) after trimming is keyed by two lowercase letters.
struct ImageBuildResult {
    Model model;
    Array y0; // the exact input, one sample column per image category
};

ImageBuildResult build_from_images(const std::vector<IdxImage>& images,
                                   const std::vector<uint8_t>& labels, double threshold,
                                   size_t trim, double beta = 1.0);

} // namespace aadnn
