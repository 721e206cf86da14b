#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace aadnn {

struct IdxImage {
    size_t rows = 0, cols = 0;
    std::vector<double> pixels; // row-major, scaled to [0,1]

    double at(size_t i, size_t j) const { return pixels[i * cols + j]; }
};

// IDX: 4-byte big-endian magic (2051 images, 2049 labels), big-endian uint32
// dimensions, then raw unsigned bytes. Parse errors carry the byte offset.
std::vector<IdxImage> read_idx_images(std::string_view bytes);
std::vector<uint8_t> read_idx_labels(std::string_view bytes);

std::vector<IdxImage> read_idx_images_file(const std::string& path);
std::vector<uint8_t> read_idx_labels_file(const std::string& path);

// Writers for fixtures and round-trip tests.
std::string write_idx_images(const std::vector<IdxImage>& images);
std::string write_idx_labels(const std::vector<uint8_t>& labels);

} // namespace aadnn
