#include "idx.hpp"

#include <limits>

#include "error.hpp"
#include "util.hpp"

namespace aadnn {

namespace {

constexpr uint32_t kImagesMagic = 2051;
constexpr uint32_t kLabelsMagic = 2049;

[[noreturn]] void fail_at(size_t offset, const std::string& msg) {
    raise(Errc::parse_error, msg + " (byte offset " + std::to_string(offset) + ")");
}

uint32_t read_u32be(std::string_view bytes, size_t& offset, const char* what) {
    if (offset + 4 > bytes.size()) fail_at(offset, std::string("truncated ") + what);
    auto b = [&](size_t i) { return static_cast<uint32_t>(static_cast<unsigned char>(bytes[offset + i])); };
    uint32_t v = (b(0) << 24) | (b(1) << 16) | (b(2) << 8) | b(3);
    offset += 4;
    return v;
}

void append_u32be(std::string& out, uint32_t v) {
    out.push_back(static_cast<char>((v >> 24) & 0xff));
    out.push_back(static_cast<char>((v >> 16) & 0xff));
    out.push_back(static_cast<char>((v >> 8) & 0xff));
    out.push_back(static_cast<char>(v & 0xff));
}

} // namespace

std::vector<IdxImage> read_idx_images(std::string_view bytes) {
    size_t offset = 0;
    uint32_t magic = read_u32be(bytes, offset, "magic");
    if (magic != kImagesMagic)
        fail_at(0, "bad image magic " + std::to_string(magic) + " (expected 2051)");
    uint64_t count = read_u32be(bytes, offset, "image count");
    uint64_t rows = read_u32be(bytes, offset, "row count");
    uint64_t cols = read_u32be(bytes, offset, "column count");
    uint64_t per_image = rows * cols; // each factor < 2^32, product fits
    if (per_image != 0 && count > std::numeric_limits<uint64_t>::max() / per_image)
        fail_at(4, "image dimensions overflow");
    uint64_t payload = count * per_image;
    if (offset + payload > bytes.size())
        fail_at(bytes.size(), "truncated image payload (need " + std::to_string(payload) + " bytes)");
    if (offset + payload < bytes.size())
        fail_at(offset + payload, "trailing bytes after image payload");

    std::vector<IdxImage> images(count);
    for (IdxImage& img : images) {
        img.rows = rows;
        img.cols = cols;
        img.pixels.resize(rows * cols);
        for (double& p : img.pixels)
            p = static_cast<unsigned char>(bytes[offset++]) / 255.0;
    }
    return images;
}

std::vector<uint8_t> read_idx_labels(std::string_view bytes) {
    size_t offset = 0;
    uint32_t magic = read_u32be(bytes, offset, "magic");
    if (magic != kLabelsMagic)
        fail_at(0, "bad label magic " + std::to_string(magic) + " (expected 2049)");
    uint64_t count = read_u32be(bytes, offset, "label count");
    if (offset + count > bytes.size())
        fail_at(bytes.size(), "truncated label payload (need " + std::to_string(count) + " bytes)");
    if (offset + count < bytes.size()) fail_at(offset + count, "trailing bytes after label payload");

    std::vector<uint8_t> labels(count);
    for (uint8_t& l : labels) {
        l = static_cast<uint8_t>(bytes[offset]);
        if (l > 9) fail_at(offset, "label " + std::to_string(l) + " out of range 0-9");
        ++offset;
    }
    return labels;
}

std::vector<IdxImage> read_idx_images_file(const std::string& path) {
    try {
        return read_idx_images(read_file(path));
    } catch (const Error& err) {
        raise(err.code(), path + ": " + err.what());
    }
}

std::vector<uint8_t> read_idx_labels_file(const std::string& path) {
    try {
        return read_idx_labels(read_file(path));
    } catch (const Error& err) {
        raise(err.code(), path + ": " + err.what());
    }
}

std::string write_idx_images(const std::vector<IdxImage>& images) {
    size_t rows = images.empty() ? 0 : images.front().rows;
    size_t cols = images.empty() ? 0 : images.front().cols;
    for (const IdxImage& img : images)
        if (img.rows != rows || img.cols != cols)
            raise(Errc::invalid_argument, "images differ in shape");
    std::string out;
    append_u32be(out, kImagesMagic);
    append_u32be(out, static_cast<uint32_t>(images.size()));
    append_u32be(out, static_cast<uint32_t>(rows));
    append_u32be(out, static_cast<uint32_t>(cols));
    for (const IdxImage& img : images)
        for (double p : img.pixels)
            out.push_back(static_cast<char>(static_cast<unsigned char>(p * 255.0 + 0.5)));
    return out;
}

std::string write_idx_labels(const std::vector<uint8_t>& labels) {
    std::string out;
    append_u32be(out, kLabelsMagic);
    append_u32be(out, static_cast<uint32_t>(labels.size()));
    for (uint8_t l : labels) out.push_back(static_cast<char>(l));
    return out;
}

} // namespace aadnn
