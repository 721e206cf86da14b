#include "util.hpp"

#include <fstream>
#include <sstream>

#include "error.hpp"

namespace aadnn {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(Errc::io_error, "cannot open " + path);
    std::ostringstream oss;
    oss << in.rdbuf();
    if (in.bad()) raise(Errc::io_error, "read failed for " + path);
    return oss.str();
}

void write_file(const std::string& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) raise(Errc::io_error, "cannot open " + path + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) raise(Errc::io_error, "write failed for " + path);
}

uint64_t fnv1a64(std::string_view data) {
    uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char byte : data) {
        h ^= byte;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string to_hex16(uint64_t v) {
    static const char digits[] = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i) {
        s[static_cast<size_t>(i)] = digits[v & 0xf];
        v >>= 4;
    }
    return s;
}

} // namespace aadnn
