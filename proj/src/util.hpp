#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace aadnn {

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

uint64_t fnv1a64(std::string_view data);
std::string to_hex16(uint64_t v);

} // namespace aadnn
