#pragma once

#include <stdexcept>
#include <string>

namespace aadnn {

enum class Errc {
    ok = 0,
    null_argument,
    invalid_argument,
    length_mismatch,
    structure_error,
    parse_error,
    integrity_error,
    unsupported_model,
    not_found,
    io_error,
    verify_failed,
};

class Error : public std::runtime_error {
public:
    Error(Errc code, std::string msg) : std::runtime_error(std::move(msg)), code_(code) {}
    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void raise(Errc code, std::string msg) { throw Error(code, std::move(msg)); }

} // namespace aadnn
