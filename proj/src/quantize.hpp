#pragma once

#include <string>

#include "array.hpp"

namespace aadnn {

// Fixed-point precision: values snap to multiples of 2^-fractional_bits with
// ties to even. Exact mode leaves values untouched.
struct QuantSpec {
    int fractional_bits = -1; // -1 = exact

    bool exact() const { return fractional_bits < 0; }
    static QuantSpec exact_spec() { return {}; }
    static QuantSpec bits(int fractional_bits) { return {fractional_bits}; }

    std::string describe() const; // "exact" or the bit count
    static QuantSpec parse(const std::string& text);
};

double quantize_value(double v, const QuantSpec& q);
Array quantize(const Array& a, const QuantSpec& q);

} // namespace aadnn
