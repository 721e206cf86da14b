#include "quantize.hpp"

#include <cmath>

#include "error.hpp"

namespace aadnn {

std::string QuantSpec::describe() const {
    return exact() ? "exact" : std::to_string(fractional_bits);
}

QuantSpec QuantSpec::parse(const std::string& text) {
    if (text == "exact") return exact_spec();
    if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos)
        raise(Errc::parse_error, "bad precision '" + text + "' (expected 'exact' or a bit count)");
    int b = std::stoi(text);
    if (b > 52) raise(Errc::invalid_argument, "precision " + text + " exceeds double mantissa");
    return bits(b);
}

double quantize_value(double v, const QuantSpec& q) {
    if (q.exact()) return v;
    // Power-of-two scaling is exact in binary floating point, and nearbyint
    // under the default rounding mode resolves ties to even.
    double scale = std::ldexp(1.0, q.fractional_bits);
    return std::nearbyint(v * scale) / scale;
}

Array quantize(const Array& a, const QuantSpec& q) {
    if (q.exact()) return a;
    Array::Rows rows;
    for (const auto& [r, row] : a.rows())
        for (const auto& [c, v] : row) {
            double qv = quantize_value(v, q);
            if (qv != 0.0) rows[r][c] = qv;
        }
    return Array::from_rows(std::move(rows));
}

} // namespace aadnn
