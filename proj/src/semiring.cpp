#include "semiring.hpp"

#include <algorithm>
#include <array>
#include <limits>

namespace aadnn {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double op_add(double a, double b) { return a + b; }
double op_mul(double a, double b) { return a * b; }
double op_max(double a, double b) { return std::max(a, b); }
double op_min(double a, double b) { return std::min(a, b); }

const std::array<Semiring, 7> kRegistry = {{
    {SemiringId::plus_times, "plus-times", op_add, op_mul, 0.0, 1.0, -3.0, 3.0},
    {SemiringId::max_plus, "max-plus", op_max, op_add, -kInf, 0.0, -3.0, 3.0},
    {SemiringId::min_plus, "min-plus", op_min, op_add, kInf, 0.0, -3.0, 3.0},
    {SemiringId::max_times, "max-times", op_max, op_mul, 0.0, 1.0, 0.0, 3.0},
    // min-times needs strictly positive samples: its annihilator is +inf and
    // 0 * inf would poison the axioms with NaN.
    {SemiringId::min_times, "min-times", op_min, op_mul, kInf, 1.0, 1.0, 3.0},
    {SemiringId::max_min, "max-min", op_max, op_min, -kInf, kInf, -3.0, 3.0},
    {SemiringId::min_max, "min-max", op_min, op_max, kInf, -kInf, -3.0, 3.0},
}};

} // namespace

const Semiring& semiring(SemiringId id) { return kRegistry[static_cast<size_t>(id)]; }

const Semiring* find_semiring(std::string_view name) {
    for (const Semiring& s : kRegistry)
        if (name == s.name) return &s;
    return nullptr;
}

const std::vector<const Semiring*>& all_semirings() {
    static const std::vector<const Semiring*> all = [] {
        std::vector<const Semiring*> v;
        for (const Semiring& s : kRegistry) v.push_back(&s);
        return v;
    }();
    return all;
}

} // namespace aadnn
