#pragma once

#include <string_view>
#include <vector>

namespace aadnn {

enum class SemiringId {
    plus_times,
    max_plus,
    min_plus,
    max_times,
    min_times,
    max_min,
    min_max,
};

// A semiring over (a subset of) the extended reals. `add_identity` doubles as
// the background value of sparse arrays: entries equal to it are not stored.
struct Semiring {
    SemiringId id;
    const char* name;
    double (*add)(double, double);
    double (*mul)(double, double);
    double add_identity;
    double mul_identity;
    // Closed sampling domain for randomized law checks. Integer values drawn
    // from [sample_min, sample_max] keep every axiom exact in doubles.
    double sample_min;
    double sample_max;
};

const Semiring& semiring(SemiringId id);

// Lookup by name ("plus-times", "max-plus", ...). Returns nullptr if unknown.
const Semiring* find_semiring(std::string_view name);

const std::vector<const Semiring*>& all_semirings();

inline bool is_background(const Semiring& s, double v) { return v == s.add_identity; }

} // namespace aadnn
