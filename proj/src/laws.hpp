#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "array.hpp"

namespace aadnn {

struct LawViolation {
    std::string semiring;
    std::string law;
    size_t trial = 0;
};

// Randomized check of the algebraic laws (commutativity, associativity of
// element-wise multiply / array multiply / Kronecker, the matching
// distributivities, identities, annihilator, transpose reversal) over every
// registered semiring. Values are drawn from each semiring's integer sampling
// domain so every law holds exactly in doubles. Deterministic in `seed`.
std::vector<LawViolation> check_algebra(size_t trials, uint64_t seed, size_t max_report = 100);

} // namespace aadnn
