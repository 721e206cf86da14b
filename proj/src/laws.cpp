#include "laws.hpp"

#include <functional>
#include <random>

namespace aadnn {

namespace {

struct Trial {
    Array a, b, c;
};

class Checker {
public:
    Checker(const Semiring& s, std::vector<LawViolation>& out, size_t max_report)
        : s_(s), out_(out), max_report_(max_report) {
        std::vector<Key> universe;
        for (int i = 0; i < 6; ++i) universe.push_back("k" + std::to_string(i));
        dense_one_ = ones_like(universe);
        diag_one_ = diag_like(universe);
        universe_ = std::move(universe);
    }

    void run(size_t trials, uint64_t seed) {
        std::mt19937_64 rng(seed);
        for (size_t t = 0; t < trials; ++t) {
            Trial tr{random_array(rng), random_array(rng), random_array(rng)};
            trial_ = t;
            check_laws(tr);
        }
    }

private:
    Array ones_like(const std::vector<Key>& keys) {
        Array::Rows rows;
        for (const Key& r : keys)
            for (const Key& c : keys) rows[r][c] = s_.mul_identity;
        return Array::from_rows(std::move(rows));
    }

    Array diag_like(const std::vector<Key>& keys) {
        Array::Rows rows;
        for (const Key& k : keys) rows[k][k] = s_.mul_identity;
        return Array::from_rows(std::move(rows));
    }

    Array random_array(std::mt19937_64& rng) {
        auto span = static_cast<uint64_t>(s_.sample_max - s_.sample_min) + 1;
        Array::Rows rows;
        for (const Key& r : universe_)
            for (const Key& c : universe_) {
                if (rng() % 100 >= 35) continue;
                double v = s_.sample_min + static_cast<double>(rng() % span);
                if (!is_background(s_, v)) rows[r][c] = v;
            }
        return Array::from_rows(std::move(rows));
    }

    void expect(const char* law, const Array& lhs, const Array& rhs) {
        if (lhs == rhs) return;
        if (out_.size() < max_report_) out_.push_back({s_.name, law, trial_});
        else if (out_.size() == max_report_) out_.push_back({s_.name, "... further violations suppressed", trial_});
    }

    void check_laws(const Trial& t) {
        const Array &A = t.a, &B = t.b, &C = t.c;
        expect("ewise-add commutativity", ewise_add(A, B, s_), ewise_add(B, A, s_));
        expect("ewise-add associativity", ewise_add(ewise_add(A, B, s_), C, s_),
               ewise_add(A, ewise_add(B, C, s_), s_));
        expect("ewise-mult commutativity", ewise_mult(A, B, s_), ewise_mult(B, A, s_));
        expect("ewise-mult associativity", ewise_mult(ewise_mult(A, B, s_), C, s_),
               ewise_mult(A, ewise_mult(B, C, s_), s_));
        expect("matmul associativity", matmul(matmul(A, B, s_), C, s_),
               matmul(A, matmul(B, C, s_), s_));
        expect("kron associativity", kron(kron(A, B, s_), C, s_), kron(A, kron(B, C, s_), s_));
        expect("ewise distributivity", ewise_mult(A, ewise_add(B, C, s_), s_),
               ewise_add(ewise_mult(A, B, s_), ewise_mult(A, C, s_), s_));
        expect("matmul distributivity", matmul(A, ewise_add(B, C, s_), s_),
               ewise_add(matmul(A, B, s_), matmul(A, C, s_), s_));
        expect("kron distributivity", kron(ewise_add(A, B, s_), C, s_),
               ewise_add(kron(A, C, s_), kron(B, C, s_), s_));
        expect("add identity", ewise_add(A, Array{}, s_), A);
        expect("mult identity", ewise_mult(A, dense_one_, s_), A);
        expect("matmul right identity", matmul(A, diag_one_, s_), A);
        expect("matmul left identity", matmul(diag_one_, A, s_), A);
        expect("ewise annihilator", ewise_mult(A, Array{}, s_), Array{});
        expect("matmul annihilator", matmul(A, Array{}, s_), Array{});
        expect("transpose reversal", transpose(matmul(A, B, s_)),
               matmul(transpose(B), transpose(A), s_));
    }

    const Semiring& s_;
    std::vector<LawViolation>& out_;
    size_t max_report_;
    std::vector<Key> universe_;
    Array dense_one_, diag_one_;
    size_t trial_ = 0;
};

} // namespace

std::vector<LawViolation> check_algebra(size_t trials, uint64_t seed, size_t max_report) {
    std::vector<LawViolation> violations;
    const auto& semirings = all_semirings();
    for (size_t i = 0; i < semirings.size(); ++i) {
        Checker checker(*semirings[i], violations, max_report);
        checker.run(trials, seed + i);
    }
    return violations;
}

} // namespace aadnn
