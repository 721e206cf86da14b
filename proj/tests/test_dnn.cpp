#include <doctest.h>

#include <cmath>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "dnn.hpp"
#include "error.hpp"
#include "tsv.hpp"

using namespace aadnn;

namespace {

const Semiring& PT = semiring(SemiringId::plus_times);

// Two-layer hand model: categories {c1}, hidden {n1, n2}, inputs {a, b, d}.
Model hand_model(double beta = 1.0) {
    Model m;
    Layer l0;
    l0.W = build({{"n1", "a", 1}, {"n1", "b", 1}, {"n2", "b", 1}, {"n2", "d", 1}}, PT);
    l0.beta = beta;
    l0.bias = make_bias(l0.W, beta);
    Layer l1;
    l1.W = build({{"c1", "n1", 1}, {"c1", "n2", 1}}, PT);
    l1.beta = beta;
    l1.bias = make_bias(l1.W, beta);
    m.layers = {l0, l1};
    m.input_keys = {"a", "b", "d"};
    m.category_keys = {"c1"};
    return m;
}

// Dense re-computation of the layered ReLU recursion, mirroring the sparse
// engine's accumulation order (ascending column keys).
Array dense_forward(const Model& m, const Array& y0) {
    std::vector<Key> samples = nonzero_cols(y0);
    std::set<Key> allowed(m.input_keys.begin(), m.input_keys.end());

    std::map<Key, std::map<Key, double>> cur; // sample -> key -> value
    for (const auto& [r, row] : y0.rows()) {
        if (!allowed.count(r)) continue;
        for (const auto& [s, v] : row) cur[s][r] = v;
    }

    for (const Layer& layer : m.layers) {
        std::set<Key> row_keys;
        for (const auto& [r, row] : layer.W.rows()) row_keys.insert(r);
        for (const auto& [r, b] : layer.bias) row_keys.insert(r);

        std::map<Key, std::map<Key, double>> next;
        for (const Key& s : samples) {
            for (const Key& r : row_keys) {
                double acc = 0.0;
                bool have_product = false;
                if (const Array::Row* wrow = layer.W.row(r)) {
                    for (const auto& [c, w] : *wrow) {
                        auto it = cur[s].find(c);
                        if (it == cur[s].end()) continue;
                        acc += w * it->second;
                        have_product = true;
                    }
                }
                auto bit = layer.bias.find(r);
                double b = bit == layer.bias.end() ? 0.0 : bit->second;
                if (!have_product || acc == 0.0) {
                    // the sparse product stores nothing here; only rows with a
                    // positive bias are evaluated anyway
                    if (!(b > 0.0)) continue;
                    acc = 0.0;
                }
                double v = acc + b;
                if (v > 0.0) next[s][r] = v;
            }
        }
        cur = std::move(next);
    }

    Array::Rows rows;
    for (const auto& [s, col] : cur)
        for (const auto& [r, v] : col) rows[r][s] = v;
    return Array::from_rows(std::move(rows));
}

Model random_model(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> depth_dist(1, 4);
    std::uniform_int_distribution<int> width_dist(1, 20);
    std::uniform_real_distribution<double> weight(-2.0, 2.0);
    std::uniform_real_distribution<double> bias(-1.0, 1.0);
    std::uniform_real_distribution<double> chance(0.0, 1.0);

    int depth = depth_dist(rng);
    std::vector<std::vector<Key>> levels(depth + 1);
    for (int l = 0; l <= depth; ++l) {
        int width = width_dist(rng);
        for (int j = 0; j < width; ++j)
            levels[l].push_back("L" + std::to_string(l) + "n" + std::to_string(j));
    }

    Model m;
    for (int l = 0; l < depth; ++l) {
        Array::Rows rows;
        for (const Key& r : levels[l + 1])
            for (const Key& c : levels[l])
                if (chance(rng) < 0.4) {
                    double w = weight(rng);
                    if (w != 0.0) rows[r][c] = w;
                }
        Layer layer;
        layer.W = Array::from_rows(std::move(rows));
        for (const Key& r : nonzero_rows(layer.W)) layer.bias[r] = bias(rng);
        m.layers.push_back(std::move(layer));
    }
    m.input_keys = levels[0];
    m.category_keys = levels[depth];
    return m;
}

Array random_batch(std::mt19937_64& rng, const std::vector<Key>& input_keys) {
    std::uniform_real_distribution<double> value(-1.0, 2.0);
    std::uniform_real_distribution<double> chance(0.0, 1.0);
    std::uniform_int_distribution<int> nsamples(1, 4);
    Array::Rows rows;
    int n = nsamples(rng);
    for (int s = 0; s < n; ++s)
        for (const Key& r : input_keys)
            if (chance(rng) < 0.5) {
                double v = value(rng);
                if (v != 0.0) rows[r]["s" + std::to_string(s)] = v;
            }
    return Array::from_rows(std::move(rows));
}

} // namespace

TEST_CASE("make_bias is beta minus the row sum for 0/1 weights") {
    Array w = build({{"d1", "a", 1}, {"d2", "a", 1}, {"d2", "b", 1}, {"d3", "a", 1},
                     {"d3", "b", 1}, {"d3", "c", 1}},
                    PT);
    auto bias = make_bias(w, 1.0);
    CHECK(bias.size() == 3);
    CHECK(bias.at("d1") == 0.0); // zero biases stay in the map
    CHECK(bias.at("d2") == -1.0);
    CHECK(bias.at("d3") == -2.0);

    auto half = make_bias(w, 0.5);
    CHECK(half.at("d2") == -1.5);

    CHECK_THROWS_AS(make_bias(w, -0.1), Error);
    CHECK_THROWS_AS(make_bias(w, 1.1), Error);
}

TEST_CASE("make_bias applies the zero-norm of the row sum") {
    Array w = build({{"r1", "a", 2.5}, {"r1", "b", -1.5}, {"r2", "a", 1.0}, {"r2", "b", -1.0}},
                    PT);
    auto bias = make_bias(w, 1.0);
    CHECK(bias.at("r1") == 1.0 * 1.0 - 1.0); // rowsum 1, |rowsum|0 = 1
    CHECK(bias.at("r2") == 0.0);             // rowsum 0, |rowsum|0 = 0

    Array w2 = build({{"r2", "a", 1.0}, {"r2", "b", -0.5}}, PT);
    CHECK(make_bias(w2, 0.5).at("r2") == 0.5 - 0.5);
}

TEST_CASE("replicate_bias spreads bias values over the batch columns") {
    Array y = build({{"a", "s1", 1.0}, {"b", "s2", 1.0}}, PT);
    Array b = replicate_bias({{"n1", -1.0}, {"n2", 0.0}, {"n3", 0.5}}, y);
    CHECK(b.nnz() == 4);
    CHECK(*b.find("n1", "s1") == -1.0);
    CHECK(*b.find("n1", "s2") == -1.0);
    CHECK(*b.find("n3", "s2") == 0.5);
    CHECK(b.find("n2", "s1") == nullptr); // zero is background under plus-times
}

TEST_CASE("infer_relu computes max(Wy + b, 0) layer by layer") {
    Model m = hand_model();
    Array y0 = build({{"a", "s", 1.0}, {"b", "s", 0.5}}, PT);
    Array y = infer_relu(m, y0);
    // layer 0: n1 = 1 + 0.5 - 1 = 0.5, n2 = 0.5 - 1 < 0 (dropped)
    // layer 1: c1 = 0.5 - 1 < 0
    CHECK(y.empty());

    Array full = build({{"a", "s", 1.0}, {"b", "s", 1.0}, {"d", "s", 1.0}}, PT);
    Array yf = infer_relu(m, full);
    CHECK(yf.nnz() == 1);
    CHECK(*yf.find("c1", "s") == 1.0);
}

TEST_CASE("exactly-zero activations are elided") {
    Model m = hand_model();
    Array y0 = build({{"a", "s", 1.0}, {"b", "s", 1.0}}, PT); // d missing
    // layer 0: n1 = 1, n2 = 0 (elided); layer 1: c1 = 1 - 1 = 0 (elided)
    CHECK(infer_relu(m, y0).empty());
}

TEST_CASE("positive biases fire on every sample column") {
    Model m;
    Layer l0;
    l0.W = build({{"n1", "a", 1.0}, {"n3", "z", 0.5}}, PT);
    l0.bias = make_bias(l0.W, 1.0); // n1: 0, n3: 0.5 (positive)
    m.layers = {l0};
    m.input_keys = {"a", "z"};
    m.category_keys = {"n1", "n3"};
    REQUIRE(l0.bias.at("n3") == 0.5);

    Array y0 = build({{"a", "s1", 1.0}, {"a", "s2", 2.0}}, PT); // z never set
    Array y = infer_relu(m, y0);
    CHECK(*y.find("n1", "s1") == 1.0);
    CHECK(*y.find("n1", "s2") == 2.0);
    CHECK(*y.find("n3", "s1") == 0.5); // bias alone activates the neuron
    CHECK(*y.find("n3", "s2") == 0.5);
}

TEST_CASE("batch rows outside the input space are dropped and counted") {
    Model m = hand_model();
    Array y0 = build({{"a", "s", 1.0}, {"b", "s", 1.0}, {"d", "s", 1.0}, {"zz", "s", 9.0},
                      {"ww", "t", 5.0}},
                     PT);
    InferStats stats;
    Array y = infer_relu(m, y0, &stats);
    CHECK(stats.dropped_input_rows == 2);
    CHECK(*y.find("c1", "s") == 1.0);
    // column t only existed through the dropped row; it stays a sample column
    CHECK(y.row("c1")->count("t") == 0);
}

TEST_CASE("a dropped row's column remains a sample column for positive biases") {
    Model m;
    Layer l0;
    l0.W = build({{"n3", "z", 0.5}}, PT);
    l0.bias = make_bias(l0.W, 1.0);
    m.layers = {l0};
    m.input_keys = {"z"};
    m.category_keys = {"n3"};
    Array y0 = build({{"foreign", "t", 1.0}}, PT);
    InferStats stats;
    Array y = infer_relu(m, y0, &stats);
    CHECK(stats.dropped_input_rows == 1);
    CHECK(*y.find("n3", "t") == 0.5);
}

TEST_CASE("the semiring engine equals the relu engine on random real models") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 50; ++trial) {
        Model m = random_model(rng);
        Array y0 = random_batch(rng, m.input_keys);
        Array relu = infer_relu(m, y0);
        Array osc = infer_semiring(m, y0);
        REQUIRE(relu == osc);
    }
}

TEST_CASE("the sparse engine matches a dense recomputation on random models") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 50; ++trial) {
        Model m = random_model(rng);
        Array y0 = random_batch(rng, m.input_keys);
        REQUIRE(infer_relu(m, y0) == dense_forward(m, y0));
    }
}

TEST_CASE("collapse stacks layers into one block array") {
    Model m = hand_model();
    CollapsedModel cm = collapse(m);
    CHECK(cm.depth == 2);
    CHECK(cm.W.nnz() == 6);
    CHECK(*cm.W.find("n1", "a") == 1.0);
    CHECK(*cm.W.find("c1", "n2") == 1.0);
    CHECK(cm.bias.at("n1") == -1.0);
    CHECK(cm.bias.at("c1") == -1.0);

    Array y0 = exact_input(m);
    Array layered = infer_relu(m, y0);
    Array collapsed = select(infer_collapsed(cm, y0), m.category_keys, std::nullopt);
    CHECK(layered == collapsed);
}

TEST_CASE("collapse rejects reused neuron labels") {
    Model m = hand_model();
    // reuse a hidden label as a category
    Layer bad = m.layers[1];
    bad.W = build({{"n1", "n1", 1.0}}, PT);
    bad.bias = make_bias(bad.W, 1.0);
    Model m2;
    m2.layers = {m.layers[0], bad};
    m2.input_keys = m.input_keys;
    m2.category_keys = {"n1"};
    CHECK_THROWS_AS(collapse(m2), Error);

    // reuse an input label as a neuron
    Model m3 = hand_model();
    m3.layers[1].W = build({{"a", "n1", 1.0}}, PT);
    m3.layers[1].bias = make_bias(m3.layers[1].W, 1.0);
    CHECK_THROWS_AS(collapse(m3), Error);
}

TEST_CASE("flatten is the max-times product of the weight stack") {
    Model m = hand_model();
    Array w = flatten(m);
    CHECK(w.nnz() == 3);
    CHECK(*w.find("c1", "a") == 1.0);
    CHECK(*w.find("c1", "b") == 1.0); // two paths, max-times keeps 1
    CHECK(*w.find("c1", "d") == 1.0);

    // zero-norm of the plus-times product gives the same array
    Array pt = matmul(m.layers[1].W, m.layers[0].W, PT);
    CHECK(*pt.find("c1", "b") == 2.0); // path count before normalizing
    CHECK(zero_norm(pt) == w);

    CHECK_THROWS_AS(flatten(Model{}), Error);
}

TEST_CASE("exact_input transposes the flattened weights") {
    Model m = hand_model();
    Array y0 = exact_input(m);
    CHECK(y0.nnz() == 3);
    CHECK(*y0.find("a", "c1") == 1.0);
    CHECK(*y0.find("b", "c1") == 1.0);
    CHECK(*y0.find("d", "c1") == 1.0);
    CHECK(y0 == transpose(flatten(m)));
}

TEST_CASE("verify_exact accepts the hand model and pins the failure report") {
    CHECK(verify_exact(hand_model()).ok);

    // beta 0.5 attenuates twice: c1 = (0.5 + 0.5) - 1.5 < 0, clipped away
    ExactnessReport rep = verify_exact(hand_model(0.5));
    CHECK_FALSE(rep.ok);
    CHECK(rep.category == "c1");
    CHECK(rep.sample == "c1");
    CHECK(rep.expected == 1.0);
    CHECK(rep.got == 0.0);
    CHECK(rep.describe().find("c1") != std::string::npos);
}

TEST_CASE("infer_collapsed exposes the climbing wave when read early") {
    Model m = hand_model();
    CollapsedModel cm = collapse(m);
    CollapsedModel one_step = cm;
    one_step.depth = 1;
    Array y0 = exact_input(m);
    Array mid = infer_collapsed(one_step, y0);
    // after one iteration only the hidden layer has fired
    CHECK(*mid.find("n1", "c1") == 1.0);
    CHECK(*mid.find("n2", "c1") == 1.0);
    CHECK(mid.find("c1", "c1") == nullptr);
}
