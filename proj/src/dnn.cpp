#include "dnn.hpp"

#include <algorithm>
#include <set>

#include "error.hpp"
#include "tsv.hpp"

namespace aadnn {

namespace {

const Semiring& PT = semiring(SemiringId::plus_times);
const Semiring& MP = semiring(SemiringId::max_plus);
const Semiring& MT = semiring(SemiringId::max_times);

enum class EngineKind { relu, semiring };

double combine(EngineKind kind, double p, double b) {
    if (kind == EngineKind::relu) {
        double v = p + b;
        return v > 0.0 ? v : 0.0;
    }
    return MP.add(MP.mul(p, b), 0.0);
}

// One layer: pre-activations from the plus-times product, bias added per row,
// clamp at zero. Rows whose bias is positive are evaluated on every sample
// column (the product alone would drop them); rows with b ≤ 0 only need the
// stored product entries.
Array step(const Array& w, const std::map<Key, double>& bias, const Array& y,
           const std::vector<Key>& sample_keys, EngineKind kind) {
    Array p = matmul(w, y, PT);
    std::set<Key> row_keys;
    for (const auto& [r, row] : p.rows()) row_keys.insert(r);
    for (const auto& [r, b] : bias) row_keys.insert(r);

    Array::Rows out;
    for (const Key& r : row_keys) {
        auto bit = bias.find(r);
        double b = bit == bias.end() ? 0.0 : bit->second;
        const Array::Row* prow = p.row(r);
        if (b > 0.0) {
            for (const Key& c : sample_keys) {
                double v = combine(kind, prow ? p.at_or(r, c, 0.0) : 0.0, b);
                if (v > 0.0) out[r][c] = v;
            }
        } else if (prow) {
            for (const auto& [c, pv] : *prow) {
                double v = combine(kind, pv, b);
                if (v > 0.0) out[r][c] = v;
            }
        }
    }
    return Array::from_rows(std::move(out));
}

Array drop_foreign_rows(const Array& y0, const std::vector<Key>& input_keys, InferStats* stats) {
    std::set<Key> allowed(input_keys.begin(), input_keys.end());
    size_t dropped = 0;
    for (const auto& [r, row] : y0.rows())
        if (!allowed.count(r)) ++dropped;
    if (stats) stats->dropped_input_rows = dropped;
    if (dropped == 0) return y0;
    return select(y0, input_keys, std::nullopt);
}

Array infer(const Model& m, const Array& y0, EngineKind kind, InferStats* stats) {
    std::vector<Key> samples = nonzero_cols(y0);
    Array y = drop_foreign_rows(y0, m.input_keys, stats);
    for (const Layer& layer : m.layers) y = step(layer.W, layer.bias, y, samples, kind);
    return y;
}

} // namespace

std::map<Key, double> make_bias(const Array& w, double beta) {
    if (!(beta >= 0.0 && beta <= 1.0))
        raise(Errc::invalid_argument, "beta must lie in [0,1], got " + format_double(beta));
    std::map<Key, double> bias;
    for (const auto& [r, row] : w.rows()) {
        double sum = 0.0;
        for (const auto& [c, v] : row) sum += v;
        bias[r] = (sum != 0.0 ? beta : 0.0) - sum;
    }
    return bias;
}

Array replicate_bias(const std::map<Key, double>& bias, const Array& y) {
    std::vector<Key> samples = nonzero_cols(y);
    Array::Rows rows;
    for (const auto& [r, b] : bias)
        for (const Key& s : samples)
            if (!is_background(PT, b)) rows[r][s] = b;
    return Array::from_rows(std::move(rows));
}

Array infer_relu(const Model& m, const Array& y0, InferStats* stats) {
    return infer(m, y0, EngineKind::relu, stats);
}

Array infer_semiring(const Model& m, const Array& y0, InferStats* stats) {
    return infer(m, y0, EngineKind::semiring, stats);
}

CollapsedModel collapse(const Model& m) {
    std::set<Key> seen(m.input_keys.begin(), m.input_keys.end());
    CollapsedModel cm;
    cm.depth = m.depth();
    cm.input_keys = m.input_keys;
    cm.category_keys = m.category_keys;
    for (const Layer& layer : m.layers) {
        for (const Key& r : nonzero_rows(layer.W))
            if (!seen.insert(r).second)
                raise(Errc::structure_error, "neuron label '" + r + "' reused across layers");
        cm.W = ewise_add(cm.W, layer.W, PT);
        for (const auto& [r, b] : layer.bias) cm.bias[r] = b;
    }
    return cm;
}

Array infer_collapsed(const CollapsedModel& cm, const Array& y0, InferStats* stats) {
    std::vector<Key> samples = nonzero_cols(y0);
    Array y = drop_foreign_rows(y0, cm.input_keys, stats);
    for (size_t i = 0; i < cm.depth; ++i)
        y = step(cm.W, cm.bias, y, samples, EngineKind::relu);
    return y;
}

Array flatten(const Model& m) {
    if (m.layers.empty()) raise(Errc::invalid_argument, "flatten: model has no layers");
    Array acc = m.layers.back().W;
    for (size_t i = m.depth() - 1; i-- > 0;) acc = matmul(acc, m.layers[i].W, MT);
    return acc;
}

Array exact_input(const Model& m) { return transpose(flatten(m)); }

std::string ExactnessReport::describe() const {
    if (ok) return "exact";
    return "mismatch at (" + category + ", " + sample + "): expected " + format_double(expected) +
           ", got " + format_double(got);
}

ExactnessReport verify_exact(const Model& m) {
    Array got = infer_relu(m, exact_input(m));
    Array want = identity(m.category_keys);
    ExactnessReport rep;
    if (got == want) {
        rep.ok = true;
        return rep;
    }
    std::set<Key> rows;
    for (const auto& [r, row] : want.rows()) rows.insert(r);
    for (const auto& [r, row] : got.rows()) rows.insert(r);
    for (const Key& r : rows) {
        std::set<Key> cols;
        if (const Array::Row* row = want.row(r))
            for (const auto& [c, v] : *row) cols.insert(c);
        if (const Array::Row* row = got.row(r))
            for (const auto& [c, v] : *row) cols.insert(c);
        for (const Key& c : cols) {
            double w = want.at_or(r, c, 0.0);
            double g = got.at_or(r, c, 0.0);
            if (w != g) {
                rep.category = r;
                rep.sample = c;
                rep.expected = w;
                rep.got = g;
                return rep;
            }
        }
    }
    rep.ok = true; // unreachable given got != want
    return rep;
}

} // namespace aadnn
