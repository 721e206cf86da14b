#include "perturb.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "error.hpp"
#include "tsv.hpp"

namespace aadnn {

namespace {

const Semiring& PT = semiring(SemiringId::plus_times);

std::map<Key, double> restrict_bias(const std::map<Key, double>& bias, const Array& w) {
    std::map<Key, double> out;
    for (const auto& [r, row] : w.rows()) {
        auto it = bias.find(r);
        if (it != bias.end()) out.emplace(r, it->second);
    }
    return out;
}

} // namespace

std::vector<Key> SubDnn::supporting_features() const { return nonzero_cols(layers.front()); }

SubDnn sub_dnn_category(const Model& m, const Key& c) {
    if (std::find(m.category_keys.begin(), m.category_keys.end(), c) == m.category_keys.end())
        raise(Errc::not_found, "unknown category '" + c + "'");
    size_t depth = m.depth();
    SubDnn sub;
    sub.category = c;
    sub.layers.resize(depth);
    sub.biases.resize(depth);
    sub.betas.resize(depth);
    std::vector<Key> rows = {c};
    for (size_t i = depth; i-- > 0;) {
        const Layer& layer = m.layers[i];
        sub.layers[i] = select(layer.W, rows, std::nullopt);
        sub.biases[i] = restrict_bias(layer.bias, sub.layers[i]);
        sub.betas[i] = layer.beta;
        rows = nonzero_cols(sub.layers[i]);
    }
    return sub;
}

SubDnn sub_dnn_feature(const SubDnn& sub, const Key& f) {
    SubDnn out;
    out.category = sub.category;
    out.betas = sub.betas;
    out.layers.resize(sub.layers.size());
    out.biases.resize(sub.layers.size());
    std::vector<Key> cols = {f};
    for (size_t i = 0; i < sub.layers.size(); ++i) {
        out.layers[i] = select(sub.layers[i], std::nullopt, cols);
        if (out.layers[i].empty())
            raise(Errc::not_found, i == 0
                                       ? "feature '" + f + "' does not support category '" +
                                             sub.category + "'"
                                       : "restriction broke at layer " + std::to_string(i));
        out.biases[i] = restrict_bias(sub.biases[i], out.layers[i]);
        cols = nonzero_rows(out.layers[i]);
    }
    return out;
}

Array perturbed_input(const SubDnn& sub, const Key& f, double r) {
    if (!(r >= 0.0 && r <= 2.0))
        raise(Errc::invalid_argument, "r must lie in [0,2], got " + format_double(r));
    std::vector<Key> features = sub.supporting_features();
    if (std::find(features.begin(), features.end(), f) == features.end())
        raise(Errc::not_found,
              "feature '" + f + "' does not support category '" + sub.category + "'");
    std::vector<Entry> entries;
    for (const Key& feat : features) entries.emplace_back(feat, sub.category, feat == f ? r : 1.0);
    return build(entries, PT);
}

double r_detect(const Model& m, const Key& c, const Key& f) {
    SubDnn sub = sub_dnn_category(m, c);
    for (size_t i = 0; i < sub.layers.size(); ++i) {
        for (const auto& [r, row] : sub.layers[i].rows()) {
            for (const auto& [col, v] : row)
                if (v != 1.0)
                    raise(Errc::unsupported_model,
                          "weight (" + r + ", " + col + ") = " + format_double(v) +
                              " is not 0/1; closed form needs an exact-solution model");
            if (!sub.biases[i].count(r))
                raise(Errc::unsupported_model, "row '" + r + "' lacks a bias entry");
        }
    }

    // Linear recursion y_{ℓ+1} = W_ℓ y_ℓ + b_ℓ expanded from the top: track
    // the category row of the partial product while accumulating each bias
    // propagated through the layers above it.
    std::map<Key, double> m_row = {{c, 1.0}};
    double bias_sum = 0.0;
    for (size_t i = sub.layers.size(); i-- > 0;) {
        std::map<Key, double> next;
        for (const auto& [k, mv] : m_row) {
            bias_sum += mv * sub.biases[i].at(k);
            if (const Array::Row* row = sub.layers[i].row(k))
                for (const auto& [col, wv] : *row) next[col] += mv * wv;
        }
        m_row = std::move(next);
    }

    auto it = m_row.find(f);
    if (it == m_row.end() || it->second == 0.0)
        raise(Errc::not_found, "feature '" + f + "' does not support category '" + c + "'");
    double total = 0.0;
    for (const auto& [k, v] : m_row) total += v;
    return 1.0 - (total + bias_sum) / it->second;
}

bool SweepReport::pd_is_unit_step() const {
    for (size_t i = 1; i < pd.size(); ++i)
        if (pd[i] < pd[i - 1]) return false;
    return true;
}

bool SweepReport::pfa_all_zero() const {
    return std::all_of(pfa.begin(), pfa.end(), [](int v) { return v == 0; });
}

SweepReport sweep(const Model& m, const Key& c, const Key& f, const std::vector<double>& grid) {
    if (grid.empty()) raise(Errc::invalid_argument, "empty sweep grid");
    for (size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] >= 0.0 && grid[i] <= 2.0))
            raise(Errc::invalid_argument, "grid point " + format_double(grid[i]) + " outside [0,2]");
        if (i && grid[i] <= grid[i - 1])
            raise(Errc::invalid_argument, "grid must be strictly increasing");
    }

    SubDnn sub = sub_dnn_category(m, c);
    SweepReport rep;
    rep.category = c;
    rep.feature = f;
    rep.rd_closed = r_detect(m, c, f);
    rep.r = grid;
    rep.pd.reserve(grid.size());
    rep.pfa.reserve(grid.size());
    for (double r : grid) {
        Array y = infer_relu(m, perturbed_input(sub, f, r));
        double yc = y.at_or(c, c, 0.0);
        bool beaten = false, false_alarm = false;
        for (const auto& [cat, row] : y.rows()) {
            if (cat == c) continue;
            auto it = row.find(c);
            if (it == row.end()) continue;
            if (it->second >= yc) {
                beaten = true;
                false_alarm = true; // stored values are strictly positive
            }
        }
        rep.pd.push_back(yc > 0.0 && !beaten ? 1 : 0);
        rep.pfa.push_back(false_alarm ? 1 : 0);
    }

    auto first = std::find(rep.pd.begin(), rep.pd.end(), 1);
    if (first == rep.pd.end()) {
        rep.step_above_range = true;
        rep.rd_empirical = std::numeric_limits<double>::infinity();
    } else if (first == rep.pd.begin()) {
        rep.step_below_range = true;
        double step = grid.size() > 1 ? grid[1] - grid[0] : 0.0;
        rep.rd_empirical = grid.front() - step / 2.0;
    } else {
        size_t i = static_cast<size_t>(first - rep.pd.begin());
        rep.rd_empirical = (grid[i - 1] + grid[i]) / 2.0;
    }
    return rep;
}

std::vector<double> make_grid(double start, double stop, double step) {
    if (!(step > 0.0)) raise(Errc::invalid_argument, "grid step must be positive");
    if (!(start < stop)) raise(Errc::invalid_argument, "grid start must precede stop");
    if (start < 0.0 || stop > 2.0) raise(Errc::invalid_argument, "grid must lie within [0,2]");
    auto n = static_cast<size_t>(std::llround((stop - start) / step));
    if (n < 1) n = 1;
    std::vector<double> grid(n + 1);
    for (size_t i = 0; i < n; ++i) grid[i] = start + static_cast<double>(i) * step;
    grid[n] = stop; // clamp the endpoint exactly
    return grid;
}

void write_sweep_tsv(std::ostream& out, const SweepReport& rep) {
    out << "r\tPd\tPfa\n";
    for (size_t i = 0; i < rep.r.size(); ++i)
        out << format_double(rep.r[i]) << '\t' << rep.pd[i] << '\t' << rep.pfa[i] << '\n';
    out << "# r_d_closed=" << format_double(rep.rd_closed) << '\n';
    out << "# r_d_empirical=" << format_double(rep.rd_empirical) << '\n';
}

void write_sweep_tsv_file(const std::string& path, const SweepReport& rep) {
    std::ofstream out(path, std::ios::binary);
    if (!out) raise(Errc::io_error, "cannot open " + path + " for writing");
    write_sweep_tsv(out, rep);
    if (!out) raise(Errc::io_error, "write failed for " + path);
}

} // namespace aadnn
