#include "model_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "error.hpp"
#include "tsv.hpp"

namespace aadnn {

namespace {

const Semiring& PT = semiring(SemiringId::plus_times);

class LineReader {
public:
    explicit LineReader(std::istream& in) : in_(in) {}

    bool next(std::string& line) {
        if (!std::getline(in_, line)) return false;
        ++lineno_;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return true;
    }

    [[noreturn]] void fail(const std::string& msg) const {
        raise(Errc::parse_error, "line " + std::to_string(lineno_) + ": " + msg);
    }

private:
    std::istream& in_;
    size_t lineno_ = 0;
};

size_t parse_count(LineReader& lr, std::string_view field, std::string_view what) {
    size_t v = 0;
    for (char ch : field) {
        if (ch < '0' || ch > '9') lr.fail("bad " + std::string(what) + " '" + std::string(field) + "'");
        v = v * 10 + static_cast<size_t>(ch - '0');
    }
    if (field.empty()) lr.fail("missing " + std::string(what));
    return v;
}

} // namespace

void write_model(std::ostream& out, const Model& m) {
    out << "dnn-model v1 L=" << m.depth() << '\n';
    for (size_t i = 0; i < m.depth(); ++i) {
        const Layer& layer = m.layers[i];
        out << "layer " << i << " beta=" << format_double(layer.beta) << '\n';
        out << "W\n";
        write_tsv(out, layer.W);
        out << "end\n";
        out << "b\n";
        for (const auto& [r, v] : layer.bias) out << format_pair(r, v) << '\n';
        out << "end\n";
    }
}

std::string model_to_string(const Model& m) {
    std::ostringstream oss;
    write_model(oss, m);
    return oss.str();
}

void write_model_file(const std::string& path, const Model& m) {
    std::ofstream out(path, std::ios::binary);
    if (!out) raise(Errc::io_error, "cannot open " + path + " for writing");
    write_model(out, m);
    if (!out) raise(Errc::io_error, "write failed for " + path);
}

Model read_model(std::istream& in) {
    LineReader lr(in);
    std::string line;
    if (!lr.next(line)) lr.fail("empty model file");
    constexpr std::string_view header = "dnn-model v1 L=";
    if (line.rfind(header, 0) != 0) lr.fail("expected 'dnn-model v1 L=<depth>' header");
    size_t depth = parse_count(lr, std::string_view(line).substr(header.size()), "depth");
    if (depth == 0) lr.fail("model depth must be at least 1");

    Model m;
    for (size_t i = 0; i < depth; ++i) {
        if (!lr.next(line)) lr.fail("missing 'layer " + std::to_string(i) + "' section");
        std::string expect = "layer " + std::to_string(i) + " beta=";
        if (line.rfind(expect, 0) != 0) lr.fail("expected '" + expect + "<beta>'");
        Layer layer;
        layer.beta = parse_double(std::string_view(line).substr(expect.size()));
        if (!(layer.beta >= 0.0 && layer.beta <= 1.0))
            lr.fail("beta " + format_double(layer.beta) + " outside [0, 1]");

        if (!lr.next(line) || line != "W") lr.fail("expected 'W' block");
        std::vector<Entry> entries;
        while (true) {
            if (!lr.next(line)) lr.fail("unterminated 'W' block");
            if (line == "end") break;
            entries.push_back(parse_triple(line));
        }
        layer.W = build(entries, PT);
        if (layer.W.nnz() != entries.size()) {
            // build() folds duplicates quietly; the file format forbids them.
            std::set<std::pair<Key, Key>> seen;
            for (const auto& [r, c, v] : entries)
                if (!seen.emplace(r, c).second)
                    lr.fail("duplicate weight entry (" + r + ", " + c + ")");
        }

        if (!lr.next(line) || line != "b") lr.fail("expected 'b' block");
        while (true) {
            if (!lr.next(line)) lr.fail("unterminated 'b' block");
            if (line == "end") break;
            auto [k, v] = parse_pair(line);
            if (!layer.bias.emplace(k, v).second) lr.fail("duplicate bias entry " + k);
        }
        for (const auto& [r, row] : layer.W.rows())
            if (!layer.bias.count(r)) lr.fail("row " + r + " has no bias entry");
        for (const auto& [r, v] : layer.bias)
            if (!layer.W.row(r)) lr.fail("bias entry " + r + " has no weight row");
        m.layers.push_back(std::move(layer));
    }
    while (lr.next(line))
        if (!line.empty()) lr.fail("trailing content after last layer");

    m.input_keys = nonzero_cols(m.layers.front().W);
    m.category_keys = nonzero_rows(m.layers.back().W);
    return m;
}

Model read_model_string(const std::string& text) {
    std::istringstream iss(text);
    return read_model(iss);
}

Model read_model_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(Errc::io_error, "cannot open " + path);
    try {
        return read_model(in);
    } catch (const Error& err) {
        raise(err.code(), path + ": " + err.what());
    }
}

} // namespace aadnn
