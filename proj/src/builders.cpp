#include "builders.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "error.hpp"
#include "tsv.hpp"

namespace aadnn {

namespace {

const Semiring& PT = semiring(SemiringId::plus_times);

// 1-based letter positions covered by a block.
using Span = std::set<int>;

std::string span_id(const Span& span) {
    std::string id = "f";
    for (int p : span) id += static_cast<char>('0' + p);
    return id;
}

Span parse_block_id(const std::string& id) {
    Span span;
    if (id.size() < 2 || id[0] != 'f')
        raise(Errc::parse_error, "bad block id '" + id + "' (expected f<positions>)");
    int prev = 0;
    for (size_t i = 1; i < id.size(); ++i) {
        char ch = id[i];
        if (ch < '1' || ch > '9')
            raise(Errc::parse_error, "bad block id '" + id + "' (positions are digits 1-9)");
        int p = ch - '0';
        if (p <= prev)
            raise(Errc::parse_error, "bad block id '" + id + "' (positions must ascend)");
        prev = p;
        span.insert(p);
    }
    return span;
}

struct Block {
    Span span;
    std::vector<Key> keys;
    // Selective construction: a word exhibiting each key, parallel to `keys`.
    std::vector<std::string> words;
};

// Validates one stage's groups against the available blocks and returns the
// member id lists ordered by span start. `consumed` collects used ids.
std::vector<std::vector<std::string>> check_stage(const std::map<std::string, Block>& available,
                                                  const std::vector<std::vector<std::string>>& groups,
                                                  std::set<std::string>& consumed) {
    if (groups.empty()) raise(Errc::invalid_argument, "plan stage has no groups");
    std::vector<std::vector<std::string>> ordered;
    for (const auto& group : groups) {
        if (group.size() < 2)
            raise(Errc::invalid_argument, "plan group needs at least 2 members");
        std::vector<std::string> members = group;
        std::set<std::string> unique;
        for (const std::string& id : members) {
            if (!available.count(id))
                raise(Errc::invalid_argument, "plan references unknown block '" + id + "'");
            if (!unique.insert(id).second)
                raise(Errc::invalid_argument, "plan group repeats member '" + id + "'");
            consumed.insert(id);
        }
        std::sort(members.begin(), members.end(), [&](const std::string& a, const std::string& b) {
            return *available.at(a).span.begin() < *available.at(b).span.begin();
        });
        ordered.push_back(std::move(members));
    }
    return ordered;
}

Span merged_span(const std::map<std::string, Block>& available,
                 const std::vector<std::string>& members) {
    Span span;
    for (const std::string& id : members)
        for (int p : available.at(id).span) span.insert(p);
    if (*span.rbegin() - *span.begin() + 1 != static_cast<int>(span.size()))
        raise(Errc::invalid_argument, "plan group spans non-adjacent positions");
    return span;
}

void check_all_consumed(const std::map<std::string, Block>& available,
                        const std::set<std::string>& consumed) {
    for (const auto& [id, block] : available)
        if (!consumed.count(id))
            raise(Errc::invalid_argument, "plan stage leaves block '" + id + "' unused");
}

void check_final(const std::map<std::string, Block>& available, int positions) {
    if (available.size() != 1)
        raise(Errc::invalid_argument, "plan must end with a single block, got " +
                                          std::to_string(available.size()));
    const Block& last = available.begin()->second;
    if (static_cast<int>(last.span.size()) != positions)
        raise(Errc::invalid_argument, "final block covers " + std::to_string(last.span.size()) +
                                          " of " + std::to_string(positions) + " positions");
}

std::vector<double> stage_betas(const std::vector<double>& betas, size_t stages) {
    if (betas.empty()) raise(Errc::invalid_argument, "at least one beta required");
    if (betas.size() == 1) return std::vector<double>(stages, betas[0]);
    if (betas.size() != stages)
        raise(Errc::length_mismatch, "got " + std::to_string(betas.size()) + " betas for " +
                                         std::to_string(stages) + " layers");
    return betas;
}

Model finish_model(std::vector<Layer> layers, const std::vector<double>& betas) {
    Model m;
    for (size_t i = 0; i < layers.size(); ++i) {
        layers[i].beta = betas[i];
        layers[i].bias = make_bias(layers[i].W, betas[i]);
    }
    m.layers = std::move(layers);
    m.input_keys = nonzero_cols(m.layers.front().W);
    m.category_keys = nonzero_rows(m.layers.back().W);
    return m;
}

// Key for the letters of `word` on `span`: position-prefixed pairs for
// partial spans, the bare word once the span covers every position.
std::string span_key(const std::string& word, const Span& span) {
    if (span.size() == word.size()) return word;
    std::string key;
    for (int p : span) {
        key += static_cast<char>('0' + p);
        key += word[static_cast<size_t>(p - 1)];
    }
    return key;
}

} // namespace

// Split preserving empty fields, including trailing ones (unlike getline).
static std::vector<std::string> split_exact(const std::string& text, char delim) {
    std::vector<std::string> out;
    size_t start = 0;
    for (size_t pos; (pos = text.find(delim, start)) != std::string::npos; start = pos + 1)
        out.push_back(text.substr(start, pos - start));
    out.push_back(text.substr(start));
    return out;
}

LayerPlan LayerPlan::parse(const std::string& text) {
    if (text.empty()) raise(Errc::parse_error, "empty plan");
    LayerPlan plan;
    for (const std::string& stage_text : split_exact(text, ';')) {
        if (stage_text.empty()) raise(Errc::parse_error, "empty plan stage in '" + text + "'");
        std::vector<std::vector<std::string>> groups;
        for (const std::string& group_text : split_exact(stage_text, '|')) {
            if (group_text.empty()) raise(Errc::parse_error, "empty plan group in '" + text + "'");
            std::vector<std::string> members;
            for (const std::string& id : split_exact(group_text, ',')) {
                parse_block_id(id); // syntax check; semantic checks happen per builder
                members.push_back(id);
            }
            groups.push_back(std::move(members));
        }
        plan.stages.push_back(std::move(groups));
    }
    return plan;
}

std::string LayerPlan::to_string() const {
    std::string out;
    for (size_t s = 0; s < stages.size(); ++s) {
        if (s) out += ';';
        for (size_t g = 0; g < stages[s].size(); ++g) {
            if (g) out += '|';
            for (size_t m = 0; m < stages[s][g].size(); ++m) {
                if (m) out += ',';
                out += stages[s][g][m];
            }
        }
    }
    return out;
}

std::vector<FeatureSet> make_letter_features(const std::vector<size_t>& sizes) {
    if (sizes.size() < 2 || sizes.size() > 9)
        raise(Errc::invalid_argument, "need between 2 and 9 feature sets");
    std::vector<FeatureSet> sets;
    for (size_t i = 0; i < sizes.size(); ++i) {
        if (sizes[i] == 0 || sizes[i] > 26)
            raise(Errc::invalid_argument, "feature set sizes must lie in 1..26");
        FeatureSet fs;
        fs.id = "f" + std::to_string(i + 1);
        for (size_t k = 0; k < sizes[i]; ++k)
            fs.keys.push_back(std::string(1, static_cast<char>('1' + i)) +
                              static_cast<char>('a' + k));
        sets.push_back(std::move(fs));
    }
    return sets;
}

Model build_combinatoric(const std::vector<FeatureSet>& sets, const LayerPlan& plan,
                         const std::vector<double>& betas) {
    if (sets.size() < 2) raise(Errc::invalid_argument, "need at least 2 feature sets");
    std::set<Key> all_keys;
    std::map<std::string, Block> available;
    for (size_t i = 0; i < sets.size(); ++i) {
        const FeatureSet& fs = sets[i];
        if (fs.keys.empty()) raise(Errc::invalid_argument, "feature set " + fs.id + " is empty");
        std::string expect = "f" + std::to_string(i + 1);
        if (fs.id != expect)
            raise(Errc::invalid_argument, "feature set " + std::to_string(i) + " must be named " +
                                              expect + ", got " + fs.id);
        for (const Key& k : fs.keys)
            if (k.empty() || !all_keys.insert(k).second)
                raise(Errc::invalid_argument, "feature key '" + k + "' empty or repeated");
        Block b;
        b.span = {static_cast<int>(i + 1)};
        b.keys = fs.keys;
        std::sort(b.keys.begin(), b.keys.end());
        available.emplace(fs.id, std::move(b));
    }

    std::vector<double> beta = stage_betas(betas, plan.stages.size());
    std::vector<Layer> layers;
    for (const auto& stage : plan.stages) {
        std::set<std::string> consumed;
        auto groups = check_stage(available, stage, consumed);
        check_all_consumed(available, consumed);
        std::map<std::string, Block> next;
        Array w;
        for (const auto& members : groups) {
            Span span = merged_span(available, members);
            // Term i: identity on member i, a ones column on every other
            // member; the Kronecker chain lays rows out in position order.
            Array contrib;
            for (size_t i = 0; i < members.size(); ++i) {
                Array term;
                for (size_t j = 0; j < members.size(); ++j) {
                    const Block& mb = available.at(members[j]);
                    Array factor = (i == j) ? identity(mb.keys) : ones(mb.keys, {""});
                    term = j == 0 ? std::move(factor) : kron(term, factor, PT);
                }
                contrib = ewise_add(contrib, term, PT);
            }
            Block b;
            b.span = span;
            b.keys = nonzero_rows(contrib);
            if (!next.emplace(span_id(span), std::move(b)).second)
                raise(Errc::invalid_argument, "plan builds block '" + span_id(span) + "' twice");
            w = ewise_add(w, contrib, PT);
        }
        Layer layer;
        layer.W = std::move(w);
        layers.push_back(std::move(layer));
        available = std::move(next);
    }
    check_final(available, static_cast<int>(sets.size()));
    return finish_model(std::move(layers), beta);
}

Model build_selective(const std::vector<std::string>& words, const LayerPlan& plan,
                      const std::vector<double>& betas) {
    if (words.empty()) raise(Errc::invalid_argument, "word list is empty");
    size_t n = words.front().size();
    if (n < 1 || n > 9)
        raise(Errc::invalid_argument, "word length must lie in 1..9");
    std::set<std::string> seen;
    for (const std::string& w : words) {
        if (w.size() != n)
            raise(Errc::invalid_argument, "word '" + w + "' differs in length from '" +
                                              words.front() + "'");
        for (char ch : w)
            if (ch < 'a' || ch > 'z')
                raise(Errc::invalid_argument, "word '" + w + "' is not lowercase ASCII");
        if (!seen.insert(w).second) raise(Errc::invalid_argument, "duplicate word '" + w + "'");
    }

    std::map<std::string, Block> available;
    for (int p = 1; p <= static_cast<int>(n); ++p) {
        Block b;
        b.span = {p};
        std::map<Key, std::string> keys; // key -> exhibiting word
        for (const std::string& w : words) keys.emplace(span_key(w, b.span), w);
        for (auto& [k, w] : keys) {
            b.keys.push_back(k);
            b.words.push_back(w);
        }
        available.emplace(span_id(b.span), std::move(b));
    }

    std::vector<double> beta = stage_betas(betas, plan.stages.size());
    std::vector<Layer> layers;
    for (const auto& stage : plan.stages) {
        std::set<std::string> consumed;
        auto groups = check_stage(available, stage, consumed);
        check_all_consumed(available, consumed);
        std::map<std::string, Block> next;
        Array w;
        for (const auto& members : groups) {
            Span span = merged_span(available, members);
            Block b;
            b.span = span;
            std::map<Key, std::string> keys;
            for (const std::string& word : words) keys.emplace(span_key(word, span), word);
            for (auto& [k, word] : keys) {
                b.keys.push_back(k);
                b.words.push_back(word);
            }
            // Wire an identity from each member: row = merged key, column =
            // the member's key for the same word.
            for (const std::string& id : members) {
                const Span& mspan = available.at(id).span;
                std::vector<Key> cols;
                for (const std::string& word : b.words) cols.push_back(span_key(word, mspan));
                w = ewise_add(w, identity_like(b.keys, cols), PT);
            }
            if (!next.emplace(span_id(span), std::move(b)).second)
                raise(Errc::invalid_argument, "plan builds block '" + span_id(span) + "' twice");
        }
        Layer layer;
        layer.W = zero_norm(w);
        layers.push_back(std::move(layer));
        available = std::move(next);
    }
    check_final(available, static_cast<int>(n));
    return finish_model(std::move(layers), beta);
}

std::vector<std::string> read_word_list(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(Errc::io_error, "cannot open " + path);
    std::vector<std::string> words;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty())
            raise(Errc::parse_error, path + ": line " + std::to_string(lineno) + " is empty");
        words.push_back(line);
    }
    return words;
}

ImageBuildResult build_from_images(const std::vector<IdxImage>& images,
                                   const std::vector<uint8_t>& labels, double threshold,
                                   size_t trim, double beta) {
    if (images.size() != labels.size())
        raise(Errc::length_mismatch, std::to_string(images.size()) + " images vs " +
                                         std::to_string(labels.size()) + " labels");
    if (images.empty()) raise(Errc::invalid_argument, "no images given");

    Array::Rows rows;
    std::map<std::set<Key>, Key> by_pixels;
    for (size_t idx = 0; idx < images.size(); ++idx) {
        const IdxImage& img = images[idx];
        char id[16];
        std::snprintf(id, sizeof id, "%u_%05zu", static_cast<unsigned>(labels[idx]), idx);
        Key category(id);
        if (img.rows != img.cols)
            raise(Errc::invalid_argument, "image " + category + " is not square (" +
                                              std::to_string(img.rows) + "x" +
                                              std::to_string(img.cols) + ")");
        if (img.rows < 2 * trim + 1)
            raise(Errc::invalid_argument, "image " + category + " vanishes after trimming");
        size_t side = img.rows - 2 * trim;
        if (side > 26)
            raise(Errc::invalid_argument, "image " + category + " is " + std::to_string(side) +
                                              "x" + std::to_string(side) +
                                              " after trimming (max 26x26)");
        std::set<Key> on;
        for (size_t i = trim; i < img.rows - trim; ++i)
            for (size_t j = trim; j < img.cols - trim; ++j)
                if (img.at(i, j) > threshold)
                    on.insert(std::string(1, static_cast<char>('a' + (i - trim))) +
                              static_cast<char>('a' + (j - trim)));
        if (on.empty())
            raise(Errc::invalid_argument, "image " + category + " has no pixels above threshold");
        auto [it, inserted] = by_pixels.emplace(on, category);
        if (!inserted)
            raise(Errc::invalid_argument,
                  "images " + it->second + " and " + category + " have identical on-pixel sets");
        for (const Key& px : on) rows[category][px] = 1.0;
    }

    Layer layer;
    layer.W = Array::from_rows(std::move(rows));
    layer.beta = beta;
    layer.bias = make_bias(layer.W, beta);
    Model m;
    m.layers.push_back(std::move(layer));
    m.input_keys = nonzero_cols(m.layers.front().W);
    m.category_keys = nonzero_rows(m.layers.back().W);
    Array y0 = exact_input(m);
    return {std::move(m), std::move(y0)};
}

} // namespace aadnn
