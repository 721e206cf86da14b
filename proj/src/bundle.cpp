#include "bundle.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "error.hpp"
#include "model_io.hpp"
#include "tsv.hpp"
#include "util.hpp"

namespace fs = std::filesystem;

namespace aadnn {

namespace {

const Semiring& PT = semiring(SemiringId::plus_times);

constexpr const char* kFormat = "bundle v1";
const char* const kFiles[] = {"model.txt", "y0.tsv", "yl.tsv"};

std::string meta_text(const TestVectorBundle& b, const std::map<std::string, std::string>& files) {
    std::ostringstream oss;
    oss << "format=" << kFormat << '\n';
    oss << "builder=" << b.builder << '\n';
    oss << "parameters=" << b.parameters << '\n';
    oss << "precision=" << b.precision.describe() << '\n';
    for (const auto& [name, content] : files)
        oss << "checksum." << name << '=' << to_hex16(fnv1a64(content)) << '\n';
    return oss.str();
}

std::map<std::string, std::string> parse_meta(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream iss(text);
    std::string line;
    size_t lineno = 0;
    while (std::getline(iss, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        size_t eq = line.find('=');
        if (eq == std::string::npos)
            raise(Errc::parse_error, "meta.txt line " + std::to_string(lineno) + ": missing '='");
        if (!kv.emplace(line.substr(0, eq), line.substr(eq + 1)).second)
            raise(Errc::parse_error,
                  "meta.txt line " + std::to_string(lineno) + ": duplicate key " + line.substr(0, eq));
    }
    return kv;
}

// Strict per-column argmax; nullopt on an empty column or a tie.
std::map<Key, std::optional<Key>> column_argmax(const Array& a) {
    std::map<Key, std::optional<Key>> best;
    std::map<Key, double> best_val;
    for (const auto& [r, row] : a.rows())
        for (const auto& [c, v] : row) {
            auto it = best.find(c);
            if (it == best.end()) {
                best[c] = r;
                best_val[c] = v;
            } else if (v > best_val[c]) {
                it->second = r;
                best_val[c] = v;
            } else if (v == best_val[c]) {
                it->second = std::nullopt;
            }
        }
    return best;
}

} // namespace

TestVectorBundle make_bundle(const Model& m, const Array& y0, QuantSpec precision,
                             std::string builder, std::string parameters) {
    TestVectorBundle b;
    b.model = m;
    b.y0 = y0;
    b.expected_yl = quantize(infer_relu(m, y0), precision);
    b.precision = precision;
    b.builder = std::move(builder);
    b.parameters = std::move(parameters);
    return b;
}

void write_bundle(const TestVectorBundle& b, const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) raise(Errc::io_error, "cannot create directory " + dir + ": " + ec.message());
    std::map<std::string, std::string> files;
    files["model.txt"] = model_to_string(b.model);
    files["y0.tsv"] = to_tsv(b.y0);
    files["yl.tsv"] = to_tsv(b.expected_yl);
    for (const auto& [name, content] : files) write_file((fs::path(dir) / name).string(), content);
    write_file((fs::path(dir) / "meta.txt").string(), meta_text(b, files));
}

TestVectorBundle read_bundle(const std::string& dir) {
    auto kv = parse_meta(read_file((fs::path(dir) / "meta.txt").string()));
    auto format = kv.find("format");
    if (format == kv.end() || format->second != kFormat)
        raise(Errc::integrity_error,
              dir + ": format version mismatch (expected '" + std::string(kFormat) + "')");

    std::map<std::string, std::string> files;
    for (const char* name : kFiles) {
        std::string content = read_file((fs::path(dir) / name).string());
        auto sum = kv.find(std::string("checksum.") + name);
        if (sum == kv.end())
            raise(Errc::integrity_error, dir + ": meta.txt lacks a checksum for " + name);
        if (sum->second != to_hex16(fnv1a64(content)))
            raise(Errc::integrity_error, dir + ": checksum mismatch for " + name);
        files[name] = std::move(content);
    }

    TestVectorBundle b;
    b.model = read_model_string(files["model.txt"]);
    b.y0 = read_tsv_string(files["y0.tsv"], PT);
    b.expected_yl = read_tsv_string(files["yl.tsv"], PT);
    auto precision = kv.find("precision");
    if (precision == kv.end()) raise(Errc::integrity_error, dir + ": meta.txt lacks precision");
    b.precision = QuantSpec::parse(precision->second);
    if (auto it = kv.find("builder"); it != kv.end()) b.builder = it->second;
    if (auto it = kv.find("parameters"); it != kv.end()) b.parameters = it->second;
    return b;
}

BundleVerifyReport verify_bundle(const TestVectorBundle& b, const Array& candidate_yl) {
    Array got = quantize(candidate_yl, b.precision);
    const Array& want = b.expected_yl;

    BundleVerifyReport rep;
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
            if (w != g) rep.mismatches.push_back({r, c, w, g});
        }
    }

    auto want_best = column_argmax(want);
    auto got_best = column_argmax(got);
    std::set<Key> samples;
    for (const Key& c : nonzero_cols(b.y0)) samples.insert(c);
    for (const auto& [c, v] : want_best) samples.insert(c);
    for (const auto& [c, v] : got_best) samples.insert(c);
    rep.sample_count = samples.size();
    auto best_of = [](std::map<Key, std::optional<Key>>& m, const Key& c) {
        auto it = m.find(c);
        return it == m.end() ? std::optional<Key>{} : it->second;
    };
    for (const Key& c : samples)
        if (best_of(want_best, c) == best_of(got_best, c)) ++rep.argmax_agreements;
    return rep;
}

} // namespace aadnn
