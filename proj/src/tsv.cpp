#include "tsv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "error.hpp"

namespace aadnn {

namespace {

// Splits on single tabs; returns false if the field count differs.
template <size_t N>
bool split_fields(std::string_view line, std::string_view (&out)[N]) {
    size_t start = 0;
    for (size_t i = 0; i + 1 < N; ++i) {
        size_t tab = line.find('\t', start);
        if (tab == std::string_view::npos) return false;
        out[i] = line.substr(start, tab - start);
        start = tab + 1;
    }
    out[N - 1] = line.substr(start);
    return out[N - 1].find('\t') == std::string_view::npos;
}

std::string_view strip_cr(std::string_view line) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    return line;
}

} // namespace

std::string format_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view field) {
    double v = 0;
    auto res = std::from_chars(field.data(), field.data() + field.size(), v);
    if (res.ec != std::errc{} || res.ptr != field.data() + field.size())
        raise(Errc::parse_error, "bad numeric value '" + std::string(field) + "'");
    return v;
}

std::string format_triple(const Key& r, const Key& c, double v) {
    return r + '\t' + c + '\t' + format_double(v);
}

Entry parse_triple(std::string_view line) {
    std::string_view f[3];
    if (!split_fields(strip_cr(line), f))
        raise(Errc::parse_error, "expected 3 tab-separated fields in '" + std::string(line) + "'");
    return {Key(f[0]), Key(f[1]), parse_double(f[2])};
}

std::string format_pair(const Key& k, double v) { return k + '\t' + format_double(v); }

std::pair<Key, double> parse_pair(std::string_view line) {
    std::string_view f[2];
    if (!split_fields(strip_cr(line), f))
        raise(Errc::parse_error, "expected 2 tab-separated fields in '" + std::string(line) + "'");
    return {Key(f[0]), parse_double(f[1])};
}

void write_tsv(std::ostream& out, const Array& a) {
    for (const auto& [r, row] : a.rows())
        for (const auto& [c, v] : row) out << format_triple(r, c, v) << '\n';
}

std::string to_tsv(const Array& a) {
    std::ostringstream oss;
    write_tsv(oss, a);
    return oss.str();
}

Array read_tsv(std::istream& in, const Semiring& s) {
    Array::Rows rows;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        Entry e;
        try {
            e = parse_triple(line);
        } catch (const Error& err) {
            raise(Errc::parse_error, "line " + std::to_string(lineno) + ": " + err.what());
        }
        const auto& [r, c, v] = e;
        if (!rows[r].try_emplace(c, v).second)
            raise(Errc::parse_error,
                  "line " + std::to_string(lineno) + ": duplicate entry (" + r + ", " + c + ")");
    }
    for (auto& [r, row] : rows)
        for (auto it = row.begin(); it != row.end();)
            it = is_background(s, it->second) ? row.erase(it) : std::next(it);
    return Array::from_rows(std::move(rows));
}

Array read_tsv_string(std::string_view text, const Semiring& s) {
    std::istringstream iss{std::string(text)};
    return read_tsv(iss, s);
}

Array read_tsv_file(const std::string& path, const Semiring& s) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(Errc::io_error, "cannot open " + path);
    try {
        return read_tsv(in, s);
    } catch (const Error& err) {
        raise(err.code(), path + ": " + err.what());
    }
}

void write_tsv_file(const std::string& path, const Array& a) {
    std::ofstream out(path, std::ios::binary);
    if (!out) raise(Errc::io_error, "cannot open " + path + " for writing");
    write_tsv(out, a);
    if (!out) raise(Errc::io_error, "write failed for " + path);
}

} // namespace aadnn
