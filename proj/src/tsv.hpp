#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "array.hpp"

namespace aadnn {

// Shortest decimal form that round-trips through parse_double (std::to_chars).
std::string format_double(double v);

// Strict parse of a whole field; accepts "inf"/"-inf"/"nan" like to_chars emits.
double parse_double(std::string_view field);

// One "row<TAB>col<TAB>value" line.
std::string format_triple(const Key& r, const Key& c, double v);
Entry parse_triple(std::string_view line);

// One "key<TAB>value" line.
std::string format_pair(const Key& k, double v);
std::pair<Key, double> parse_pair(std::string_view line);

// Triples in row-major key order, one per line, trailing newline.
void write_tsv(std::ostream& out, const Array& a);
std::string to_tsv(const Array& a);

// Strict reader: every line must be a well-formed triple, coordinates must be
// unique. Values equal to the semiring's add-identity are dropped quietly.
Array read_tsv(std::istream& in, const Semiring& s);
Array read_tsv_string(std::string_view text, const Semiring& s);

Array read_tsv_file(const std::string& path, const Semiring& s);
void write_tsv_file(const std::string& path, const Array& a);

} // namespace aadnn
