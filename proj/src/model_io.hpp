#pragma once

#include <iosfwd>
#include <string>

#include "dnn.hpp"

namespace aadnn {

// Text format:
//   dnn-model v1 L=<depth>
//   layer <i> beta=<beta>
//   W
//   <row>\t<col>\t<value>   (triples, sorted)
//   end
//   b
//   <row>\t<value>          (pairs, sorted; zeros kept)
//   end
//   ... next layer ...
void write_model(std::ostream& out, const Model& m);
std::string model_to_string(const Model& m);
void write_model_file(const std::string& path, const Model& m);

Model read_model(std::istream& in);
Model read_model_string(const std::string& text);
Model read_model_file(const std::string& path);

} // namespace aadnn
