#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "dnn.hpp"

namespace aadnn {

// The layers restricted to what can influence one category (and optionally to
// what one input feature can influence).
struct SubDnn {
    Key category;
    std::vector<Array> layers;                  // restricted W_0 .. W_{L-1}
    std::vector<std::map<Key, double>> biases;  // restricted to each layer's rows
    std::vector<double> betas;

    // Input features that reach the category.
    std::vector<Key> supporting_features() const;
};

// Backward restriction from category row c.
SubDnn sub_dnn_category(const Model& m, const Key& c);

// Further forward restriction to the paths leaving feature f.
SubDnn sub_dnn_feature(const SubDnn& sub, const Key& f);

// Single-column batch: 1 on every supporting feature of the category, value r
// on feature f. The column is keyed by the category.
Array perturbed_input(const SubDnn& sub, const Key& f, double r);

// Closed-form detection threshold: the category output under the linear
// sub-DNN recursion is (path count to f)·(r − r_d), so detection holds for
// r > r_d. Requires 0/1 weights with full bias coverage on the sub-DNN.
double r_detect(const Model& m, const Key& c, const Key& f);

struct SweepReport {
    Key category, feature;
    std::vector<double> r;
    std::vector<int> pd, pfa; // 0/1 per grid point
    double rd_closed = 0;
    double rd_empirical = 0;
    bool step_below_range = false; // detection already at the first grid point
    bool step_above_range = false; // no detection anywhere on the grid

    bool pd_is_unit_step() const;
    bool pfa_all_zero() const;
};

// Full-model inference on the perturbed input at every grid point. Detection:
// the category's output is positive and a strict maximum. False alarm: some
// other category is positive and at least as large.
SweepReport sweep(const Model& m, const Key& c, const Key& f, const std::vector<double>& grid);

// Uniform grid from start to stop (endpoint clamped exactly to stop).
std::vector<double> make_grid(double start, double stop, double step);

// TSV with an r/Pd/Pfa header and '# r_d_...' footer lines.
void write_sweep_tsv(std::ostream& out, const SweepReport& rep);
void write_sweep_tsv_file(const std::string& path, const SweepReport& rep);

} // namespace aadnn
