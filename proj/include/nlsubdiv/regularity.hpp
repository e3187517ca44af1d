#pragma once

#include "nlsubdiv/scheme.hpp"

#include <utility>
#include <vector>

namespace nlsd {

struct RegularityReport {
    std::string scheme;
    double beta_estimate = 0.0;
    std::pair<int, int> fit_levels{0, 0};
    double residual = 0.0;
    double slope = 0.0;
    double intercept = 0.0;
    std::vector<double> diff_norms;  // ||d f^j|| for j = 0..levels
};

/// beta = -(least-squares slope of log2 ||d f^j|| over j in the fit window),
/// f^j = subdivide(scheme, f0, j). Window defaults to [4, levels].
RegularityReport holder_exponent(const SchemeSpec& scheme, const Sequence& f0, int levels, int fit_min = 4,
                                 int fit_max = -1);

/// Exponent implied by a contraction factor c < 1: -log2(c).
double predicted_holder_exponent(double c);

}  // namespace nlsd
