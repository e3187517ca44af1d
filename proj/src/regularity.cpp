#include "nlsubdiv/regularity.hpp"

#include <cmath>

namespace nlsd {

RegularityReport holder_exponent(const SchemeSpec& scheme, const Sequence& f0, int levels, int fit_min,
                                 int fit_max) {
    if (levels < 6) throw Error(ErrorKind::InvalidArgument, "holder_exponent needs levels >= 6");
    if (fit_max < 0) fit_max = levels;
    if (fit_min < 0 || fit_max > levels || fit_max - fit_min + 1 < 4) {
        throw Error(ErrorKind::InvalidArgument, "fit window must hold at least 4 levels within [0, levels]");
    }
    RegularityReport rep;
    rep.scheme = scheme.name();
    rep.fit_levels = {fit_min, fit_max};
    Sequence cur = f0;
    for (int j = 0; j <= levels; ++j) {
        if (j > 0) cur = refine_once(scheme, cur);
        rep.diff_norms.push_back(sup_norm(first_diff(cur)));
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const int count = fit_max - fit_min + 1;
    for (int j = fit_min; j <= fit_max; ++j) {
        const double norm = rep.diff_norms[static_cast<std::size_t>(j)];
        if (norm == 0.0) {
            throw Error(ErrorKind::DegenerateDecay,
                        "differences vanish at level " + std::to_string(j) + "; no decay rate to fit");
        }
        const double y = std::log2(norm);
        sx += j;
        sy += y;
        sxx += static_cast<double>(j) * j;
        sxy += j * y;
    }
    rep.slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
    rep.intercept = (sy - rep.slope * sx) / count;
    rep.beta_estimate = -rep.slope;
    for (int j = fit_min; j <= fit_max; ++j) {
        const double y = std::log2(rep.diff_norms[static_cast<std::size_t>(j)]);
        rep.residual = std::max(rep.residual, std::abs(y - (rep.intercept + rep.slope * j)));
    }
    return rep;
}

double predicted_holder_exponent(double c) {
    if (!(c > 0.0)) throw Error(ErrorKind::InvalidArgument, "contraction factor must be positive");
    return -std::log2(c);
}

}  // namespace nlsd
