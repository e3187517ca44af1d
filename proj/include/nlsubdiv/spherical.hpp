#pragma once

#include "nlsubdiv/sequence.hpp"

#include <functional>
#include <string>
#include <vector>

namespace nlsd {

/// Angle-reshaping profile h on [-pi, pi] with its derivative and sampled bounds.
struct HProfile {
    std::string name;
    std::function<double(double)> h;
    std::function<double(double)> dh;
    double derivative_min = 0.0;
    double derivative_max = 0.0;

    /// Build a profile and certify its derivative bounds on a grid of `samples` points.
    static HProfile certify(std::string name, std::function<double(double)> h,
                            std::function<double(double)> dh, int samples = 10000);
};

/// Odd, equal to x for |x| >= pi/2, slope 0.55 on |x| <= pi/7, cubic blend between.
HProfile reference_h();
HProfile zero_h();
HProfile identity_h();
HProfile h_by_name(const std::string& name);

/// Points (x_n, f_n). Under Periodic, x continues with drift: x_{n+N} = x_n + x_period.
struct PointPair2D {
    Sequence x;
    Sequence f;
    double x_period = 0.0;

    PointPair2D(Sequence x_, Sequence f_, double period = 0.0);

    double x_at(std::int64_t n) const;
    double f_at(std::int64_t n) const { return f.at_index(n); }

    /// Points (abscissa, f_n) on the dyadic grid; period defaults to the window span.
    static PointPair2D from_graph(const Sequence& f);
};

struct SphericalResult {
    PointPair2D points;
    std::vector<std::int64_t> degenerate_segments;  // n with r_n = 0
};

/// Offset of the odd point P_{2n+1} from the midpoint of P_n P_{n+1}, or
/// {0, 0} with `degenerate` set when P_n = P_{n+1}.
struct SphericalPerturbation {
    double dx = 0.0;
    double df = 0.0;
    bool degenerate = false;
};

SphericalPerturbation spherical_perturbation(const PointPair2D& p, std::int64_t n, const HProfile& h);

/// Throws NotAFunctionGraph unless x increases (coincident points allowed).
void check_function_graph(const PointPair2D& p);

SphericalResult spherical_refine(const PointPair2D& p, const HProfile& h);

}  // namespace nlsd
