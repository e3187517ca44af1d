#pragma once

#include "nlsubdiv/scheme.hpp"

#include <optional>
#include <vector>

namespace nlsd {

/// Coarse samples plus per-stage details of one coordinate.
/// details[k] holds d^k_n = f^{k+1}_{2n+1} - S(f^k)_{2n+1}, indexed by n at the
/// coarse level of stage k. The floating-point subtraction is stored as
/// hi = fl(odd - pred) with the exact remainder lo = (odd - pred) - hi in
/// `residuals`, so reconstruction can restore the fine samples bitwise.
struct Channel {
    Sequence coarse;
    std::vector<Sequence> details;
    std::vector<std::vector<double>> residuals;
};

struct Pyramid {
    SchemeSpec scheme;
    int levels = 0;
    Channel f;
    std::optional<Channel> x;  // abscissae, spherical scheme only
    double x_period = 0.0;

    const Sequence& coarse() const { return f.coarse; }
    const std::vector<Sequence>& details() const { return f.details; }
};

/// Periodic: size and first index divisible by 2^levels. ConstantExtend and
/// Shrink: size = m 2^levels + 1 with first index divisible by 2^levels (under
/// Shrink, odd points whose stencil leaves the window are predicted by the
/// two-point midpoint). The grid level must be at least `levels`.
/// A scalar input to the spherical scheme is read as the graph (abscissa, f_n).
Pyramid decompose(const SchemeSpec& scheme, const Sequence& fine, int levels);
Pyramid decompose_points(const SchemeSpec& scheme, const PointPair2D& fine, int levels);

Sequence reconstruct(const Pyramid& pyramid);
PointPair2D reconstruct_points(const Pyramid& pyramid);

struct ThresholdResult {
    Pyramid pyramid;
    std::size_t zeroed = 0;
};

/// Zeroes every detail with |d| <= tol (in every channel).
ThresholdResult threshold(const Pyramid& pyramid, double tol);

struct StabilityReport {
    double ratio_s1 = 0.0;
    double ratio_s2 = 0.0;
    double ratio_s3 = 0.0;
    int trials = 0;
    double perturbation_scale = 0.0;
    std::uint64_t seed = 0;
    double max_fine_deviation = 0.0;    // ||f^L - ~f^L|| over coefficient perturbations
    double max_detail_deviation = 0.0;  // max_k ||d^k - ~d^k|| over data perturbations
};

/// Worst observed quotients of the three stability inequalities over random
/// perturbations of (a) the fine data and (b) a single pyramid coefficient.
/// The x channel of a spherical pyramid is never perturbed.
StabilityReport stability_probe(const SchemeSpec& scheme, const Sequence& fine, int levels,
                                double perturbation_scale, int trials, std::uint64_t seed);

}  // namespace nlsd
