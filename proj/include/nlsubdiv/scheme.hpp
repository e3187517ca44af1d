#pragma once

#include "nlsubdiv/coeff_mask.hpp"
#include "nlsubdiv/sequence.hpp"
#include "nlsubdiv/spherical.hpp"
#include "nlsubdiv/weno.hpp"

#include <array>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace nlsd {

struct CenteredLagrange {
    int points = 4;
};

struct UncenteredLagrange {
    int points = 4;
};

struct Weno6 {
    double epsilon = 1e-6;
    std::array<double, 3> linear_weights{3.0 / 16.0, 10.0 / 16.0, 3.0 / 16.0};
    WenoIndicator indicator = WenoIndicator::FullStencil;
};

struct PowerP {
    int p = 2;
};

struct Spherical {
    HProfile h;
};

/// Odd rule of a linear scheme: weights on f_{n+leftmost}, ..., in both arithmetics.
struct LinearRule {
    int leftmost = 0;
    std::vector<Rational> exact;
    std::vector<double> weights;
};

/// Interpolatory scheme S_NL(f)_{2n} = f_n, S_NL(f)_{2n+1} = S(f)_{2n+1} + F(delta f)_{2n+1}.
class SchemeSpec {
public:
    using Family = std::variant<CenteredLagrange, UncenteredLagrange, Weno6, PowerP, Spherical>;

    explicit SchemeSpec(Family family);

    static SchemeSpec centered_lagrange(int points);
    static SchemeSpec uncentered_lagrange(int points);
    static SchemeSpec weno6(Weno6 params = {});
    static SchemeSpec power_p(int p);
    static SchemeSpec spherical(HProfile h);

    /// "centered:4", "uncentered:9", "weno6", "weno6:compact", "power_p:2", "spherical:reference".
    static SchemeSpec parse(const std::string& shorthand);

    const Family& family() const noexcept { return family_; }
    bool is_linear() const noexcept;
    bool is_spherical() const noexcept { return std::holds_alternative<Spherical>(family_); }
    std::string name() const;

    /// Offsets (relative to n) of the samples read by the odd rule at 2n+1.
    std::pair<int, int> odd_stencil() const;

    /// Linear odd rule; throws InvalidArgument for nonlinear families.
    const LinearRule& linear_rule() const;

    /// The odd rule as an exact mask over raw samples (linear families only).
    CoeffMask linear_mask() const;

private:
    Family family_;
    std::shared_ptr<const LinearRule> rule_;
};

/// Value S(f)_{2n+1} for scalar families, reading f through the boundary policy.
double odd_value(const SchemeSpec& scheme, const Sequence& f, std::int64_t n);

/// One refinement step. Periodic: 2N samples from 2*first. ConstantExtend: 2N-1.
/// Shrink: only odd points whose stencil fits, with the evens around them.
Sequence refine_once(const SchemeSpec& scheme, const Sequence& f);
Sequence subdivide(const SchemeSpec& scheme, const Sequence& f, int levels);

/// Exact refinement for linear families.
ExactSequence refine_once(const SchemeSpec& scheme, const ExactSequence& f);
ExactSequence subdivide(const SchemeSpec& scheme, const ExactSequence& f, int levels);

/// Point-pair refinement (spherical family only); degenerate segments are appended to `warnings`.
PointPair2D refine_points(const SchemeSpec& scheme, const PointPair2D& p,
                          std::vector<std::int64_t>* warnings = nullptr);
PointPair2D subdivide_points(const SchemeSpec& scheme, const PointPair2D& p, int levels);

/// Predictions at every odd position of a decomposition stage: n = first..last
/// (Periodic) or first..last-1 (otherwise). Under Shrink, odd points whose
/// stencil leaves the window fall back to the two-point midpoint.
std::vector<double> predict_odd(const SchemeSpec& scheme, const Sequence& coarse);
std::pair<std::vector<double>, std::vector<double>> predict_odd_points(const SchemeSpec& scheme,
                                                                       const PointPair2D& coarse);

}  // namespace nlsd
