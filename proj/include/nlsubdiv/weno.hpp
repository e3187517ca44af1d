#pragma once

#include "nlsubdiv/rational.hpp"

#include <array>
#include <span>
#include <string>

namespace nlsd {

/// Smoothness indicator b_i for stencil i = {n-i, ..., n-i+3}.
enum class WenoIndicator {
    FullStencil,  // b_i = sum_{k=n-i}^{n-i+2} (df_k)^2, all three differences of the stencil
    Compact,      // b_0 = df_{n+1}^2 + df_{n+2}^2, b_1 = df_n^2 + df_{n+1}^2, b_2 = df_{n-1}^2 + df_n^2
};

std::string to_string(WenoIndicator ind);
WenoIndicator parse_weno_indicator(const std::string& text);

/// Linear weights d making the convex combination of the three 4-point stencils
/// reproduce the centered 6-point midpoint rule, solved exactly: (3/16, 10/16, 3/16).
std::array<Rational, 3> optimal_weno_linear_weights();

/// Nonlinear weights alpha from df_{n-2..n+2}.
std::array<double, 3> weno_weights(std::span<const double, 5> df, double epsilon,
                                   const std::array<double, 3>& linear_weights,
                                   WenoIndicator indicator = WenoIndicator::FullStencil);

/// Midpoint plus the four weighted D-terms, from f_{n-2..n+3}.
double weno6_odd_rule(std::span<const double, 6> f, const std::array<double, 3>& alpha);

/// Same value through the convex combination of the three raw 4-point stencils.
double weno6_odd_rule_raw(std::span<const double, 6> f, const std::array<double, 3>& alpha);

}  // namespace nlsd
