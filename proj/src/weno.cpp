#include "nlsubdiv/weno.hpp"

#include "nlsubdiv/errors.hpp"
#include "nlsubdiv/lagrange.hpp"

#include <cmath>

namespace nlsd {

std::string to_string(WenoIndicator ind) {
    return ind == WenoIndicator::Compact ? "compact" : "full";
}

WenoIndicator parse_weno_indicator(const std::string& text) {
    if (text == "full" || text == "full_stencil") return WenoIndicator::FullStencil;
    if (text == "compact") return WenoIndicator::Compact;
    throw Error(ErrorKind::ParseError, "unknown WENO indicator '" + text + "'");
}

std::array<Rational, 3> optimal_weno_linear_weights() {
    // Stencil i covers offsets {-i, ..., 3-i}; unknowns d_0, d_1, d_2 over offsets -2..3.
    std::array<std::map<int, Rational>, 3> st;
    for (int i = 0; i < 3; ++i) st[i] = lagrange_midpoint_coeffs(4, -i).expand();
    const auto target = lagrange_midpoint_coeffs(6, -2).expand();
    auto get = [](const std::map<int, Rational>& m, int k) {
        auto it = m.find(k);
        return it == m.end() ? Rational(0) : it->second;
    };
    // Offset 3 is reached by stencil 0 only, offset -2 by stencil 2 only.
    std::array<Rational, 3> d;
    d[0] = get(target, 3) / get(st[0], 3);
    d[2] = get(target, -2) / get(st[2], -2);
    d[1] = Rational(1) - d[0] - d[2];
    for (int k = -2; k <= 3; ++k) {
        Rational v = 0;
        for (int i = 0; i < 3; ++i) v += d[i] * get(st[i], k);
        if (v != get(target, k)) {
            throw Error(ErrorKind::InvalidStencil, "WENO linear weights do not reproduce the 6-point rule");
        }
    }
    return d;
}

std::array<double, 3> weno_weights(std::span<const double, 5> df, double epsilon,
                                   const std::array<double, 3>& linear_weights,
                                   WenoIndicator indicator) {
    if (!(epsilon > 0.0)) throw Error(ErrorKind::InvalidArgument, "WENO epsilon must be positive");
    auto sq = [&](int k) { return df[static_cast<std::size_t>(k + 2)] * df[static_cast<std::size_t>(k + 2)]; };
    std::array<double, 3> b{};
    if (indicator == WenoIndicator::FullStencil) {
        for (int i = 0; i < 3; ++i) b[i] = sq(-i) + sq(1 - i) + sq(2 - i);
    } else {
        b[0] = sq(1) + sq(2);
        b[1] = sq(0) + sq(1);
        b[2] = sq(-1) + sq(0);
    }
    std::array<double, 3> a{};
    double total = 0.0;
    for (int i = 0; i < 3; ++i) {
        a[i] = linear_weights[i] / ((epsilon + b[i]) * (epsilon + b[i]));
        total += a[i];
    }
    std::array<double, 3> alpha{};
    for (int i = 0; i < 3; ++i) alpha[i] = a[i] / total;
    return alpha;
}

double weno6_odd_rule(std::span<const double, 6> f, const std::array<double, 3>& alpha) {
    auto D = [&](int m) {
        const auto c = static_cast<std::size_t>(m + 2);
        return f[c + 1] - 2.0 * f[c] + f[c - 1];
    };
    return (f[2] + f[3]) / 2.0 + alpha[0] / 16.0 * D(2) - (3.0 * alpha[0] + alpha[1]) / 16.0 * D(1) -
           (alpha[1] + 3.0 * alpha[2]) / 16.0 * D(0) + alpha[2] / 16.0 * D(-1);
}

double weno6_odd_rule_raw(std::span<const double, 6> f, const std::array<double, 3>& alpha) {
    const double right = (5.0 * f[2] + 15.0 * f[3] - 5.0 * f[4] + f[5]) / 16.0;
    const double central = (-f[1] + 9.0 * f[2] + 9.0 * f[3] - f[4]) / 16.0;
    const double left = (f[0] - 5.0 * f[1] + 15.0 * f[2] + 5.0 * f[3]) / 16.0;
    return alpha[0] * right + alpha[1] * central + alpha[2] * left;
}

}  // namespace nlsd
