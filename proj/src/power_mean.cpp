#include "nlsubdiv/power_mean.hpp"

#include "nlsubdiv/errors.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace nlsd {

namespace {

bool opposite_or_zero(double x, double y) {
    return x == 0.0 || y == 0.0 || ((x > 0.0) != (y > 0.0));
}

void check_p(int p) {
    if (p < 1) throw Error(ErrorKind::InvalidArgument, "power_p needs p >= 1");
}

}  // namespace

double power_mean(int p, double x, double y) {
    check_p(p);
    if (opposite_or_zero(x, y)) return 0.0;
    const double ax = std::abs(x);
    const double ay = std::abs(y);
    const double q = std::abs(ax - ay) / (ax + ay);
    double sum = 0.0;
    double term = 1.0;
    for (int i = 0; i < p; ++i) {
        sum += term;
        term *= q;
    }
    const double s = x > 0.0 ? 1.0 : -1.0;
    return s * std::min(ax, ay) * sum;
}

double power_mean_direct(int p, double x, double y) {
    check_p(p);
    if (opposite_or_zero(x, y)) return 0.0;
    const double sx = x > 0.0 ? 1.0 : -1.0;
    const double sy = y > 0.0 ? 1.0 : -1.0;
    const double q = std::abs((x - y) / (x + y));
    return (sx + sy) / 2.0 * std::abs(x + y) / 2.0 * (1.0 - std::pow(q, p));
}

PowerMeanProperties check_power_mean_properties(int p, int pairs, std::uint64_t seed, double rel_tol) {
    check_p(p);
    if (pairs < 1) throw Error(ErrorKind::InvalidArgument, "property check needs pairs >= 1");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> mag(-12.0, 3.0);
    std::bernoulli_distribution neg(0.5);
    auto draw = [&] { return (neg(rng) ? -1.0 : 1.0) * std::pow(10.0, mag(rng)); };
    PowerMeanProperties r;
    r.p = p;
    r.pairs = pairs;
    for (int i = 0; i < pairs; ++i) {
        const double x = draw();
        const double y = i % 16 == 0 ? x : draw();
        const double v = power_mean(p, x, y);
        const double mn = std::min(std::abs(x), std::abs(y));
        const double mx = std::max(std::abs(x), std::abs(y));
        const double slack = rel_tol * mx;
        r.violations[0] += std::abs(v - power_mean(p, y, x)) > slack;
        r.violations[1] += x * y <= 0.0 && v != 0.0;
        r.violations[2] += std::abs(power_mean(p, -x, -y) + v) > slack;
        r.violations[3] += std::abs(v) > mx + slack;
        r.violations[4] += std::abs(v) > p * mn * (1.0 + rel_tol);
    }
    return r;
}

}  // namespace nlsd
