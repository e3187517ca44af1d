#include "nlsubdiv/spherical.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace nlsd {

namespace {

constexpr double pi = std::numbers::pi;

double ref_h_positive(double u) {
    const double a = 63.0 / (125.0 * pi);
    const double b = 3969.0 / (625.0 * pi * pi);
    if (u <= pi / 7.0) return 0.55 * u;
    if (u < pi / 2.0) {
        const double t = u - pi / 2.0;
        return u - a * t * t - b * t * t * (u - pi / 7.0);
    }
    return u;
}

double ref_dh_positive(double u) {
    const double a = 63.0 / (125.0 * pi);
    const double b = 3969.0 / (625.0 * pi * pi);
    if (u <= pi / 7.0) return 0.55;
    if (u < pi / 2.0) {
        const double t = u - pi / 2.0;
        return 1.0 - 2.0 * a * t - b * (2.0 * t * (u - pi / 7.0) + t * t);
    }
    return 1.0;
}

double slope_angle(double dy, double dx) {
    if (dx == 0.0 && dy == 0.0) return 0.0;
    return std::atan2(dy, dx);
}

}  // namespace

HProfile HProfile::certify(std::string name, std::function<double(double)> h,
                           std::function<double(double)> dh, int samples) {
    HProfile p{std::move(name), std::move(h), std::move(dh), 0.0, 0.0};
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (int i = 0; i < samples; ++i) {
        const double x = -pi + 2.0 * pi * i / (samples - 1);
        const double d = p.dh(x);
        lo = std::min(lo, d);
        hi = std::max(hi, d);
    }
    p.derivative_min = lo;
    p.derivative_max = hi;
    return p;
}

HProfile reference_h() {
    auto h = [](double x) {
        if (x >= 0.0) return ref_h_positive(x);
        return -ref_h_positive(-x);
    };
    auto dh = [](double x) { return ref_dh_positive(std::abs(x)); };
    return HProfile::certify("reference", h, dh);
}

HProfile zero_h() {
    return HProfile::certify("zero", [](double) { return 0.0; }, [](double) { return 0.0; });
}

HProfile identity_h() {
    return HProfile::certify("identity", [](double x) { return x; }, [](double) { return 1.0; });
}

HProfile h_by_name(const std::string& name) {
    if (name == "reference") return reference_h();
    if (name == "zero") return zero_h();
    if (name == "identity") return identity_h();
    throw Error(ErrorKind::ParseError, "unknown h profile '" + name + "'");
}

PointPair2D::PointPair2D(Sequence x_, Sequence f_, double period)
    : x(std::move(x_)), f(std::move(f_)), x_period(period) {
    if (x.size() != f.size() || x.first_index() != f.first_index() || x.level() != f.level() ||
        x.boundary() != f.boundary()) {
        throw Error(ErrorKind::InvalidArgument, "x and f of a point pair must share one window");
    }
    if (x.boundary() == Boundary::Periodic && !(x_period > 0.0)) {
        throw Error(ErrorKind::InvalidArgument, "periodic point pair needs a positive x period");
    }
}

double PointPair2D::x_at(std::int64_t n) const {
    if (x.contains(n) || x.boundary() != Boundary::Periodic) return x.at_index(n);
    const auto len = static_cast<std::int64_t>(x.size());
    std::int64_t k = n - x.first_index();
    std::int64_t wraps = k >= 0 ? k / len : -((-k + len - 1) / len);
    return x.at_index(n) + static_cast<double>(wraps) * x_period;
}

PointPair2D PointPair2D::from_graph(const Sequence& f) {
    std::vector<double> xs(f.size());
    for (std::size_t k = 0; k < f.size(); ++k) xs[k] = f.abscissa(k);
    const double period = std::ldexp(static_cast<double>(f.size()), -f.level());
    return PointPair2D(f.with_values(std::move(xs)), f, period);
}

void check_function_graph(const PointPair2D& p) {
    std::int64_t last = p.x.last_index();
    if (p.x.boundary() == Boundary::Periodic) ++last;
    for (std::int64_t n = p.x.first_index(); n < last; ++n) {
        const double dx = p.x_at(n + 1) - p.x_at(n);
        const double df = p.f_at(n + 1) - p.f_at(n);
        if (dx < 0.0 || (dx == 0.0 && df != 0.0)) {
            throw Error(ErrorKind::NotAFunctionGraph,
                        "x must increase along the point sequence (index " + std::to_string(n) + ")");
        }
    }
}

SphericalPerturbation spherical_perturbation(const PointPair2D& p, std::int64_t n, const HProfile& h) {
    const double dx = p.x_at(n + 1) - p.x_at(n);
    const double df = p.f_at(n + 1) - p.f_at(n);
    const double r = std::hypot(dx, df);
    if (r == 0.0) return {0.0, 0.0, true};
    const double theta_n = slope_angle(p.f_at(n + 1) - p.f_at(n - 1), p.x_at(n + 1) - p.x_at(n - 1));
    const double theta_n1 = slope_angle(p.f_at(n + 2) - p.f_at(n), p.x_at(n + 2) - p.x_at(n));
    const double gamma = slope_angle(df, dx);
    const double alpha = gamma - theta_n;
    const double beta = gamma - theta_n1;
    const double phi1 = theta_n + h.h(alpha);
    const double phi2 = theta_n1 + h.h(beta);
    return {r / 4.0 * (std::cos(phi1) - std::cos(phi2)), r / 4.0 * (std::sin(phi1) - std::sin(phi2)), false};
}

SphericalResult spherical_refine(const PointPair2D& p, const HProfile& h) {
    check_function_graph(p);
    const Boundary bc = p.x.boundary();
    std::int64_t n_lo = p.x.first_index();
    std::int64_t n_hi = bc == Boundary::Periodic ? p.x.last_index() : p.x.last_index() - 1;
    if (bc == Boundary::Shrink) {
        n_lo = p.x.first_index() + 1;
        n_hi = p.x.last_index() - 2;
    }
    if (n_hi < n_lo) {
        throw Error(ErrorKind::EmptyResult, "window too small for the spherical stencil under Shrink");
    }
    const std::int64_t e_lo = n_lo;
    const std::int64_t e_hi = bc == Boundary::Periodic ? n_hi : n_hi + 1;
    std::vector<double> xs;
    std::vector<double> fs;
    SphericalResult out{p, {}};
    for (std::int64_t n = e_lo; n <= e_hi; ++n) {
        xs.push_back(p.x_at(n));
        fs.push_back(p.f_at(n));
        if (n > n_hi) break;
        const auto pert = spherical_perturbation(p, n, h);
        if (pert.degenerate) out.degenerate_segments.push_back(n);
        xs.push_back((p.x_at(n) + p.x_at(n + 1)) / 2.0 + pert.dx);
        fs.push_back((p.f_at(n) + p.f_at(n + 1)) / 2.0 + pert.df);
    }
    const int level = p.x.level() + 1;
    out.points = PointPair2D(Sequence(std::move(xs), 2 * e_lo, level, bc),
                             Sequence(std::move(fs), 2 * e_lo, level, bc), p.x_period);
    return out;
}

}  // namespace nlsd
