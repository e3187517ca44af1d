#include "nlsubdiv/scheme.hpp"

#include "nlsubdiv/lagrange.hpp"
#include "nlsubdiv/power_mean.hpp"

#include <cmath>

namespace nlsd {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

std::shared_ptr<const LinearRule> make_rule(const CoeffMask& mask) {
    auto rule = std::make_shared<LinearRule>();
    const auto w = mask.expand();
    rule->leftmost = w.begin()->first;
    for (int k = rule->leftmost; k <= w.rbegin()->first; ++k) {
        auto it = w.find(k);
        rule->exact.push_back(it == w.end() ? Rational(0) : it->second);
        rule->weights.push_back(to_double(rule->exact.back()));
    }
    return rule;
}

int parse_int(const std::string& text, const std::string& what) {
    try {
        std::size_t used = 0;
        const int v = std::stoi(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw Error(ErrorKind::ParseError, "bad " + what + " '" + text + "'");
    }
}

struct OddWindow {
    std::int64_t lo;
    std::int64_t hi;
};

OddWindow odd_window(const SchemeSpec& scheme, Boundary bc, std::int64_t first, std::int64_t last) {
    if (bc == Boundary::Periodic) return {first, last};
    if (bc == Boundary::ConstantExtend) return {first, last - 1};
    const auto [a, b] = scheme.odd_stencil();
    return {std::max(first, first - a), std::min(last - 1, last - b)};
}

template <class T, class Odd>
BasicSequence<T> refine_generic(const SchemeSpec& scheme, const BasicSequence<T>& f, Odd odd) {
    const auto w = odd_window(scheme, f.boundary(), f.first_index(), f.last_index());
    if (w.hi < w.lo) {
        throw Error(ErrorKind::EmptyResult, scheme.name() + ": no odd point has its stencil inside a window of " +
                                                std::to_string(f.size()) + " samples under Shrink");
    }
    const bool periodic = f.boundary() == Boundary::Periodic;
    std::vector<T> out;
    out.reserve(static_cast<std::size_t>(2 * (w.hi - w.lo) + 3));
    for (std::int64_t n = w.lo; n <= w.hi; ++n) {
        out.push_back(f.at_index(n));
        out.push_back(odd(n));
    }
    if (!periodic) out.push_back(f.at_index(w.hi + 1));
    return BasicSequence<T>(std::move(out), 2 * w.lo, f.level() + 1, f.boundary());
}

double weno_value(const Weno6& w, const Sequence& f, std::int64_t n) {
    std::array<double, 6> fw{};
    for (int i = 0; i < 6; ++i) fw[static_cast<std::size_t>(i)] = f.at_index(n - 2 + i);
    std::array<double, 5> df{};
    for (int i = 0; i < 5; ++i) df[static_cast<std::size_t>(i)] = fw[i + 1] - fw[i];
    const auto alpha = weno_weights(df, w.epsilon, w.linear_weights, w.indicator);
    return weno6_odd_rule(fw, alpha);
}

double power_value(const PowerP& pp, const Sequence& f, std::int64_t n) {
    const double fm = f.at_index(n - 1);
    const double f0 = f.at_index(n);
    const double f1 = f.at_index(n + 1);
    const double f2 = f.at_index(n + 2);
    const double d0 = f1 - 2.0 * f0 + fm;
    const double d1 = f2 - 2.0 * f1 + f0;
    return (f0 + f1) / 2.0 - power_mean(pp.p, d0, d1) / 8.0;
}

}  // namespace

SchemeSpec::SchemeSpec(Family family) : family_(std::move(family)) {
    std::visit(overloaded{
                   [&](const CenteredLagrange& c) {
                       if (c.points < 2 || c.points % 2 != 0 || c.points > 64) {
                           throw Error(ErrorKind::InvalidStencil,
                                       "centered Lagrange needs an even number of points in [2, 64]");
                       }
                       rule_ = make_rule(lagrange_midpoint_coeffs(c.points, 1 - c.points / 2));
                   },
                   [&](const UncenteredLagrange& u) {
                       if (u.points < 3 || u.points > 64) {
                           throw Error(ErrorKind::InvalidStencil, "uncentered Lagrange needs 3..64 points");
                       }
                       rule_ = make_rule(lagrange_midpoint_coeffs(u.points, 0));
                   },
                   [&](const Weno6& w) {
                       if (!(w.epsilon > 0.0) || !std::isfinite(w.epsilon)) {
                           throw Error(ErrorKind::InvalidArgument, "WENO epsilon must be positive");
                       }
                       double sum = 0.0;
                       for (double d : w.linear_weights) {
                           if (!(d >= 0.0)) throw Error(ErrorKind::InvalidArgument, "WENO linear weights must be nonnegative");
                           sum += d;
                       }
                       if (std::abs(sum - 1.0) > 1e-12) {
                           throw Error(ErrorKind::InvalidArgument, "WENO linear weights must sum to 1");
                       }
                   },
                   [&](const PowerP& p) {
                       if (p.p < 1 || p.p > 64) throw Error(ErrorKind::InvalidArgument, "power_p needs 1 <= p <= 64");
                   },
                   [&](const Spherical& s) {
                       if (!s.h.h) throw Error(ErrorKind::InvalidArgument, "spherical scheme needs an h profile");
                   },
               },
               family_);
}

SchemeSpec SchemeSpec::centered_lagrange(int points) { return SchemeSpec(CenteredLagrange{points}); }
SchemeSpec SchemeSpec::uncentered_lagrange(int points) { return SchemeSpec(UncenteredLagrange{points}); }
SchemeSpec SchemeSpec::weno6(Weno6 params) { return SchemeSpec(params); }
SchemeSpec SchemeSpec::power_p(int p) { return SchemeSpec(PowerP{p}); }
SchemeSpec SchemeSpec::spherical(HProfile h) { return SchemeSpec(Spherical{std::move(h)}); }

SchemeSpec SchemeSpec::parse(const std::string& shorthand) {
    const auto colon = shorthand.find(':');
    const std::string head = shorthand.substr(0, colon);
    const std::string arg = colon == std::string::npos ? "" : shorthand.substr(colon + 1);
    if (head == "centered" || head == "centered_lagrange") {
        return centered_lagrange(arg.empty() ? 4 : parse_int(arg, "point count"));
    }
    if (head == "uncentered" || head == "uncentered_lagrange") {
        return uncentered_lagrange(arg.empty() ? 4 : parse_int(arg, "point count"));
    }
    if (head == "weno6" || head == "weno") {
        Weno6 w;
        if (!arg.empty()) w.indicator = parse_weno_indicator(arg);
        return weno6(w);
    }
    if (head == "power_p" || head == "powerp" || head == "power") {
        return power_p(arg.empty() ? 2 : parse_int(arg, "power exponent"));
    }
    if (head == "spherical") return spherical(h_by_name(arg.empty() ? "reference" : arg));
    throw Error(ErrorKind::ParseError, "unknown scheme '" + shorthand + "'");
}

bool SchemeSpec::is_linear() const noexcept {
    return std::holds_alternative<CenteredLagrange>(family_) || std::holds_alternative<UncenteredLagrange>(family_);
}

std::string SchemeSpec::name() const {
    return std::visit(overloaded{
                          [](const CenteredLagrange& c) { return "centered:" + std::to_string(c.points); },
                          [](const UncenteredLagrange& u) { return "uncentered:" + std::to_string(u.points); },
                          [](const Weno6& w) {
                              return std::string(w.indicator == WenoIndicator::Compact ? "weno6:compact" : "weno6");
                          },
                          [](const PowerP& p) { return "power_p:" + std::to_string(p.p); },
                          [](const Spherical& s) { return "spherical:" + s.h.name; },
                      },
                      family_);
}

std::pair<int, int> SchemeSpec::odd_stencil() const {
    if (rule_) return {rule_->leftmost, rule_->leftmost + static_cast<int>(rule_->weights.size()) - 1};
    if (std::holds_alternative<Weno6>(family_)) return {-2, 3};
    return {-1, 2};
}

const LinearRule& SchemeSpec::linear_rule() const {
    if (!rule_) throw Error(ErrorKind::InvalidArgument, name() + " is not a linear scheme");
    return *rule_;
}

CoeffMask SchemeSpec::linear_mask() const {
    const auto& r = linear_rule();
    std::map<int, Rational> w;
    for (std::size_t i = 0; i < r.exact.size(); ++i) w[r.leftmost + static_cast<int>(i)] = r.exact[i];
    return CoeffMask::from_samples(w);
}

double odd_value(const SchemeSpec& scheme, const Sequence& f, std::int64_t n) {
    return std::visit(overloaded{
                          [&](const Weno6& w) { return weno_value(w, f, n); },
                          [&](const PowerP& p) { return power_value(p, f, n); },
                          [&](const Spherical&) -> double {
                              throw Error(ErrorKind::InvalidArgument,
                                          "the spherical scheme refines point pairs, not scalar sequences");
                          },
                          [&](const auto&) {
                              const auto& r = scheme.linear_rule();
                              double acc = 0.0;
                              for (std::size_t i = 0; i < r.weights.size(); ++i) {
                                  acc += r.weights[i] * f.at_index(n + r.leftmost + static_cast<std::int64_t>(i));
                              }
                              return acc;
                          },
                      },
                      scheme.family());
}

Sequence refine_once(const SchemeSpec& scheme, const Sequence& f) {
    if (scheme.is_spherical()) {
        throw Error(ErrorKind::InvalidArgument, "the spherical scheme refines point pairs, not scalar sequences");
    }
    return refine_generic(scheme, f, [&](std::int64_t n) { return odd_value(scheme, f, n); });
}

Sequence subdivide(const SchemeSpec& scheme, const Sequence& f, int levels) {
    if (levels < 0) throw Error(ErrorKind::InvalidArgument, "levels must be non-negative");
    Sequence cur = f;
    for (int k = 0; k < levels; ++k) cur = refine_once(scheme, cur);
    return cur;
}

ExactSequence refine_once(const SchemeSpec& scheme, const ExactSequence& f) {
    const auto& r = scheme.linear_rule();
    return refine_generic(scheme, f, [&](std::int64_t n) {
        Rational acc = 0;
        for (std::size_t i = 0; i < r.exact.size(); ++i) {
            acc += r.exact[i] * f.at_index(n + r.leftmost + static_cast<std::int64_t>(i));
        }
        return acc;
    });
}

ExactSequence subdivide(const SchemeSpec& scheme, const ExactSequence& f, int levels) {
    if (levels < 0) throw Error(ErrorKind::InvalidArgument, "levels must be non-negative");
    ExactSequence cur = f;
    for (int k = 0; k < levels; ++k) cur = refine_once(scheme, cur);
    return cur;
}

PointPair2D refine_points(const SchemeSpec& scheme, const PointPair2D& p, std::vector<std::int64_t>* warnings) {
    const auto* sph = std::get_if<Spherical>(&scheme.family());
    if (!sph) throw Error(ErrorKind::InvalidArgument, scheme.name() + " does not refine point pairs");
    auto res = spherical_refine(p, sph->h);
    if (warnings) warnings->insert(warnings->end(), res.degenerate_segments.begin(), res.degenerate_segments.end());
    return res.points;
}

PointPair2D subdivide_points(const SchemeSpec& scheme, const PointPair2D& p, int levels) {
    if (levels < 0) throw Error(ErrorKind::InvalidArgument, "levels must be non-negative");
    PointPair2D cur = p;
    for (int k = 0; k < levels; ++k) cur = refine_points(scheme, cur);
    return cur;
}

std::vector<double> predict_odd(const SchemeSpec& scheme, const Sequence& coarse) {
    if (scheme.is_spherical()) {
        throw Error(ErrorKind::InvalidArgument, "the spherical scheme predicts point pairs");
    }
    const bool periodic = coarse.boundary() == Boundary::Periodic;
    const std::int64_t lo = coarse.first_index();
    const std::int64_t hi = periodic ? coarse.last_index() : coarse.last_index() - 1;
    const auto [a, b] = scheme.odd_stencil();
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(std::max<std::int64_t>(0, hi - lo + 1)));
    for (std::int64_t n = lo; n <= hi; ++n) {
        const bool fits = coarse.contains(n + a) && coarse.contains(n + b);
        if (coarse.boundary() == Boundary::Shrink && !fits) {
            out.push_back((coarse.at_index(n) + coarse.at_index(n + 1)) / 2.0);
        } else {
            out.push_back(odd_value(scheme, coarse, n));
        }
    }
    return out;
}

std::pair<std::vector<double>, std::vector<double>> predict_odd_points(const SchemeSpec& scheme,
                                                                       const PointPair2D& coarse) {
    const auto* sph = std::get_if<Spherical>(&scheme.family());
    if (!sph) throw Error(ErrorKind::InvalidArgument, scheme.name() + " does not predict point pairs");
    check_function_graph(coarse);
    const bool periodic = coarse.x.boundary() == Boundary::Periodic;
    const std::int64_t lo = coarse.x.first_index();
    const std::int64_t hi = periodic ? coarse.x.last_index() : coarse.x.last_index() - 1;
    std::vector<double> xs;
    std::vector<double> fs;
    for (std::int64_t n = lo; n <= hi; ++n) {
        const double mx = (coarse.x_at(n) + coarse.x_at(n + 1)) / 2.0;
        const double mf = (coarse.f_at(n) + coarse.f_at(n + 1)) / 2.0;
        const bool fits = coarse.x.contains(n - 1) && coarse.x.contains(n + 2);
        if (coarse.x.boundary() == Boundary::Shrink && !fits) {
            xs.push_back(mx);
            fs.push_back(mf);
        } else {
            const auto pert = spherical_perturbation(coarse, n, sph->h);
            xs.push_back(mx + pert.dx);
            fs.push_back(mf + pert.df);
        }
    }
    return {std::move(xs), std::move(fs)};
}

}  // namespace nlsd
