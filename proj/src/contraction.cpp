#include "nlsubdiv/contraction.hpp"

#include "nlsubdiv/parallel.hpp"
#include "nlsubdiv/power_mean.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace nlsd {

DeltaSpec DeltaSpec::parse(const std::string& text) {
    if (text.rfind("max(d,", 0) == 0 && text.back() == ')') {
        return joint(DiffOrder::parse(text.substr(6, text.size() - 7)));
    }
    return single(DiffOrder::parse(text));
}

std::string DeltaSpec::name() const {
    return joint_first ? "max(d," + order.name() + ")" : order.name();
}

DifferenceMask scheme_symbol(const SchemeSpec& scheme) {
    const auto& r = scheme.linear_rule();
    const int m_lo = r.leftmost;
    const int m_hi = r.leftmost + static_cast<int>(r.exact.size()) - 1;
    const int lo = std::min(0, 1 - 2 * m_hi);
    const int hi = std::max(0, 1 - 2 * m_lo);
    std::vector<Rational> a(static_cast<std::size_t>(hi - lo + 1), Rational(0));
    a[static_cast<std::size_t>(-lo)] += 1;
    for (int m = m_lo; m <= m_hi; ++m) {
        a[static_cast<std::size_t>(1 - 2 * m - lo)] += r.exact[static_cast<std::size_t>(m - m_lo)];
    }
    return {DiffOrder::first(), lo, std::move(a)};
}

DifferenceMask difference_mask(const SchemeSpec& scheme, DiffOrder order) {
    DifferenceMask m = scheme_symbol(scheme);
    m.order = order;
    const int k = order.symbol_degree();
    for (int step = 0; step < k; ++step) {
        auto& c = m.coefficients;
        if (c.size() < 2) {
            throw Error(ErrorKind::NotDifferenceRepresentable,
                        scheme.name() + ": " + order.name() + " does not factor through the scheme");
        }
        std::vector<Rational> q(c.size() - 1);
        q.back() = c.back();
        for (std::size_t j = c.size() - 2; j >= 1; --j) q[j - 1] = c[j] - q[j];
        if (c[0] - q[0] != 0) {
            throw Error(ErrorKind::NotDifferenceRepresentable,
                        scheme.name() + ": " + order.name() + " does not factor through the scheme");
        }
        c = std::move(q);
    }
    return m;
}

Rational linear_contraction_norm(const SchemeSpec& scheme, DiffOrder order) {
    const auto m = difference_mask(scheme, order);
    std::array<Rational, 2> coset{Rational(0), Rational(0)};
    for (std::size_t i = 0; i < m.coefficients.size(); ++i) {
        const int power = m.lowest_power + static_cast<int>(i);
        coset[static_cast<std::size_t>(((power % 2) + 2) % 2)] += abs(m.coefficients[i]);
    }
    return std::max(coset[0], coset[1]);
}

std::vector<int> factoring_orders(const SchemeSpec& scheme, int max_l) {
    std::vector<int> out;
    for (int l = 1; l <= max_l; ++l) {
        try {
            difference_mask(scheme, DiffOrder::iterated(l));
            out.push_back(l);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::NotDifferenceRepresentable) throw;
        }
    }
    return out;
}

DeltaSpec natural_delta(const SchemeSpec& scheme) {
    if (std::holds_alternative<PowerP>(scheme.family())) return DeltaSpec::single(DiffOrder::iterated(1));
    if (std::holds_alternative<Weno6>(scheme.family())) return DeltaSpec::joint(DiffOrder::iterated(1));
    return DeltaSpec::single(DiffOrder::first());
}

namespace {

template <class T>
std::vector<T> inverse_difference_t(std::vector<T> g, DiffOrder order) {
    const auto n = g.size();
    if (n < 2) throw Error(ErrorKind::InvalidArgument, "inverse_difference needs at least 2 samples");
    auto recentre = [](std::vector<T>& v) {
        T mean = T(0);
        for (const T& x : v) mean += x;
        mean /= static_cast<int>(v.size());
        for (T& x : v) x -= mean;
    };
    auto integrate = [&](const std::vector<T>& v) {
        std::vector<T> h(n, T(0));
        for (std::size_t k = 0; k + 1 < n; ++k) h[k + 1] = h[k] + v[k];
        recentre(h);
        return h;
    };
    recentre(g);
    if (order.is_first()) return integrate(g);
    for (int i = 0; i < order.l; ++i) {
        // D h = g  <=>  v_k - v_{k-1} = g_k with v = dh, chosen with zero mean.
        std::vector<T> v(n, T(0));
        for (std::size_t k = 1; k < n; ++k) v[k] = v[k - 1] + g[k];
        recentre(v);
        g = integrate(v);
    }
    return g;
}

}  // namespace

std::vector<double> inverse_difference(std::vector<double> g, DiffOrder order) {
    return inverse_difference_t(std::move(g), order);
}

namespace {

using Rng = std::mt19937_64;

std::vector<DiffOrder> delta_orders(const DeltaSpec& d) {
    if (d.joint_first && !d.order.is_first()) return {DiffOrder::first(), d.order};
    return {d.order};
}

template <class T>
std::vector<T> delta_vector(const BasicSequence<T>& s, const DeltaSpec& d) {
    std::vector<T> out;
    for (const auto& o : delta_orders(d)) {
        const auto v = apply_diff(s, o);
        out.insert(out.end(), v.values().begin(), v.values().end());
    }
    return out;
}

std::vector<double> delta_vector(const PointPair2D& p, const DeltaSpec& d) {
    std::vector<double> out;
    for (const auto& o : delta_orders(d)) {
        const auto [lo, hi] = o.extent();
        std::vector<std::int64_t> w = o.is_first() ? std::vector<std::int64_t>{-1, 1}
                                                   : detail::iterated_second_diff_weights(o.l);
        std::int64_t first = p.x.first_index();
        std::int64_t last = p.x.last_index();
        if (p.x.boundary() == Boundary::Shrink) {
            first -= lo;
            last -= hi;
        }
        for (int channel = 0; channel < 2; ++channel) {
            for (std::int64_t n = first; n <= last; ++n) {
                double acc = 0.0;
                for (int i = lo; i <= hi; ++i) {
                    const double v = channel == 0 ? p.x_at(n + i) : p.f_at(n + i);
                    acc += static_cast<double>(w[static_cast<std::size_t>(i - lo)]) * v;
                }
                out.push_back(acc);
            }
        }
    }
    return out;
}

double sup(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

Rational sup(const std::vector<Rational>& v) {
    Rational m = 0;
    for (const auto& x : v) {
        const Rational a = abs(x);
        if (a > m) m = a;
    }
    return m;
}

template <class T>
T sup_diff(const std::vector<T>& a, const std::vector<T>& b) {
    if (a.size() != b.size()) throw Error(ErrorKind::InvalidArgument, "mismatched difference windows");
    std::vector<T> d(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
    return sup(d);
}

double ratio(double num, double den) { return num / den; }
double ratio(const Rational& num, const Rational& den) { return to_double(num / den); }

std::vector<double> uniform(Rng& rng, int n, double lo = -1.0, double hi = 1.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> v(static_cast<std::size_t>(n));
    for (auto& x : v) x = u(rng);
    return v;
}

/// Samples given directly, or a target for delta f that is integrated back.
struct BatteryItem {
    std::vector<double> values;
    std::optional<DiffOrder> inverse;
};

template <class T>
std::vector<T> materialize(const std::vector<double>& values) {
    return std::vector<T>(values.begin(), values.end());
}

template <class T>
std::vector<T> materialize(const BatteryItem& item) {
    auto v = materialize<T>(item.values);
    return item.inverse ? inverse_difference_t(std::move(v), *item.inverse) : v;
}

// Sign patterns of delta f attaining the exact norm at one output of each coset:
// probe the linear row coefficients of delta(S f) against unit differences, then
// feed back their signs.
std::vector<BatteryItem> attaining_inputs(const SchemeSpec& scheme, DiffOrder order, int n) {
    std::vector<BatteryItem> out;
    const int half = n / 2;
    const int reach = scheme.odd_stencil().second - scheme.odd_stencil().first + order.symbol_degree() + 2;
    if (4 * reach >= n) return out;
    for (int coset = 0; coset < 2; ++coset) {
        const std::int64_t m = n + coset;  // output index near the window centre (level + 1)
        std::vector<double> coeff(static_cast<std::size_t>(n), 0.0);
        for (int k = half - reach; k <= half + reach; ++k) {
            std::vector<Rational> g(static_cast<std::size_t>(n), Rational(0));
            g[static_cast<std::size_t>(k)] = 1;
            g[static_cast<std::size_t>((k + half) % n)] = -1;
            const ExactSequence f(inverse_difference_t(std::move(g), order), 0, 0, Boundary::Periodic);
            coeff[static_cast<std::size_t>(k)] = to_double(apply_diff(refine_once(scheme, f), order).at_index(m));
        }
        std::vector<double> g(static_cast<std::size_t>(n), 0.0);
        double total = 0.0;
        for (int k = half - reach; k <= half + reach; ++k) {
            const double c = coeff[static_cast<std::size_t>(k)];
            if (c != 0.0) {
                g[static_cast<std::size_t>(k)] = c > 0 ? 1.0 : -1.0;
                total += g[static_cast<std::size_t>(k)];
            }
        }
        // Compensate the mean far from the probed output.
        std::vector<int> far;
        for (int k = 0; k < n; ++k) {
            const int dist = std::min(std::abs(k - half), n - std::abs(k - half));
            if (dist > reach + 1) far.push_back(k);
        }
        for (int k : far) g[static_cast<std::size_t>(k)] = -total / static_cast<double>(far.size());
        out.push_back({std::move(g), order});
    }
    return out;
}

// Deterministic adversarial battery of scalar periodic inputs.
std::vector<BatteryItem> scalar_battery(const SchemeSpec& scheme, const DeltaSpec& delta, int n,
                                        std::uint64_t seed) {
    std::vector<BatteryItem> out;
    const double pi = std::numbers::pi;
    auto add = [&](auto fn) {
        std::vector<double> v(static_cast<std::size_t>(n));
        for (int k = 0; k < n; ++k) v[static_cast<std::size_t>(k)] = fn(k);
        out.push_back({std::move(v), std::nullopt});
    };
    for (double h : {1.0, -1.0}) {
        add([&](int k) { return k >= n / 2 ? h : 0.0; });
        add([&](int k) { return k == n / 2 ? h : 0.0; });
        add([&](int k) { return (k == n / 2 || k == n / 2 + 1) ? h : 0.0; });
        add([&](int k) { return k >= n / 2 && k < n / 2 + 3 ? h : 0.0; });
    }
    add([&](int k) { return k % 2 == 0 ? 1.0 : -1.0; });
    add([&](int k) { return (k / 2) % 2 == 0 ? 1.0 : -1.0; });
    add([&](int k) { return (k / 3) % 2 == 0 ? 1.0 : -1.0; });
    add([&](int k) { return k % 3 == 0 ? 1.0 : 0.0; });
    add([&](int k) { return std::abs(k - n / 2) / static_cast<double>(n); });
    for (int freq : {1, 2, 3, 4, 8, n / 4, n / 2 - 1, n / 2}) {
        for (double phase : {0.0, 0.25, 0.5}) {
            add([&](int k) { return std::sin(2 * pi * freq * k / n + phase * pi); });
        }
    }
    Rng rng(trial_seed(seed, 0xBA77E2ULL));
    std::uniform_int_distribution<int> coin(0, 1);
    for (const auto& o : delta_orders(delta)) {
        for (int r = 0; r < 48; ++r) {
            std::vector<double> g(static_cast<std::size_t>(n));
            for (auto& x : g) x = coin(rng) ? 1.0 : -1.0;
            out.push_back({std::move(g), o});
        }
        for (int width : {1, 2, 3, 4}) {
            std::vector<double> g(static_cast<std::size_t>(n));
            for (int k = 0; k < n; ++k) g[static_cast<std::size_t>(k)] = (k / width) % 2 == 0 ? 1.0 : -1.0;
            out.push_back({std::move(g), o});
        }
        if (scheme.is_linear()) {
            for (auto& v : attaining_inputs(scheme, o, n)) out.push_back(std::move(v));
        }
    }
    return out;
}

template <class T>
BasicSequence<T> scalar_input(const std::vector<BatteryItem>& battery, int t, int n, Rng& rng) {
    std::vector<T> v = t < static_cast<int>(battery.size()) ? materialize<T>(battery[static_cast<std::size_t>(t)])
                                                            : materialize<T>(uniform(rng, n));
    return BasicSequence<T>(std::move(v), 0, 0, Boundary::Periodic);
}

// Function-graph inputs: increasing abscissae with random spacing, ordinates
// from the scalar battery scaled by a varying amplitude.
PointPair2D graph_input(const std::vector<BatteryItem>& battery, int t, int n, Rng& rng) {
    static constexpr std::array<double, 5> amplitude{0.05, 0.3, 1.0, 3.0, 10.0};
    std::uniform_real_distribution<double> sp(0.2, 1.0);
    std::vector<double> fv;
    double amp = 1.0;
    const bool uniform_spacing = t % 2 == 0;
    if (t < static_cast<int>(battery.size()) * static_cast<int>(amplitude.size())) {
        fv = materialize<double>(battery[static_cast<std::size_t>(t) % battery.size()]);
        amp = amplitude[static_cast<std::size_t>(t) / battery.size()] / std::max(1.0, sup(fv));
    } else {
        fv = uniform(rng, n);
        amp = std::pow(10.0, std::uniform_real_distribution<double>(-2.0, 1.0)(rng));
    }
    std::vector<double> xv(static_cast<std::size_t>(n));
    double x = 0.0;
    for (int k = 0; k < n; ++k) {
        xv[static_cast<std::size_t>(k)] = x;
        x += uniform_spacing ? 1.0 : sp(rng);
    }
    for (auto& v : fv) v *= amp;
    return PointPair2D(Sequence(std::move(xv), 0, 0, Boundary::Periodic), Sequence(std::move(fv), 0, 0, Boundary::Periodic),
                       x);
}

struct TrialOut {
    double ratio = 0.0;
    bool skipped = false;
};

void validate_trials(int trials, int steps) {
    if (trials < 1) throw Error(ErrorKind::InvalidArgument, "estimators need trials >= 1");
    if (steps < 1) throw Error(ErrorKind::InvalidArgument, "estimators need steps >= 1");
}

ContractionReport collect(const SchemeSpec& scheme, DeltaSpec delta, int steps, int trials, std::uint64_t seed,
                          const std::vector<TrialOut>& outs) {
    ContractionReport rep{scheme.name(), delta, steps, 0.0, std::nullopt, trials, seed, 0};
    for (const auto& o : outs) {
        if (o.skipped) {
            ++rep.skipped;
        } else {
            rep.c_estimate = std::max(rep.c_estimate, o.ratio);
        }
    }
    if (scheme.is_linear() && !delta.joint_first && steps == 1) {
        try {
            rep.exact = linear_contraction_norm(scheme, delta.order);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::NotDifferenceRepresentable) throw;
        }
    }
    return rep;
}

void check_window(int n) {
    if (n < 16) throw Error(ErrorKind::InvalidArgument, "estimator window must hold at least 16 samples");
}

// Scalar contraction trial; linear schemes run in exact arithmetic.
template <class T>
TrialOut scalar_contraction_trial(const SchemeSpec& scheme, const DeltaSpec& delta, int steps,
                                  const std::vector<BatteryItem>& battery, int t, int n, Rng& rng) {
    const auto f = scalar_input<T>(battery, t, n, rng);
    const T den = sup(delta_vector(f, delta));
    if (den == 0) return {0.0, true};
    return {ratio(sup(delta_vector(subdivide(scheme, f, steps), delta)), den), false};
}

template <class T>
std::optional<double> lipschitz_ratio_t(const SchemeSpec& scheme, const DeltaSpec& delta, const BasicSequence<T>& f,
                                        const BasicSequence<T>& g) {
    const T den = sup_diff(delta_vector(f, delta), delta_vector(g, delta));
    if (den == 0) return std::nullopt;
    return ratio(sup_diff(delta_vector(refine_once(scheme, f), delta), delta_vector(refine_once(scheme, g), delta)),
                 den);
}

template <class T>
TrialOut scalar_lipschitz_trial(const SchemeSpec& scheme, const DeltaSpec& delta,
                                const std::vector<BatteryItem>& battery, int t, int n, Rng& rng) {
    const int mode = t % 3;
    const double eps = mode == 1 ? 1e-3 : 1e-7;
    const auto f = scalar_input<T>(battery, t / 3, n, rng);
    std::vector<T> gv;
    if (mode == 0) {
        gv = scalar_input<T>(battery, t / 3 + 1, n, rng).values();
    } else {
        gv = f.values();
        std::uniform_real_distribution<double> u(-1, 1);
        for (auto& v : gv) v += T(eps * u(rng));
    }
    const auto r = lipschitz_ratio_t(scheme, delta, f, f.with_values(std::move(gv)));
    return r ? TrialOut{*r, false} : TrialOut{0.0, true};
}

}  // namespace

ContractionReport empirical_contraction(const SchemeSpec& scheme, DeltaSpec delta, int steps, int trials,
                                        std::uint64_t seed, EstimatorOptions opts) {
    validate_trials(trials, steps);
    check_window(opts.window);
    const int n = opts.window;
    const auto battery = scalar_battery(scheme, delta, n, seed);
    std::vector<TrialOut> outs(static_cast<std::size_t>(trials));
    for_each_trial(
        trials,
        [&](int t) {
            Rng rng(trial_seed(seed, static_cast<std::uint64_t>(t)));
            auto& o = outs[static_cast<std::size_t>(t)];
            if (scheme.is_linear()) {
                o = scalar_contraction_trial<Rational>(scheme, delta, steps, battery, t, n, rng);
            } else if (!scheme.is_spherical()) {
                o = scalar_contraction_trial<double>(scheme, delta, steps, battery, t, n, rng);
            } else {
                const auto p = graph_input(battery, t, n, rng);
                const double den = sup(delta_vector(p, delta));
                if (den == 0.0) {
                    o.skipped = true;
                    return;
                }
                try {
                    o.ratio = sup(delta_vector(subdivide_points(scheme, p, steps), delta)) / den;
                } catch (const Error& e) {
                    if (e.kind() != ErrorKind::NotAFunctionGraph) throw;
                    o.skipped = true;
                }
            }
        },
        opts.threads);
    return collect(scheme, delta, steps, trials, seed, outs);
}

ContractionReport lipschitz_contraction(const SchemeSpec& scheme, DeltaSpec delta, int trials, std::uint64_t seed,
                                        EstimatorOptions opts) {
    validate_trials(trials, 1);
    check_window(opts.window);
    const int n = opts.window;
    const auto battery = scalar_battery(scheme, delta, n, seed);
    std::vector<TrialOut> outs(static_cast<std::size_t>(trials));
    for_each_trial(
        trials,
        [&](int t) {
            Rng rng(trial_seed(seed, static_cast<std::uint64_t>(t)));
            auto& o = outs[static_cast<std::size_t>(t)];
            if (scheme.is_linear()) {
                o = scalar_lipschitz_trial<Rational>(scheme, delta, battery, t, n, rng);
                return;
            }
            if (!scheme.is_spherical()) {
                o = scalar_lipschitz_trial<double>(scheme, delta, battery, t, n, rng);
                return;
            }
            const int mode = t % 3;
            const double eps = mode == 1 ? 1e-3 : 1e-7;
            const auto p = graph_input(battery, t / 3, n, rng);
            std::vector<double> gf = p.f.values();
            if (mode == 0) {
                gf = uniform(rng, n);
            } else {
                for (auto& v : gf) v += eps * std::uniform_real_distribution<double>(-1, 1)(rng);
            }
            const PointPair2D q(p.x, p.f.with_values(gf), p.x_period);
            const double den = sup_diff(delta_vector(p, delta), delta_vector(q, delta));
            if (den == 0.0) {
                o.skipped = true;
                return;
            }
            try {
                o.ratio = sup_diff(delta_vector(refine_points(scheme, p), delta),
                                   delta_vector(refine_points(scheme, q), delta)) /
                          den;
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::NotAFunctionGraph) throw;
                o.skipped = true;
            }
        },
        opts.threads);
    return collect(scheme, delta, 1, trials, seed, outs);
}

std::optional<double> lipschitz_ratio(const SchemeSpec& scheme, DeltaSpec delta, const Sequence& f,
                                      const Sequence& g) {
    return lipschitz_ratio_t(scheme, delta, f, g);
}

double perturbation_bound(const SchemeSpec& scheme, int trials, std::uint64_t seed, EstimatorOptions opts) {
    validate_trials(trials, 1);
    check_window(opts.window);
    if (scheme.is_linear()) {
        throw Error(ErrorKind::InvalidArgument, scheme.name() + " has no nonlinear perturbation part");
    }
    const int n = opts.window;
    const DeltaSpec delta = natural_delta(scheme);
    const auto battery = scalar_battery(scheme, delta, n, seed);
    std::vector<double> outs(static_cast<std::size_t>(trials), 0.0);
    for_each_trial(
        trials,
        [&](int t) {
            Rng rng(trial_seed(seed, static_cast<std::uint64_t>(t)));
            double worst = 0.0;
            double den = 0.0;
            if (const auto* sph = std::get_if<Spherical>(&scheme.family())) {
                const auto p = graph_input(battery, t, n, rng);
                den = sup(delta_vector(p, delta));
                for (std::int64_t k = 0; k < n; ++k) {
                    const auto pert = spherical_perturbation(p, k, sph->h);
                    worst = std::max({worst, std::abs(pert.dx), std::abs(pert.df)});
                }
            } else {
                const auto f = scalar_input<double>(battery, t, n, rng);
                den = sup(delta_vector(f, delta));
                const auto D = second_diff_iter(f, 1);
                if (const auto* pp = std::get_if<PowerP>(&scheme.family())) {
                    for (std::int64_t k = 0; k < n; ++k) {
                        worst = std::max(worst, std::abs(power_mean(pp->p, D.at_index(k), D.at_index(k + 1)) / 8.0));
                    }
                } else {
                    const auto& w = std::get<Weno6>(scheme.family());
                    const auto d = first_diff(f);
                    for (std::int64_t k = 0; k < n; ++k) {
                        std::array<double, 5> dw{};
                        for (int i = 0; i < 5; ++i) dw[static_cast<std::size_t>(i)] = d.at_index(k - 2 + i);
                        const auto a = weno_weights(dw, w.epsilon, w.linear_weights, w.indicator);
                        const double F = a[0] / 16.0 * D.at_index(k + 2) - (3.0 * a[0] + a[1]) / 16.0 * D.at_index(k + 1) -
                                         (a[1] + 3.0 * a[2]) / 16.0 * D.at_index(k) + a[2] / 16.0 * D.at_index(k - 1);
                        worst = std::max(worst, std::abs(F));
                    }
                }
            }
            outs[static_cast<std::size_t>(t)] = den > 0.0 ? worst / den : 0.0;
        },
        opts.threads);
    double m = 0.0;
    for (double v : outs) m = std::max(m, v);
    return m;
}

}  // namespace nlsd
