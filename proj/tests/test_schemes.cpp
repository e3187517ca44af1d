#include <doctest.h>

#include "nlsubdiv/lagrange.hpp"
#include "nlsubdiv/power_mean.hpp"
#include "nlsubdiv/scheme.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace nlsd;

namespace {

// Midpoint weights from the Vandermonde system sum_j w_j x_j^m = (1/2)^m, m < P.
std::map<int, Rational> vandermonde_midpoint(int points, int leftmost) {
    const int n = points;
    std::vector<std::vector<Rational>> a(n, std::vector<Rational>(n + 1));
    for (int m = 0; m < n; ++m) {
        for (int j = 0; j < n; ++j) {
            Rational p = 1;
            for (int e = 0; e < m; ++e) p *= leftmost + j;
            a[m][j] = p;
        }
        Rational rhs = 1;
        for (int e = 0; e < m; ++e) rhs *= Rational(1, 2);
        a[m][n] = rhs;
    }
    for (int c = 0; c < n; ++c) {
        int piv = c;
        while (a[piv][c] == 0) ++piv;
        std::swap(a[piv], a[c]);
        for (int r = 0; r < n; ++r) {
            if (r == c || a[r][c] == 0) continue;
            const Rational fct = a[r][c] / a[c][c];
            for (int k = c; k <= n; ++k) a[r][k] -= fct * a[c][k];
        }
    }
    std::map<int, Rational> w;
    for (int j = 0; j < n; ++j) w[leftmost + j] = a[j][n] / a[j][j];
    return w;
}

CoeffMask table1_row(int P) {
    auto D = [](int l, int off, Rational c) { return MaskTerm{DiffOrder::iterated(l), off, c}; };
    std::vector<MaskTerm> t{D(1, 1, Rational(-3, 16)), D(1, 2, Rational(1, 16))};
    if (P == 5) t.push_back(D(2, 2, Rational(-5, 128)));
    if (P >= 6) {
        t.push_back(D(2, 2, Rational(-17, 256)));
        t.push_back(D(2, 3, Rational(7, 256)));
    }
    if (P == 7) t.push_back(D(3, 3, Rational(-21, 1024)));
    if (P >= 8) {
        t.push_back(D(3, 3, Rational(-75, 2048)));
        t.push_back(D(3, 4, Rational(33, 2048)));
    }
    if (P == 9) t.push_back(D(4, 4, Rational(-429, 32768)));
    return CoeffMask(t);
}

Sequence random_seq(std::mt19937_64& rng, std::size_t n, Boundary bc = Boundary::Periodic) {
    std::uniform_real_distribution<double> u(-1, 1);
    std::vector<double> v(n);
    for (auto& x : v) x = u(rng);
    return Sequence(v, 0, 0, bc);
}

std::vector<SchemeSpec> all_scalar_schemes() {
    return {SchemeSpec::centered_lagrange(2), SchemeSpec::centered_lagrange(4),
            SchemeSpec::centered_lagrange(6), SchemeSpec::uncentered_lagrange(4),
            SchemeSpec::uncentered_lagrange(9), SchemeSpec::weno6(),
            SchemeSpec::weno6(Weno6{1e-6, {3.0 / 16, 10.0 / 16, 3.0 / 16}, WenoIndicator::Compact}),
            SchemeSpec::power_p(1), SchemeSpec::power_p(2), SchemeSpec::power_p(8)};
}

}  // namespace

TEST_CASE("Lagrange midpoint coefficients") {
    CHECK(lagrange_midpoint_coeffs(2, 0).expand() == std::map<int, Rational>{{0, Rational(1, 2)}, {1, Rational(1, 2)}});
    CHECK(lagrange_midpoint_coeffs(4, -1).expand() ==
          std::map<int, Rational>{{-1, Rational(-1, 16)}, {0, Rational(9, 16)}, {1, Rational(9, 16)}, {2, Rational(-1, 16)}});
    CHECK(lagrange_midpoint_coeffs(4, 0).expand() ==
          std::map<int, Rational>{{0, Rational(5, 16)}, {1, Rational(15, 16)}, {2, Rational(-5, 16)}, {3, Rational(1, 16)}});
    CHECK_THROWS_AS(lagrange_midpoint_coeffs(1, 0), Error);
    for (int P = 2; P <= 12; ++P) {
        for (int left : {0, 1 - P / 2, -P + 1, 3}) {
            const auto w = lagrange_midpoint_coeffs(P, left).expand();
            CHECK(w == vandermonde_midpoint(P, left));
            Rational sum = 0;
            for (const auto& [k, c] : w) sum += c;
            CHECK(sum == 1);
        }
    }
}

TEST_CASE("uncentered perturbations reproduce the difference-form table") {
    for (int P = 4; P <= 9; ++P) {
        CAPTURE(P);
        CHECK(uncentered_perturbation(P) == table1_row(P));
    }
    for (int P = 4; P <= 12; ++P) {
        const auto lhs = (two_point_midpoint() + uncentered_perturbation(P)).expand();
        CHECK(lhs == vandermonde_midpoint(P, 0));
        CHECK(chained_perturbation(P) == uncentered_perturbation(P));
    }
    CHECK_THROWS_AS(uncentered_perturbation(3), Error);
    CHECK_THROWS_AS(uncentered_perturbation(13), Error);
    CHECK(uncentered_perturbation(4).to_string() == "-3/16 D f[n+1] + 1/16 D f[n+2]");
}

TEST_CASE("step perturbations") {
    CHECK(step_perturbation(5) == CoeffMask({{DiffOrder::iterated(2), 2, Rational(-5, 128)}}));
    CHECK(step_perturbation(7) == CoeffMask({{DiffOrder::iterated(3), 3, Rational(-21, 1024)}}));
    CHECK(step_perturbation(9) == CoeffMask({{DiffOrder::iterated(4), 4, Rational(-429, 32768)}}));
    CHECK(step_base(9) == 8);
    CHECK(step_base(8) == 6);
}

TEST_CASE("printed closed forms: even rows agree, odd last term does not") {
    for (int P : {4, 6, 8, 10, 12}) {
        CHECK(mask_discrepancies(printed_closed_form_perturbation(P), uncentered_perturbation(P)).empty());
    }
    for (int P : {5, 7, 9}) {
        const auto diff = mask_discrepancies(printed_closed_form_perturbation(P), uncentered_perturbation(P));
        REQUIRE(diff.size() == 1);
        CHECK(diff[0].order == DiffOrder::iterated((P - 1) / 2));
    }
    CHECK_FALSE(mask_discrepancies(printed_step_perturbation(4), step_perturbation(4)).empty());
}

TEST_CASE("power mean") {
    for (int p = 1; p <= 8; ++p) {
        CHECK(power_mean(p, 0.7, 0.7) == 0.7);
        CHECK(power_mean(p, -0.3, -0.3) == -0.3);
        CHECK(power_mean(p, 1, -2) == 0.0);
        CHECK(power_mean(p, 2, -2) == 0.0);
        CHECK(power_mean(p, 0, 5) == 0.0);
    }
    CHECK(power_mean(2, 1, 3) == doctest::Approx(1.5).epsilon(1e-15));
    // p = 1 is minmod: sign * min(|a|, |b|).
    CHECK(power_mean(1, 1, 3) == 1.0);
    CHECK(power_mean(1, -4, -2.5) == -2.5);
    CHECK_THROWS_AS(power_mean(0, 1, 1), Error);

    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int i = 0; i < 20000; ++i) {
        const int p = 1 + i % 8;
        const double x = u(rng);
        const double y = u(rng) * (i % 3 == 0 ? 1e-3 : 1.0);
        const double a = power_mean(p, x, y);
        CHECK(a == doctest::Approx(power_mean_direct(p, x, y)).epsilon(1e-9).scale(1e-12));
    }
}

TEST_CASE("power mean properties on random pairs") {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(-1, 1);
    std::uniform_real_distribution<double> e(-12, 3);
    int bad = 0;
    for (int i = 0; i < 100000; ++i) {
        const int p = 1 + i % 8;
        const double x = u(rng) * std::pow(10.0, e(rng));
        const double y = u(rng) * std::pow(10.0, e(rng));
        const double v = power_mean(p, x, y);
        const double mn = std::min(std::abs(x), std::abs(y));
        const double mx = std::max(std::abs(x), std::abs(y));
        bad += v != power_mean(p, y, x);
        bad += (x * y <= 0) && v != 0.0;
        bad += power_mean(p, -x, -y) != -v;
        bad += std::abs(v) > mx * (1 + 1e-12);
        bad += std::abs(v) > p * mn * (1 + 1e-12);
    }
    CHECK(bad == 0);
}

TEST_CASE("WENO weights and odd rule") {
    const auto d = optimal_weno_linear_weights();
    CHECK(d[0] == Rational(3, 16));
    CHECK(d[1] == Rational(10, 16));
    CHECK(d[2] == Rational(3, 16));
    const std::array<double, 3> lw{3.0 / 16, 10.0 / 16, 3.0 / 16};

    std::array<double, 5> flat{0.2, 0.2, 0.2, 0.2, 0.2};
    auto a = weno_weights(flat, 1e-6, lw);
    for (int i = 0; i < 3; ++i) CHECK(a[i] == doctest::Approx(lw[i]).epsilon(1e-14));

    std::array<double, 5> step{0, 0, 1, 0, 0};
    for (auto ind : {WenoIndicator::FullStencil, WenoIndicator::Compact}) {
        auto s = weno_weights(step, 1e-6, lw, ind);
        CHECK(s[0] + s[1] + s[2] == doctest::Approx(1.0).epsilon(1e-15));
    }
    // The jump df_n lies in every full stencil; the compact windows leave it out of none either,
    // so use a jump at df_{n+2}, which only stencil 0 contains.
    std::array<double, 5> edge{0, 0, 0, 0, 1};
    auto e = weno_weights(edge, 1e-6, lw);
    CHECK(e[0] < e[1]);
    CHECK(e[0] < e[2]);

    std::array<double, 6> f{1, 2, 4, 8, 16, 32};
    CHECK(weno6_odd_rule(f, {0, 1, 0}) == doctest::Approx((-2.0 + 9 * 4 + 9 * 8 - 16) / 16.0));
    std::array<double, 6> c{3, 3, 3, 3, 3, 3};
    CHECK(weno6_odd_rule(c, {0.2, 0.5, 0.3}) == doctest::Approx(3.0).epsilon(1e-15));

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int i = 0; i < 1000; ++i) {
        std::array<double, 6> w{};
        for (auto& x : w) x = u(rng);
        std::array<double, 5> df{};
        for (int k = 0; k < 5; ++k) df[k] = w[k + 1] - w[k];
        const auto al = weno_weights(df, 1e-6, lw);
        CHECK(std::abs(weno6_odd_rule(w, al) - weno6_odd_rule_raw(w, al)) <= 1e-13);
    }
}

TEST_CASE("WENO on the step window matches a direct evaluation") {
    Sequence f({0, 0, 0, 1, 1, 1}, 0, 0, Boundary::Shrink);
    auto s = refine_once(SchemeSpec::weno6(), f);
    // Only n = 2 has f_{n-2..n+3} inside the window.
    REQUIRE(s.size() == 3);
    CHECK(s.first_index() == 4);
    const double eps = 1e-6;
    const double b0 = 1.0, b1 = 1.0, b2 = 1.0;  // every full stencil holds the unit jump df_2
    const double a0 = (3.0 / 16) / ((eps + b0) * (eps + b0));
    const double a1 = (10.0 / 16) / ((eps + b1) * (eps + b1));
    const double a2 = (3.0 / 16) / ((eps + b2) * (eps + b2));
    const double t = a0 + a1 + a2;
    const double al0 = a0 / t, al1 = a1 / t, al2 = a2 / t;
    // f_{n-2..n+3} = 0,0,0,1,1,1 with n = 2.
    const double expected = 0.5 + al0 / 16 * 0 - (3 * al0 + al1) / 16 * (-1) - (al1 + 3 * al2) / 16 * 1 + al2 / 16 * 0;
    CHECK(s[1] == doctest::Approx(expected).epsilon(1e-15));
    CHECK(s[1] == doctest::Approx(0.5));
}

TEST_CASE("refinement is interpolatory and reproduces constants") {
    std::mt19937_64 rng(5);
    for (const auto& sch : all_scalar_schemes()) {
        CAPTURE(sch.name());
        for (auto bc : {Boundary::Periodic, Boundary::ConstantExtend, Boundary::Shrink}) {
            auto f = random_seq(rng, 24, bc);
            auto g = refine_once(sch, f);
            CHECK(g.level() == 1);
            for (std::size_t k = 0; k < g.size(); k += 2) {
                CHECK(g[k] == f.at_index(g.first_index() / 2 + static_cast<std::int64_t>(k / 2)));
            }
            if (bc == Boundary::Periodic) CHECK(g.size() == 48);
            if (bc == Boundary::ConstantExtend) CHECK(g.size() == 47);
            auto c = refine_once(sch, Sequence(std::vector<double>(24, 2.5), 0, 0, bc));
            for (double v : c.values()) CHECK(v == doctest::Approx(2.5).epsilon(1e-15));
        }
    }
}

TEST_CASE("power_p refines linear data to exact midpoints") {
    std::vector<double> v;
    for (int n = 0; n < 16; ++n) v.push_back(0.25 * n - 1.0);
    for (int p = 1; p <= 8; ++p) {
        auto g = refine_once(SchemeSpec::power_p(p), Sequence(v, 0, 0, Boundary::Shrink));
        for (std::size_t k = 1; k < g.size(); k += 2) CHECK(g[k] == (g[k - 1] + g[k + 1]) / 2);
    }
}

TEST_CASE("subdivide") {
    Sequence f({0, 1}, 0, 0, Boundary::Periodic);
    CHECK(subdivide(SchemeSpec::power_p(2), f, 0) == f);
    auto g = subdivide(SchemeSpec::centered_lagrange(2), f, 3);
    REQUIRE(g.size() == 16);
    CHECK(g.level() == 3);
    for (std::size_t k = 0; k <= 8; ++k) CHECK(g[k] == doctest::Approx(k / 8.0));
    for (std::size_t k = 8; k < 16; ++k) CHECK(g[k] == doctest::Approx((16.0 - k) / 8.0));

    std::mt19937_64 rng(9);
    auto r = random_seq(rng, 16);
    auto s = SchemeSpec::power_p(2);
    auto prev = r;
    for (int k = 1; k <= 6; ++k) {
        auto next = subdivide(s, r, k);
        for (std::size_t i = 0; i < prev.size(); ++i) CHECK(next[2 * i] == prev[i]);
        prev = next;
    }
    CHECK_THROWS_AS(subdivide(s, r, -1), Error);
}

TEST_CASE("polynomial reproduction in exact arithmetic") {
    for (int P : {2, 4, 6, 8}) {
        auto s = SchemeSpec::centered_lagrange(P);
        for (int deg = 0; deg < P; ++deg) {
            std::vector<Rational> v;
            for (int n = 0; n < 20; ++n) {
                Rational x(n);
                Rational m = 1;
                for (int e = 0; e < deg; ++e) m *= x;
                v.push_back(m);
            }
            auto g = refine_once(s, ExactSequence(v, 0, 0, Boundary::Shrink));
            for (std::size_t k = 0; k < g.size(); ++k) {
                Rational x(g.first_index() + static_cast<std::int64_t>(k), 2);
                Rational m = 1;
                for (int e = 0; e < deg; ++e) m *= x;
                CHECK(g[k] == m);
            }
        }
    }
    for (int P = 3; P <= 10; ++P) {
        auto s = SchemeSpec::uncentered_lagrange(P);
        std::vector<Rational> v;
        for (int n = 0; n < 20; ++n) {
            Rational m = 1;
            for (int e = 0; e < P - 1; ++e) m *= n;
            v.push_back(m);
        }
        auto g = refine_once(s, ExactSequence(v, 0, 0, Boundary::Shrink));
        for (std::size_t k = 1; k < g.size(); k += 2) {
            Rational x(g.first_index() + static_cast<std::int64_t>(k), 2);
            Rational m = 1;
            for (int e = 0; e < P - 1; ++e) m *= x;
            CHECK(g[k] == m);
        }
    }
}

TEST_CASE("Shrink windows") {
    auto s = SchemeSpec::uncentered_lagrange(6);
    Sequence f({1, 2, 3, 4, 5}, 0, 0, Boundary::Shrink);
    CHECK_THROWS_AS(refine_once(s, f), Error);
    Sequence g({1, 2, 3, 4, 5, 6, 7}, 0, 0, Boundary::Shrink);
    auto r = refine_once(s, g);
    CHECK(r.first_index() == 0);
    CHECK(r.size() == 5);
}

TEST_CASE("scheme parsing and validation") {
    CHECK(SchemeSpec::parse("uncentered:9").name() == "uncentered:9");
    CHECK(SchemeSpec::parse("power_p:3").name() == "power_p:3");
    CHECK(SchemeSpec::parse("weno6:compact").name() == "weno6:compact");
    CHECK(SchemeSpec::parse("spherical:zero").is_spherical());
    CHECK(SchemeSpec::parse("centered:4").is_linear());
    CHECK_FALSE(SchemeSpec::parse("weno6").is_linear());
    CHECK_THROWS_AS(SchemeSpec::parse("centered:3"), Error);
    CHECK_THROWS_AS(SchemeSpec::parse("nope"), Error);
    CHECK_THROWS_AS(SchemeSpec::weno6(Weno6{1e-6, {0.5, 0.6, 0.1}, WenoIndicator::FullStencil}), Error);
    CHECK_THROWS_AS(refine_once(SchemeSpec::parse("spherical"), Sequence({1.0, 2.0})), Error);
    CHECK(SchemeSpec::uncentered_lagrange(9).odd_stencil() == std::pair{0, 8});
    CHECK(SchemeSpec::centered_lagrange(4).odd_stencil() == std::pair{-1, 2});
}

TEST_CASE("reference h profile") {
    const auto h = reference_h();
    const double pi = std::numbers::pi;
    CHECK(h.h(0.0) == 0.0);
    CHECK(h.h(3 * pi / 4) == 3 * pi / 4);
    CHECK(h.derivative_min == doctest::Approx(0.55));
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const double x = -pi + 2 * pi * i / 9999.0;
        CHECK(std::abs(h.h(-x) + h.h(x)) <= 1e-12);
        const double step = 1e-6;
        const double fd = (h.h(x + step) - h.h(x - step)) / (2 * step);
        worst = std::max(worst, std::abs(1 - fd));
        CHECK(h.derivative_min <= h.dh(x));
        CHECK(h.dh(x) <= h.derivative_max);
    }
    CHECK(worst == doctest::Approx(0.45).epsilon(1e-6));
    CHECK(worst < std::sqrt(2.0) / pi);
    // Continuity at the branch points.
    for (double b : {pi / 7, pi / 2}) CHECK(h.h(b - 1e-12) == doctest::Approx(h.h(b + 1e-12)).epsilon(1e-10));
}

namespace {

// Second transcription of the odd-point rule, written from the angle definitions directly.
std::pair<double, double> spherical_oracle(const std::array<double, 4>& x, const std::array<double, 4>& y,
                                           const std::function<double(double)>& h) {
    const double th0 = std::atan((y[2] - y[0]) / (x[2] - x[0]));
    const double th1 = std::atan((y[3] - y[1]) / (x[3] - x[1]));
    const double ga = std::atan((y[2] - y[1]) / (x[2] - x[1]));
    const double r = std::sqrt((x[2] - x[1]) * (x[2] - x[1]) + (y[2] - y[1]) * (y[2] - y[1]));
    const double p1 = th0 + h(ga - th0);
    const double p2 = th1 + h(ga - th1);
    return {0.5 * (x[1] + x[2]) + 0.25 * r * (std::cos(p1) - std::cos(p2)),
            0.5 * (y[1] + y[2]) + 0.25 * r * (std::sin(p1) - std::sin(p2))};
}

}  // namespace

TEST_CASE("spherical refinement") {
    const auto href = reference_h();
    std::vector<double> xs{0, 0.2, 0.5, 0.9, 1.0, 1.4, 1.5, 2.0};
    std::vector<double> ys{0, 0, 0, 1, 1, 1, 0.3, -0.2};
    PointPair2D p(Sequence(xs, 0, 0, Boundary::Shrink), Sequence(ys, 0, 0, Boundary::Shrink));
    auto r = spherical_refine(p, href);
    REQUIRE(r.points.x.first_index() == 2);
    for (std::int64_t n = 1; n <= 5; ++n) {
        const auto [ox, oy] = spherical_oracle({xs[n - 1], xs[n], xs[n + 1], xs[n + 2]},
                                               {ys[n - 1], ys[n], ys[n + 1], ys[n + 2]}, href.h);
        const auto k = static_cast<std::size_t>(2 * n + 1 - 2);
        CHECK(r.points.x[k] == doctest::Approx(ox).epsilon(1e-14));
        CHECK(r.points.f[k] == doctest::Approx(oy).epsilon(1e-14));
    }

    // Identity h reproduces midpoints; collinear points stay collinear midpoints for any h.
    auto id = spherical_refine(p, identity_h());
    for (std::size_t k = 1; k < id.points.x.size(); k += 2) {
        CHECK(id.points.x[k] == doctest::Approx((id.points.x[k - 1] + id.points.x[k + 1]) / 2).epsilon(1e-14));
        CHECK(id.points.f[k] == doctest::Approx((id.points.f[k - 1] + id.points.f[k + 1]) / 2).epsilon(1e-14));
    }
    std::vector<double> lx{0, 1, 2, 3, 4, 5};
    std::vector<double> ly{0, 0.5, 1, 1.5, 2, 2.5};
    PointPair2D line(Sequence(lx, 0, 0, Boundary::Shrink), Sequence(ly, 0, 0, Boundary::Shrink));
    auto lr = spherical_refine(line, href);
    for (std::size_t k = 0; k < lr.points.x.size(); ++k) {
        CHECK(lr.points.f[k] == doctest::Approx(0.5 * lr.points.x[k]).epsilon(1e-14));
    }

    std::vector<double> dup{0, 1, 1, 2, 3, 4};
    std::vector<double> dupy{0, 1, 1, 0, 1, 0};
    PointPair2D dp(Sequence(dup, 0, 0, Boundary::ConstantExtend), Sequence(dupy, 0, 0, Boundary::ConstantExtend));
    auto dr = spherical_refine(dp, href);
    REQUIRE(dr.degenerate_segments.size() == 1);
    CHECK(dr.degenerate_segments[0] == 1);
    CHECK(dr.points.x[3] == 1.0);

    std::vector<double> back{0, 1, 0.5, 2};
    PointPair2D bp(Sequence(back, 0, 0, Boundary::Shrink), Sequence({0, 1, 2, 3}, 0, 0, Boundary::Shrink));
    CHECK_THROWS_AS(spherical_refine(bp, href), Error);

    // Periodic graphs use the drifted abscissae across the wrap.
    auto g = PointPair2D::from_graph(Sequence({0, 1, 0, -1}, 0, 2, Boundary::Periodic));
    CHECK(g.x_period == 1.0);
    CHECK(g.x_at(4) == 1.0);
    CHECK(g.x_at(-1) == -0.25);
    auto gr = spherical_refine(g, href);
    CHECK(gr.points.x.size() == 8);
    CHECK(gr.points.x[7] > gr.points.x[6]);
}
