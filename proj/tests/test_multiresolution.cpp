#include <doctest.h>

#include "nlsubdiv/multiresolution.hpp"

#include <cmath>
#include <cstring>
#include <random>

using namespace nlsd;

namespace {

Sequence random_seq(std::mt19937_64& rng, std::size_t n, int level, Boundary bc, std::int64_t first = 0) {
    std::uniform_real_distribution<double> u(-1, 1);
    std::uniform_real_distribution<double> e(-3, 3);
    const double scale = std::pow(10.0, e(rng));
    std::vector<double> v(n);
    for (auto& x : v) x = scale * u(rng);
    return Sequence(v, first, level, bc);
}

bool bitwise_equal(const Sequence& a, const Sequence& b) {
    if (a.size() != b.size() || a.first_index() != b.first_index() || a.level() != b.level()) return false;
    return std::memcmp(a.values().data(), b.values().data(), a.size() * sizeof(double)) == 0;
}

std::vector<SchemeSpec> families() {
    return {SchemeSpec::centered_lagrange(4), SchemeSpec::uncentered_lagrange(7), SchemeSpec::weno6(),
            SchemeSpec::power_p(2), SchemeSpec::spherical(reference_h())};
}

}  // namespace

TEST_CASE("midpoint pyramid of four samples") {
    Sequence f({1.0, 5.0, 3.0, 10.0}, 0, 1, Boundary::Periodic);
    auto p = decompose(SchemeSpec::centered_lagrange(2), f, 1);
    CHECK(p.coarse().values() == std::vector<double>{1.0, 3.0});
    CHECK(p.coarse().level() == 0);
    REQUIRE(p.details().size() == 1);
    CHECK(p.details()[0].values() == std::vector<double>{5.0 - 2.0, 10.0 - 2.0});
}

TEST_CASE("perfect reconstruction, every family and boundary") {
    std::mt19937_64 rng(1);
    for (const auto& s : families()) {
        CAPTURE(s.name());
        for (int L = 1; L <= 6; ++L) {
            for (int trial = 0; trial < 6; ++trial) {
                auto f = random_seq(rng, std::size_t{4} << L, L + 1, Boundary::Periodic, std::int64_t{-3} << L);
                auto p = decompose(s, f, L);
                CHECK(p.details().size() == static_cast<std::size_t>(L));
                for (int k = 0; k < L; ++k) CHECK(p.details()[k].size() == p.coarse().size() << k);
                CHECK(bitwise_equal(reconstruct(p), f));
                for (auto bc : {Boundary::ConstantExtend, Boundary::Shrink}) {
                    auto g = random_seq(rng, (std::size_t{3} << L) + 1, L, bc);
                    CHECK(bitwise_equal(reconstruct(decompose(s, g, L)), g));
                }
            }
        }
    }
}

TEST_CASE("details vanish on the scheme's own output") {
    std::mt19937_64 rng(2);
    for (const auto& s : families()) {
        if (s.is_spherical()) continue;
        CAPTURE(s.name());
        auto f0 = random_seq(rng, 8, 0, Boundary::Periodic);
        auto f = subdivide(s, f0, 4);
        auto p = decompose(s, f, 4);
        CHECK(p.coarse() == f0);
        for (const auto& d : p.details()) {
            for (double v : d.values()) CHECK(v == 0.0);
        }
    }
    auto sph = SchemeSpec::spherical(reference_h());
    std::uniform_real_distribution<double> u(-0.05, 0.05);
    std::vector<double> gv(8);
    for (auto& x : gv) x = u(rng);
    auto g0 = PointPair2D::from_graph(Sequence(gv, 0, 0, Boundary::Periodic));
    auto g = subdivide_points(sph, g0, 3);
    auto p = decompose_points(sph, g, 3);
    for (const auto& d : p.details()) {
        for (double v : d.values()) CHECK(std::abs(v) <= 1e-12);
    }
}

TEST_CASE("linear data gives vanishing details for power_p") {
    std::vector<double> v;
    for (int n = 0; n < 64; ++n) v.push_back(0.3 * n - 2.0);
    Sequence f(v, 0, 6, Boundary::ConstantExtend);
    Sequence fs(std::vector<double>(v.begin(), v.begin() + 33), 0, 5, Boundary::ConstantExtend);
    auto p = decompose(SchemeSpec::power_p(3), fs, 5);
    for (const auto& d : p.details()) {
        for (double x : d.values()) CHECK(std::abs(x) <= 1e-12);
    }
    std::vector<double> cube;
    for (int n = 0; n <= 64; ++n) cube.push_back(std::pow(n / 64.0, 3));
    auto q = decompose(SchemeSpec::centered_lagrange(4), Sequence(cube, 0, 6, Boundary::Shrink), 3);
    for (const auto& d : q.details()) {
        for (std::size_t i = 1; i + 1 < d.size(); ++i) CHECK(std::abs(d[i]) <= 1e-12);
    }
}

TEST_CASE("window validation") {
    auto s = SchemeSpec::power_p(2);
    CHECK_THROWS_AS(decompose(s, Sequence(std::vector<double>(12, 0.0), 0, 4), 3), Error);
    CHECK_THROWS_AS(decompose(s, Sequence(std::vector<double>(16, 0.0), 2, 4), 3), Error);
    CHECK_THROWS_AS(decompose(s, Sequence(std::vector<double>(16, 0.0), 0, 2), 3), Error);
    CHECK_THROWS_AS(decompose(s, Sequence(std::vector<double>(16, 0.0), 0, 4, Boundary::Shrink), 3), Error);
    CHECK_NOTHROW(decompose(s, Sequence(std::vector<double>(17, 0.0), 0, 4, Boundary::Shrink), 3));
    CHECK_THROWS_AS(decompose(s, Sequence(std::vector<double>(16, 0.0), 0, 4), 0), Error);
    try {
        decompose(s, Sequence(std::vector<double>(12, 0.0), 0, 4), 3);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::IncompatibleWindow);
    }
}

TEST_CASE("corrupt pyramids are rejected") {
    std::mt19937_64 rng(3);
    auto p = decompose(SchemeSpec::power_p(2), random_seq(rng, 32, 5, Boundary::Periodic), 3);
    auto q = p;
    q.f.details.pop_back();
    CHECK_THROWS_AS(reconstruct(q), Error);
    auto r = p;
    r.f.details[1] = Sequence(std::vector<double>(3, 0.0), r.f.details[1].first_index(), r.f.details[1].level());
    try {
        reconstruct(r);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::CorruptPyramid);
    }
}

TEST_CASE("zero details reproduce subdivision; a single detail acts locally") {
    std::mt19937_64 rng(4);
    auto s = SchemeSpec::power_p(2);
    auto p = decompose(s, random_seq(rng, 64, 6, Boundary::Periodic), 3);
    auto z = threshold(p, std::numeric_limits<double>::infinity());
    CHECK(z.zeroed == 8 + 16 + 32);
    CHECK(reconstruct(z.pyramid) == subdivide(s, p.coarse(), 3));

    auto one = z.pyramid;
    std::vector<double> d1 = one.f.details[1].values();
    d1[5] = 0.25;
    one.f.details[1] = one.f.details[1].with_values(d1);
    // Stop after two stages: the touched odd sample moves by exactly delta.
    auto two = one;
    two.levels = 2;
    two.f.details.erase(two.f.details.begin() + 2, two.f.details.end());
    two.f.residuals.resize(2);
    auto two0 = z.pyramid;
    two0.levels = 2;
    two0.f.details.erase(two0.f.details.begin() + 2, two0.f.details.end());
    two0.f.residuals.resize(2);
    auto a = reconstruct(two);
    auto b = reconstruct(two0);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] - b[i] == (i == 11 ? 0.25 : 0.0));
    CHECK(reconstruct(one) != reconstruct(z.pyramid));

    auto t0 = threshold(p, 0.0);
    CHECK(reconstruct(t0.pyramid) == reconstruct(p));
}

TEST_CASE("thresholding smooth data") {
    std::vector<double> v;
    for (int n = 0; n < 256; ++n) v.push_back(std::sin(2 * M_PI * n / 256.0));
    Sequence f(v, 0, 8, Boundary::Periodic);
    auto p = decompose(SchemeSpec::power_p(2), f, 5);
    const double tol = 1e-3;
    auto t = threshold(p, tol);
    auto g = reconstruct(t.pyramid);
    double err = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) err = std::max(err, std::abs(g[i] - v[i]));
    const double c = err / tol;
    MESSAGE("power_p:2 threshold constant C = " << c << " with " << t.zeroed << " zeroed details");
    CHECK(std::isfinite(c));
    CHECK(t.zeroed > 0);
}

TEST_CASE("stability probe") {
    std::mt19937_64 rng(5);
    auto f = random_seq(rng, 64, 6, Boundary::Periodic);
    for (const auto& s : {SchemeSpec::centered_lagrange(4), SchemeSpec::power_p(4), SchemeSpec::weno6(),
                          SchemeSpec::spherical(reference_h())}) {
        CAPTURE(s.name());
        auto r = stability_probe(s, f, 4, 1e-3, 40, 99);
        CHECK(std::isfinite(r.ratio_s1));
        CHECK(std::isfinite(r.ratio_s3));
        CHECK(r.ratio_s2 <= 1 + 1e-12);
        CHECK(r.ratio_s1 > 0);
        auto again = stability_probe(s, f, 4, 1e-3, 40, 99);
        CHECK(again.ratio_s1 == r.ratio_s1);
        CHECK(again.ratio_s3 == r.ratio_s3);
    }
    for (const auto& s : {SchemeSpec::centered_lagrange(4), SchemeSpec::power_p(4)}) {
        auto big = stability_probe(s, f, 4, 1e-4, 40, 7);
        auto half = stability_probe(s, f, 4, 0.5e-4, 40, 7);
        CHECK(half.max_fine_deviation <= 0.5 * big.max_fine_deviation * 1.1);
        CHECK(half.max_fine_deviation >= 0.5 * big.max_fine_deviation * 0.9);
        CHECK(half.max_detail_deviation <= 0.5 * big.max_detail_deviation * 1.1);
        CHECK(half.max_detail_deviation >= 0.5 * big.max_detail_deviation * 0.9);
    }
}
