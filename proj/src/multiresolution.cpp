#include "nlsubdiv/multiresolution.hpp"

#include "nlsubdiv/parallel.hpp"

#include <cmath>
#include <limits>
#include <random>

namespace nlsd {

namespace {

std::pair<double, double> two_sum(double a, double b) {
    const double s = a + b;
    const double bb = s - a;
    const double e = (a - (s - bb)) + (b - bb);
    return {s, e};
}

bool periodic(const Sequence& s) { return s.boundary() == Boundary::Periodic; }

void check_window(const Sequence& f, int levels) {
    if (levels < 1) throw Error(ErrorKind::InvalidArgument, "decompose needs levels >= 1");
    if (levels > 30) throw Error(ErrorKind::InvalidArgument, "decompose supports at most 30 levels");
    const std::int64_t step = std::int64_t{1} << levels;
    const auto size = static_cast<std::int64_t>(f.size());
    const std::string where = "window of " + std::to_string(size) + " samples at first index " +
                              std::to_string(f.first_index()) + ", level " + std::to_string(f.level());
    if (periodic(f)) {
        if (size % step != 0) {
            throw Error(ErrorKind::IncompatibleWindow,
                        where + ": periodic length must be divisible by 2^" + std::to_string(levels));
        }
    } else if (size < step + 1 || (size - 1) % step != 0) {
        throw Error(ErrorKind::IncompatibleWindow,
                    where + ": length must be m 2^" + std::to_string(levels) + " + 1 with m >= 1");
    }
    if (f.first_index() % step != 0) {
        throw Error(ErrorKind::IncompatibleWindow,
                    where + ": first index must be divisible by 2^" + std::to_string(levels));
    }
    if (f.level() < levels) {
        throw Error(ErrorKind::IncompatibleWindow, where + ": grid level is below the number of levels");
    }
}

struct Split {
    Sequence coarse;
    std::vector<double> odds;
};

Split split(const Sequence& cur) {
    std::vector<double> ev;
    std::vector<double> od;
    for (std::size_t k = 0; k < cur.size(); ++k) (k % 2 == 0 ? ev : od).push_back(cur[k]);
    return {Sequence(std::move(ev), cur.first_index() / 2, cur.level() - 1, cur.boundary()), std::move(od)};
}

Sequence merge(const Sequence& coarse, const std::vector<double>& odds) {
    std::vector<double> out;
    out.reserve(coarse.size() + odds.size());
    for (std::size_t k = 0; k < coarse.size(); ++k) {
        out.push_back(coarse[k]);
        if (k < odds.size()) out.push_back(odds[k]);
    }
    return Sequence(std::move(out), 2 * coarse.first_index(), coarse.level() + 1, coarse.boundary());
}

void encode(const Sequence& coarse, const std::vector<double>& odds, const std::vector<double>& pred,
            Channel& ch) {
    std::vector<double> hi(odds.size());
    std::vector<double> lo(odds.size());
    for (std::size_t k = 0; k < odds.size(); ++k) {
        const auto [s, e] = two_sum(odds[k], -pred[k]);
        hi[k] = s;
        lo[k] = e;
    }
    ch.details.push_back(Sequence(std::move(hi), coarse.first_index(), coarse.level(), coarse.boundary()));
    ch.residuals.push_back(std::move(lo));
}

std::vector<double> decode(const std::vector<double>& pred, const Sequence& hi, const std::vector<double>& lo) {
    std::vector<double> out(pred.size());
    for (std::size_t k = 0; k < pred.size(); ++k) {
        const auto [s, e] = two_sum(pred[k], hi[k]);
        out[k] = s + (e + lo[k]);
    }
    return out;
}

std::size_t expected_detail_size(const Sequence& coarse, int k) {
    const std::size_t scale = std::size_t{1} << k;
    return periodic(coarse) ? coarse.size() * scale : (coarse.size() - 1) * scale;
}

void validate_channel(const Channel& ch, int levels, const char* what) {
    auto corrupt = [&](const std::string& msg) {
        return Error(ErrorKind::CorruptPyramid, std::string(what) + " channel: " + msg);
    };
    if (static_cast<int>(ch.details.size()) != levels || static_cast<int>(ch.residuals.size()) != levels) {
        throw corrupt("expected " + std::to_string(levels) + " detail levels, found " +
                      std::to_string(ch.details.size()));
    }
    if (!periodic(ch.coarse) && ch.coarse.size() < 2) throw corrupt("coarse window needs two samples");
    for (int k = 0; k < levels; ++k) {
        const auto& d = ch.details[static_cast<std::size_t>(k)];
        const std::size_t want = expected_detail_size(ch.coarse, k);
        if (d.size() != want) {
            throw corrupt("details[" + std::to_string(k) + "] has " + std::to_string(d.size()) +
                          " entries, expected " + std::to_string(want));
        }
        if (ch.residuals[static_cast<std::size_t>(k)].size() != want) {
            throw corrupt("residuals[" + std::to_string(k) + "] has the wrong length");
        }
        if (d.first_index() != ch.coarse.first_index() * (std::int64_t{1} << k) ||
            d.level() != ch.coarse.level() + k || d.boundary() != ch.coarse.boundary()) {
            throw corrupt("details[" + std::to_string(k) + "] window does not match the coarse window");
        }
    }
}

void validate(const Pyramid& p) {
    if (p.levels < 1) throw Error(ErrorKind::CorruptPyramid, "pyramid needs at least one level");
    validate_channel(p.f, p.levels, "f");
    if (p.scheme.is_spherical() != p.x.has_value()) {
        throw Error(ErrorKind::CorruptPyramid, "abscissa channel present iff the scheme is spherical");
    }
    if (p.x) {
        validate_channel(*p.x, p.levels, "x");
        if (p.x->coarse.size() != p.f.coarse.size() || p.x->coarse.first_index() != p.f.coarse.first_index()) {
            throw Error(ErrorKind::CorruptPyramid, "x and f channels disagree on the coarse window");
        }
    }
}

}  // namespace

Pyramid decompose(const SchemeSpec& scheme, const Sequence& fine, int levels) {
    if (scheme.is_spherical()) return decompose_points(scheme, PointPair2D::from_graph(fine), levels);
    check_window(fine, levels);
    std::vector<Split> stages;
    Sequence cur = fine;
    for (int s = 0; s < levels; ++s) {
        stages.push_back(split(cur));
        cur = stages.back().coarse;
    }
    Channel ch{cur, {}, {}};
    for (int k = 0; k < levels; ++k) {
        const auto& st = stages[static_cast<std::size_t>(levels - 1 - k)];
        encode(st.coarse, st.odds, predict_odd(scheme, st.coarse), ch);
    }
    return Pyramid{scheme, levels, std::move(ch), std::nullopt, 0.0};
}

Pyramid decompose_points(const SchemeSpec& scheme, const PointPair2D& fine, int levels) {
    if (!scheme.is_spherical()) throw Error(ErrorKind::InvalidArgument, scheme.name() + " decomposes scalar data");
    check_window(fine.f, levels);
    std::vector<std::pair<Split, Split>> stages;
    Sequence cx = fine.x;
    Sequence cf = fine.f;
    for (int s = 0; s < levels; ++s) {
        stages.emplace_back(split(cx), split(cf));
        cx = stages.back().first.coarse;
        cf = stages.back().second.coarse;
    }
    Channel chx{cx, {}, {}};
    Channel chf{cf, {}, {}};
    for (int k = 0; k < levels; ++k) {
        const auto& [sx, sf] = stages[static_cast<std::size_t>(levels - 1 - k)];
        const auto [px, pf] = predict_odd_points(scheme, PointPair2D(sx.coarse, sf.coarse, fine.x_period));
        encode(sx.coarse, sx.odds, px, chx);
        encode(sf.coarse, sf.odds, pf, chf);
    }
    return Pyramid{scheme, levels, std::move(chf), std::move(chx), fine.x_period};
}

Sequence reconstruct(const Pyramid& p) {
    validate(p);
    if (p.x) return reconstruct_points(p).f;
    Sequence cur = p.f.coarse;
    for (int k = 0; k < p.levels; ++k) {
        const auto i = static_cast<std::size_t>(k);
        cur = merge(cur, decode(predict_odd(p.scheme, cur), p.f.details[i], p.f.residuals[i]));
    }
    return cur;
}

PointPair2D reconstruct_points(const Pyramid& p) {
    validate(p);
    if (!p.x) throw Error(ErrorKind::InvalidArgument, "pyramid carries no abscissa channel");
    PointPair2D cur(p.x->coarse, p.f.coarse, p.x_period);
    for (int k = 0; k < p.levels; ++k) {
        const auto i = static_cast<std::size_t>(k);
        const auto [px, pf] = predict_odd_points(p.scheme, cur);
        cur = PointPair2D(merge(cur.x, decode(px, p.x->details[i], p.x->residuals[i])),
                          merge(cur.f, decode(pf, p.f.details[i], p.f.residuals[i])), p.x_period);
    }
    return cur;
}

ThresholdResult threshold(const Pyramid& p, double tol) {
    if (!(tol >= 0.0)) throw Error(ErrorKind::InvalidArgument, "threshold tolerance must be >= 0");
    ThresholdResult out{p, 0};
    auto apply = [&](Channel& ch) {
        for (std::size_t k = 0; k < ch.details.size(); ++k) {
            std::vector<double> v = ch.details[k].values();
            for (std::size_t i = 0; i < v.size(); ++i) {
                if (std::abs(v[i]) <= tol) {
                    v[i] = 0.0;
                    ch.residuals[k][i] = 0.0;
                    ++out.zeroed;
                }
            }
            ch.details[k] = ch.details[k].with_values(std::move(v));
        }
    };
    apply(out.pyramid.f);
    if (out.pyramid.x) apply(*out.pyramid.x);
    return out;
}

namespace {

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

struct Deviations {
    double coarse = 0.0;
    std::vector<double> detail;  // per k
    std::vector<double> level;   // per j = 0..L
};

// f^j is the even subsample of f^L with stride 2^{L-j}.
std::vector<double> subsample(const Sequence& fine, int stride_log2) {
    std::vector<double> out;
    const std::size_t stride = std::size_t{1} << stride_log2;
    for (std::size_t k = 0; k < fine.size(); k += stride) out.push_back(fine[k]);
    return out;
}

std::vector<double> detail_values(const Channel& ch, std::size_t k) {
    std::vector<double> v = ch.details[k].values();
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += ch.residuals[k][i];
    return v;
}

Deviations deviations(const Pyramid& a, const Pyramid& b, const Sequence& fa, const Sequence& fb) {
    Deviations d;
    d.coarse = max_abs_diff(a.f.coarse.values(), b.f.coarse.values());
    for (std::size_t k = 0; k < a.f.details.size(); ++k) {
        d.detail.push_back(max_abs_diff(detail_values(a.f, k), detail_values(b.f, k)));
    }
    for (int j = 0; j <= a.levels; ++j) {
        d.level.push_back(max_abs_diff(subsample(fa, a.levels - j), subsample(fb, a.levels - j)));
    }
    return d;
}

struct TrialResult {
    double s1 = 0.0, s2 = 0.0, s3 = 0.0, fine = 0.0, detail = 0.0;
};

void accumulate(const Deviations& d, TrialResult& r) {
    const int L = static_cast<int>(d.detail.size());
    double partial = d.coarse;
    for (int j = 1; j <= L; ++j) {
        partial += d.detail[static_cast<std::size_t>(j - 1)];
        const double fj = d.level[static_cast<std::size_t>(j)];
        if (partial > 0.0) r.s1 = std::max(r.s1, fj / partial);
        if (fj > 0.0) {
            r.s2 = std::max(r.s2, d.coarse / fj);
            for (int k = 0; k < j; ++k) r.s3 = std::max(r.s3, d.detail[static_cast<std::size_t>(k)] / fj);
        }
    }
}

}  // namespace

StabilityReport stability_probe(const SchemeSpec& scheme, const Sequence& fine, int levels,
                                double perturbation_scale, int trials, std::uint64_t seed) {
    if (trials < 1) throw Error(ErrorKind::InvalidArgument, "stability_probe needs trials >= 1");
    if (!(perturbation_scale > 0.0)) throw Error(ErrorKind::InvalidArgument, "perturbation scale must be positive");
    const Pyramid base = decompose(scheme, fine, levels);
    std::vector<TrialResult> results(static_cast<std::size_t>(trials));
    for_each_trial(trials, [&](int t) {
        std::mt19937_64 rng(trial_seed(seed, static_cast<std::uint64_t>(t)));
        std::uniform_real_distribution<double> u(-perturbation_scale, perturbation_scale);
        TrialResult& r = results[static_cast<std::size_t>(t)];

        std::vector<double> v = fine.values();
        for (auto& x : v) x += u(rng);
        const Sequence fa = fine.with_values(std::move(v));
        const Pyramid pa = decompose(scheme, fa, levels);
        const Deviations da = deviations(base, pa, fine, fa);
        accumulate(da, r);
        for (double x : da.detail) r.detail = std::max(r.detail, x);

        Pyramid pb = base;
        std::size_t total = pb.f.coarse.size();
        for (const auto& d : pb.f.details) total += d.size();
        std::size_t pick = std::uniform_int_distribution<std::size_t>(0, total - 1)(rng);
        const double delta = u(rng);
        if (pick < pb.f.coarse.size()) {
            std::vector<double> c = pb.f.coarse.values();
            c[pick] += delta;
            pb.f.coarse = pb.f.coarse.with_values(std::move(c));
        } else {
            pick -= pb.f.coarse.size();
            for (auto& d : pb.f.details) {
                if (pick < d.size()) {
                    std::vector<double> c = d.values();
                    c[pick] += delta;
                    d = d.with_values(std::move(c));
                    break;
                }
                pick -= d.size();
            }
        }
        const Sequence fb = reconstruct(pb);
        const Deviations db = deviations(base, pb, fine, fb);
        accumulate(db, r);
        r.fine = std::max(r.fine, db.level.back());
    });
    StabilityReport rep;
    rep.trials = trials;
    rep.perturbation_scale = perturbation_scale;
    rep.seed = seed;
    for (const auto& r : results) {
        rep.ratio_s1 = std::max(rep.ratio_s1, r.s1);
        rep.ratio_s2 = std::max(rep.ratio_s2, r.s2);
        rep.ratio_s3 = std::max(rep.ratio_s3, r.s3);
        rep.max_fine_deviation = std::max(rep.max_fine_deviation, r.fine);
        rep.max_detail_deviation = std::max(rep.max_detail_deviation, r.detail);
    }
    return rep;
}

}  // namespace nlsd
