#include "nlsubdiv/spectral.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>

namespace nlsd {

namespace {

double spectral_radius(const Eigen::MatrixXd& m) {
    if (m.rows() == 1) return std::abs(m(0, 0));
    Eigen::EigenSolver<Eigen::MatrixXd> es(m, false);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

double inf_norm(const Eigen::MatrixXd& m) {
    return m.cwiseAbs().rowwise().sum().maxCoeff();
}

// Visits every product A_{e_k} ... A_{e_1} of length 1..depth.
template <class Visit>
void for_each_product(const std::array<Eigen::MatrixXd, 2>& a, int depth, Visit&& visit) {
    std::vector<Eigen::MatrixXd> stack(static_cast<std::size_t>(depth + 1), Eigen::MatrixXd::Identity(a[0].rows(), a[0].cols()));
    auto rec = [&](auto&& self, int k) -> void {
        for (int e = 0; e < 2; ++e) {
            stack[static_cast<std::size_t>(k)].noalias() = a[static_cast<std::size_t>(e)] * stack[static_cast<std::size_t>(k - 1)];
            visit(stack[static_cast<std::size_t>(k)], k);
            if (k < depth) self(self, k + 1);
        }
    };
    rec(rec, 1);
}

}  // namespace

std::array<Eigen::MatrixXd, 2> coset_matrices(const DifferenceMask& mask) {
    const auto& b = mask.coefficients;
    const int n = std::max<int>(1, static_cast<int>(b.size()) - 1);
    std::array<Eigen::MatrixXd, 2> a{Eigen::MatrixXd::Zero(n, n), Eigen::MatrixXd::Zero(n, n)};
    for (int e = 0; e < 2; ++e) {
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                const int idx = 2 * i - j + e;
                if (idx >= 0 && idx < static_cast<int>(b.size())) a[static_cast<std::size_t>(e)](i, j) = to_double(b[static_cast<std::size_t>(idx)]);
            }
        }
    }
    return a;
}

SpectralReport iteration_spectral_radius(const SchemeSpec& scheme, DiffOrder order, SpectralOptions opts) {
    if (opts.eig_depth < 1 || opts.norm_depth < 1 || opts.eig_depth > 24 || opts.norm_depth > 24) {
        throw Error(ErrorKind::InvalidArgument, "product depths must lie in [1, 24]");
    }
    SpectralReport rep;
    rep.scheme = scheme.name();
    rep.order = order;
    rep.mask = difference_mask(scheme, order);
    rep.matrices = coset_matrices(rep.mask);
    rep.single_radii = {spectral_radius(rep.matrices[0]), spectral_radius(rep.matrices[1])};
    rep.eig_depth = opts.eig_depth;
    rep.norm_depth = opts.norm_depth;

    for_each_product(rep.matrices, opts.eig_depth, [&](const Eigen::MatrixXd& p, int k) {
        const double r = std::pow(spectral_radius(p), 1.0 / k);
        if (r > rep.rho + 1e-12) {
            rep.rho = r;
            rep.iterations = k;
        }
    });

    std::vector<double> worst(static_cast<std::size_t>(opts.norm_depth + 1), 0.0);
    for_each_product(rep.matrices, opts.norm_depth, [&](const Eigen::MatrixXd& p, int k) {
        auto& w = worst[static_cast<std::size_t>(k)];
        w = std::max(w, inf_norm(p));
    });
    rep.joint_norm_bound = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= opts.norm_depth; ++k) {
        rep.joint_norm_bound = std::min(rep.joint_norm_bound, std::pow(worst[static_cast<std::size_t>(k)], 1.0 / k));
    }
    return rep;
}

SpectralReport best_spectral_radius(const SchemeSpec& scheme, SpectralOptions opts) {
    const auto orders = factoring_orders(scheme);
    if (orders.empty()) {
        throw Error(ErrorKind::NotDifferenceRepresentable, scheme.name() + ": no D^l factors through the scheme");
    }
    SpectralOptions quick = opts;
    quick.norm_depth = 1;
    int best = orders.front();
    double best_rho = std::numeric_limits<double>::infinity();
    for (int l : orders) {
        const double r = iteration_spectral_radius(scheme, DiffOrder::iterated(l), quick).rho;
        if (r <= best_rho + 1e-9) {
            best_rho = r;
            best = l;
        }
    }
    return iteration_spectral_radius(scheme, DiffOrder::iterated(best), opts);
}

Figure1Result figure1_experiment(int points) {
    std::vector<double> v(257);
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = std::ldexp(static_cast<double>(k), -8) >= 0.5 ? 1.0 : 0.0;
    return figure1_experiment(points, Sequence(std::move(v), 0, 8, Boundary::ConstantExtend), 5);
}

Figure1Result figure1_experiment(int points, const Sequence& initial, int levels) {
    if (levels < 1) throw Error(ErrorKind::InvalidArgument, "figure1_experiment needs levels >= 1");
    const auto scheme = SchemeSpec::uncentered_lagrange(points);
    Figure1Result r;
    r.points = points;
    Sequence cur = initial;
    for (int j = 0; j <= levels; ++j) {
        if (j > 0) cur = refine_once(scheme, cur);
        r.levels.push_back(cur);
        r.diff_norms.push_back(sup_norm(first_diff(cur)));
    }
    r.sup_norm = sup_norm(cur);
    r.growth_factor = r.diff_norms.front() > 0.0 ? r.diff_norms.back() / r.diff_norms.front() : 0.0;
    return r;
}

}  // namespace nlsd
