#pragma once

#include "nlsubdiv/contraction.hpp"

#include <Eigen/Dense>

#include <array>

namespace nlsd {

struct SpectralOptions {
    int eig_depth = 10;   // longest product whose eigenvalues are examined
    int norm_depth = 20;  // longest product in the joint norm bound
};

struct SpectralReport {
    std::string scheme;
    DiffOrder order;
    DifferenceMask mask;
    std::array<Eigen::MatrixXd, 2> matrices;  // (A_e)_{ij} = b_{2i-j+e}
    std::array<double, 2> single_radii{0.0, 0.0};
    double rho = 0.0;               // max over products P of length k <= eig_depth of rho(P)^{1/k}
    int iterations = 0;             // product length attaining rho
    double joint_norm_bound = 0.0;  // min over k <= norm_depth of max ||P||^{1/k}
    int eig_depth = 0;
    int norm_depth = 0;
};

/// Coset matrices of the difference scheme: size N = len(b) - 1 (at least 1).
std::array<Eigen::MatrixXd, 2> coset_matrices(const DifferenceMask& mask);

SpectralReport iteration_spectral_radius(const SchemeSpec& scheme, DiffOrder order, SpectralOptions opts = {});

/// Report at the factoring order with the smallest rho; ties go to the largest l.
SpectralReport best_spectral_radius(const SchemeSpec& scheme, SpectralOptions opts = {});

struct Figure1Result {
    int points = 0;
    std::vector<Sequence> levels;     // f^8 .. f^13
    std::vector<double> diff_norms;   // ||d f^j|| for j = 8..13
    double sup_norm = 0.0;            // ||f^13||
    double growth_factor = 0.0;       // ||d f^13|| / ||d f^8||
};

/// f^8_k = 1 if k 2^-8 >= 1/2 else 0, k = 0..256 (ConstantExtend), refined to
/// level 13 by the fully uncentered `points`-point scheme.
Figure1Result figure1_experiment(int points);
Figure1Result figure1_experiment(int points, const Sequence& initial, int levels = 5);

}  // namespace nlsd
