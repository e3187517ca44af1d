#pragma once

#include "nlsubdiv/scheme.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace nlsd {

/// The operator delta in ||delta S f|| <= c ||delta f||: a single difference
/// operator, or the joint max(||d .||, ||D^l .||) when `joint_first` is set.
struct DeltaSpec {
    DiffOrder order = DiffOrder::first();
    bool joint_first = false;

    static DeltaSpec single(DiffOrder o) { return {o, false}; }
    static DeltaSpec joint(DiffOrder o) { return {o, true}; }
    static DeltaSpec parse(const std::string& text);  // "d", "D", "D^3", "max(d,D)"

    std::string name() const;
    bool operator==(const DeltaSpec&) const = default;
};

/// Mask b of the difference scheme: delta(S f) = S_b(delta f), with
/// b(z) = a(z) / (1+z)^k, a the symbol of S, k = 1 for d and 2l for D^l.
/// coefficients[i] multiplies z^{lowest_power + i}.
struct DifferenceMask {
    DiffOrder order;
    int lowest_power = 0;
    std::vector<Rational> coefficients;
};

/// Symbol of a linear scheme: (S f)_i = sum_k a_{i-2k} f_k.
DifferenceMask scheme_symbol(const SchemeSpec& scheme);

/// Throws NotDifferenceRepresentable when (1+z)^k does not divide a(z).
DifferenceMask difference_mask(const SchemeSpec& scheme, DiffOrder order);

/// Exact l-infinity norm of delta f -> delta(S f): max over output cosets of sum |b|.
Rational linear_contraction_norm(const SchemeSpec& scheme, DiffOrder order);

/// Orders l for which D^l factors through the scheme (1 <= l <= max_l).
std::vector<int> factoring_orders(const SchemeSpec& scheme, int max_l = 12);

struct ContractionReport {
    std::string scheme;
    DeltaSpec delta;
    int steps = 1;
    double c_estimate = 0.0;
    std::optional<Rational> exact;
    int trials = 0;
    std::uint64_t seed = 0;
    std::size_t skipped = 0;
};

struct EstimatorOptions {
    int window = 64;       // samples per periodic input
    unsigned threads = 0;  // 0 = hardware concurrency
};

/// max ||delta(S^steps f)|| / ||delta f|| over `trials` inputs: a fixed battery
/// (steps, spikes, alternating signs, sinusoids, sign patterns of delta f and,
/// for linear schemes, the sign patterns attaining the exact norm) followed by
/// uniform [-1,1] samples. For the spherical scheme inputs are function graphs
/// and delta is d applied jointly to both coordinates.
ContractionReport empirical_contraction(const SchemeSpec& scheme, DeltaSpec delta, int steps, int trials,
                                        std::uint64_t seed, EstimatorOptions opts = {});

/// max ||delta(S f - S g)|| / ||delta(f - g)|| over independent pairs and small perturbations g = f + eps u.
ContractionReport lipschitz_contraction(const SchemeSpec& scheme, DeltaSpec delta, int trials,
                                        std::uint64_t seed, EstimatorOptions opts = {});

/// ||delta(S f - S g)|| / ||delta(f - g)|| for one pair; empty when delta(f - g) = 0.
std::optional<double> lipschitz_ratio(const SchemeSpec& scheme, DeltaSpec delta, const Sequence& f,
                                      const Sequence& g);

/// Empirical M in ||F(delta f)|| <= M ||delta f||, evaluated from the perturbation
/// formulas: power_p uses delta = D, WENO-6 max(d, D), spherical d on both coordinates.
double perturbation_bound(const SchemeSpec& scheme, int trials, std::uint64_t seed, EstimatorOptions opts = {});

/// Delta used by perturbation_bound and the contraction statements of each family.
DeltaSpec natural_delta(const SchemeSpec& scheme);

/// Periodic g with delta g = target (target must have zero mean; it is recentred).
std::vector<double> inverse_difference(std::vector<double> target, DiffOrder order);

}  // namespace nlsd
