#pragma once

#include "nlsubdiv/coeff_mask.hpp"

namespace nlsd {

/// Weights of the degree-(points-1) Lagrange interpolant on the nodes
/// {n+leftmost_offset, ..., n+leftmost_offset+points-1}, evaluated at n+1/2.
/// leftmost_offset = 0 is the fully right-uncentered rule, 1 - points/2 the
/// centered one.
CoeffMask lagrange_midpoint_coeffs(int points, int leftmost_offset);

/// (f_n + f_{n+1}) / 2.
CoeffMask two_point_midpoint();

/// Perturbation F_P of the fully right-uncentered P-point rule relative to the
/// two-point rule, over the difference basis
///   D^{(k+1)/2} f_{n+(k+1)/2}  (k odd),   D^{k/2} f_{n+k/2+1}  (k even),
/// k = 1..P-2. Basis element k is the only one reaching sample n+k+1, so the
/// decomposition is triangular and exact. Valid for 4 <= points <= 12.
CoeffMask uncentered_perturbation(int points);

/// Scheme that S_P is written as a perturbation of: P-2 for even P, P-1 for odd P.
int step_base(int points);

/// S_P - S_{step_base(P)} over the difference basis (4 <= points <= 12).
CoeffMask step_perturbation(int points);

/// Sum of step perturbations along 2 -> ... -> P following step_base.
CoeffMask chained_perturbation(int points);

/// Verbatim transcription of the printed closed-form displays for F_P (the
/// odd-P display's undefined N is read as P). Kept only to report where the
/// printed coefficients disagree with the exact decomposition.
CoeffMask printed_closed_form_perturbation(int points);

/// Verbatim transcription of the printed even/odd step recursions.
CoeffMask printed_step_perturbation(int points);

/// Terms of `actual - expected` that do not vanish.
std::vector<MaskTerm> mask_discrepancies(const CoeffMask& actual, const CoeffMask& expected);

}  // namespace nlsd
