#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace nlsd {

/// power_p(x, y) = sign * |x+y|/2 * (1 - |(x-y)/(x+y)|^p), and 0 whenever xy <= 0.
/// Evaluated as sign * min(|x|,|y|) * (1 + q + ... + q^{p-1}) with q = |x-y|/|x+y|,
/// which is the same quantity without the cancellation in 1 - q^p.
double power_mean(int p, double x, double y);

/// Term-by-term transcription of the defining formula (reference for tests).
double power_mean_direct(int p, double x, double y);

/// Violation counts of the five mean properties over random pairs:
/// symmetry, zero when xy <= 0, oddness, |m| <= max(|x|,|y|), |m| <= p min(|x|,|y|).
struct PowerMeanProperties {
    static constexpr std::array<std::string_view, 5> names{"symmetric", "zero_if_xy_nonpositive", "odd",
                                                           "bounded_by_max", "bounded_by_p_min"};
    int p = 0;
    int pairs = 0;
    std::array<int, 5> violations{};

    bool ok() const noexcept { return violations == std::array<int, 5>{}; }
};

/// Pairs have independent signs and magnitudes log-uniform in [1e-12, 1e3].
PowerMeanProperties check_power_mean_properties(int p, int pairs, std::uint64_t seed, double rel_tol = 1e-12);

}  // namespace nlsd
