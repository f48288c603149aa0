#pragma once

#include <cstddef>
#include <string>

namespace gravchan {

inline constexpr std::size_t kDefaultEntropyGrid = 1024;

struct OptimizationResult {
    double a_star = 0.0;
    double b_star = 0.0;
    double objective_value = 0.0;
    std::size_t iterations = 0;
    /// Final bracket; collapses to a_star for closed-form results.
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
    std::string method;
};

/// Shannon entropy in bits of {P1, P2, 1 - P1 - P2} with
/// P1 = (1 + cos)/2 |a|^2 and P2 = (1 - cos)/2 |b|^2. The third event is the
/// probe failing velocity selection.
double outcome_entropy(double a_abs, double delta_phi);

/// Mean of outcome_entropy over `grid_size` equally spaced phases in [0, 2 pi).
/// Exactly symmetric under |a| <-> |b| for even grid sizes.
double fringe_averaged_entropy(double a_abs, std::size_t grid_size = kDefaultEntropyGrid);

/// Golden-section maximization of fringe_averaged_entropy on [0, 1] down to a
/// bracket narrower than `tolerance`. A 33-point pre-scan throws Multimodal if
/// the objective is not single-peaked.
OptimizationResult optimize_entropy(double tolerance,
                                    std::size_t grid_size = kDefaultEntropyGrid);

/// sqrt(|a| sqrt(1 - |a|^2)), the general-channel phase-noise ratio.
double png_ratio(double a_abs);

/// Closed-form extremum of png_ratio: |a| = |b| = 1/sqrt(2). This is the
/// maximum of the ratio on [0, 1].
OptimizationResult png_ratio_extremum();

}  // namespace gravchan
