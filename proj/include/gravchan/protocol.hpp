#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "gravchan/channel.hpp"
#include "gravchan/interferometer.hpp"

namespace gravchan {

/// Probabilities for one transfer run. The p_joint_* values are joint with the
/// velocity selection succeeding, not conditioned on it.
struct TransferOutcome {
    double p_select = 0.0;
    double p_joint_g = 0.0;
    double p_joint_e = 0.0;
    /// P(remote = g | selected). Flat at 1/2 for the Bell channel; 0 if nothing
    /// passes selection.
    double p_cond_g = 0.0;
    /// |a|^2 (1 + cos delta_phi) / 2
    double p_closed_form = 0.0;
    double delta_phi_used = 0.0;
};

/// Sends the probe (last atom) through the interferometer, selects momentum
/// index 0 and reads out `remote_atom_index` (0-based; must not be the probe).
TransferOutcome run_transfer(const ChannelSpec& spec, const InterferometerParams& params,
                             std::size_t remote_atom_index = 0,
                             std::optional<double> delta_phi_override = std::nullopt);

struct FringePoint {
    double delta_phi;
    TransferOutcome outcome;
};

/// One run_transfer per grid value, evaluated in parallel; output order follows
/// the grid.
std::vector<FringePoint> fringe_scan(const ChannelSpec& spec, const InterferometerParams& params,
                                     std::span<const double> delta_phi_grid,
                                     std::size_t remote_atom_index = 0);

/// Ground-state probability of a lone atom after the pulse-by-pulse sequence.
double direct_measurement(const InterferometerParams& params,
                          std::optional<double> delta_phi_override = std::nullopt);

std::vector<double> direct_scan(const InterferometerParams& params,
                                std::span<const double> delta_phi_grid);

/// Inverts p = |a|^2 (1 + cos delta_phi) / 2 on the principal branch [0, pi].
/// Values within 1e-9 outside [0, |a|^2] are clamped; anything further throws
/// OutOfRange. Unwrapping across fringes is left to the caller.
double estimate_phase(double p_observed, double amplitude_sq);

}  // namespace gravchan
