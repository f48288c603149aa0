#pragma once

#include <optional>

#include "gravchan/state.hpp"

namespace gravchan {

struct GravityModel {
    double g0 = 9.8;    ///< m/s^2
    double gamma = 0.0; ///< vertical gradient, s^-2
};

struct PulseTiming {
    double T = 0.0; ///< interrogation time between pulses, s
    double k = 1.0; ///< effective wavevector, 1/m
};

/// Initial phases of the pi/2, pi, pi/2 pulses. Kept unreduced.
struct LaserPhases {
    double phi1 = 0.0;
    double phi2 = 0.0;
    double phi3 = 0.0;
};

struct InterferometerParams {
    PulseTiming timing;
    GravityModel gravity;
    LaserPhases phases;
    bool gradient_correction = false;

    /// Throws InvalidArgument on T < 0, k <= 0, g0 < 0 or non-finite input.
    void validate() const;
};

/// Closed-loop transfer map of the full pi/2 - pi - pi/2 sequence:
///   |g,n>   -> a1 |g,n>   + a2 |e,n+1>
///   |e,n>   -> b1 |g,n-1> + b2 |e,n>
struct CompositeCoefficients {
    Complex a1, a2, b1, b2;
};

/// k g0 T^2, optionally times (1 + 7/12 gamma T^2). Terms of order T^3 and up
/// are not modelled.
double total_phase(const PulseTiming& timing, const GravityModel& gravity,
                   bool gradient_correction);
double total_phase(const InterferometerParams& params);

CompositeCoefficients composite_coefficients(const LaserPhases& phases, double delta_phi);

/// Applies the closed-form interferometer map to the probe atom.
/// `delta_phi_override` replaces total_phase(params) when set.
PureState apply_composite(const PureState& state, const InterferometerParams& params,
                          std::optional<double> delta_phi_override = std::nullopt);

enum class PulseKind { BeamSplitter, Mirror };

/// Resonant Raman pulse on the probe, coupling |g,n> and |e,n+1>.
BasisOperator pulse(PulseKind kind, double phase, std::size_t probe_index);

/// Phase e^{i theta} on every ket whose probe spin is `spin`.
BasisOperator arm_phase(Spin spin, double theta, std::size_t probe_index);

/// Phase accumulated between pulses on the upper arm such that the closed
/// loop phase phi1 - 2 phi2 + phi3 + free_flight equals delta_phi.
double free_flight_phase(const LaserPhases& phases, double delta_phi);

/// Pulse-by-pulse simulation of the interferometer. Equals apply_composite up
/// to the global phase e^{i free_flight_phase}.
///
/// The free-flight phase is split evenly over the two dark periods on the upper
/// arm (|e> before the mirror, |g> after it). The excited input port carries the
/// same phase, which is what puts both input columns of the closed-form map in a
/// common frame; without it the |g> and |e> columns agree only separately.
PureState run_pulse_sequence(const PureState& state, const InterferometerParams& params,
                             std::optional<double> delta_phi_override = std::nullopt);

/// (1 + cos delta_phi) / 2
double ground_probability(double delta_phi);

}  // namespace gravchan
