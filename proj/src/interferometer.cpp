#include "gravchan/interferometer.hpp"

#include <cmath>
#include <numbers>

#include "gravchan/errors.hpp"

namespace gravchan {

namespace {

constexpr Complex kI{0.0, 1.0};

Complex phase_factor(double theta) { return std::polar(1.0, theta); }

}  // namespace

void InterferometerParams::validate() const {
    const bool finite = std::isfinite(timing.T) && std::isfinite(timing.k) &&
                        std::isfinite(gravity.g0) && std::isfinite(gravity.gamma) &&
                        std::isfinite(phases.phi1) && std::isfinite(phases.phi2) &&
                        std::isfinite(phases.phi3);
    if (!finite) throw InvalidArgument("interferometer parameters must be finite");
    if (timing.T < 0.0) throw InvalidArgument("T must be >= 0");
    if (timing.k <= 0.0) throw InvalidArgument("k must be > 0");
    if (gravity.g0 < 0.0) throw InvalidArgument("g0 must be >= 0");
}

double total_phase(const PulseTiming& timing, const GravityModel& gravity,
                   bool gradient_correction) {
    const double t2 = timing.T * timing.T;
    const double leading = timing.k * gravity.g0 * t2;
    if (!gradient_correction) return leading;
    return (1.0 + (7.0 / 12.0) * gravity.gamma * t2) * leading;
}

double total_phase(const InterferometerParams& params) {
    return total_phase(params.timing, params.gravity, params.gradient_correction);
}

CompositeCoefficients composite_coefficients(const LaserPhases& p, double delta_phi) {
    const Complex down = phase_factor(-delta_phi);
    const Complex up = phase_factor(delta_phi);
    return {
        -0.5 * phase_factor(-p.phi2 + p.phi1) * (1.0 + down),
        0.5 * kI * phase_factor(-p.phi2 + p.phi1 + p.phi3) * (1.0 - down),
        0.5 * kI * phase_factor(p.phi2 - p.phi1 - p.phi3) * (1.0 - up),
        -0.5 * phase_factor(p.phi2 - p.phi1) * (1.0 + up),
    };
}

PureState apply_composite(const PureState& state, const InterferometerParams& params,
                          std::optional<double> delta_phi_override) {
    const double dphi = delta_phi_override.value_or(total_phase(params));
    const auto c = composite_coefficients(params.phases, dphi);
    BasisOperator op(state.probe_index(), true);
    op.on(Spin::G, {{c.a1, Spin::G, 0}, {c.a2, Spin::E, +1}});
    op.on(Spin::E, {{c.b1, Spin::G, -1}, {c.b2, Spin::E, 0}});
    return apply(op, state);
}

BasisOperator pulse(PulseKind kind, double phase, std::size_t probe_index) {
    BasisOperator op(probe_index, true);
    const Complex up = -kI * phase_factor(phase);
    const Complex down = -kI * phase_factor(-phase);
    if (kind == PulseKind::BeamSplitter) {
        const double h = std::numbers::sqrt2 / 2.0;
        op.on(Spin::G, {{h, Spin::G, 0}, {h * up, Spin::E, +1}});
        op.on(Spin::E, {{h, Spin::E, 0}, {h * down, Spin::G, -1}});
    } else {
        op.on(Spin::G, {{up, Spin::E, +1}});
        op.on(Spin::E, {{down, Spin::G, -1}});
    }
    return op;
}

BasisOperator arm_phase(Spin spin, double theta, std::size_t probe_index) {
    BasisOperator op(probe_index, true);
    op.on(Spin::G, {{spin == Spin::G ? phase_factor(theta) : 1.0, Spin::G, 0}});
    op.on(Spin::E, {{spin == Spin::E ? phase_factor(theta) : 1.0, Spin::E, 0}});
    return op;
}

double free_flight_phase(const LaserPhases& p, double delta_phi) {
    return delta_phi - (p.phi1 - 2.0 * p.phi2 + p.phi3);
}

PureState run_pulse_sequence(const PureState& state, const InterferometerParams& params,
                             std::optional<double> delta_phi_override) {
    const double dphi = delta_phi_override.value_or(total_phase(params));
    const double theta = free_flight_phase(params.phases, dphi);
    const std::size_t probe = state.probe_index();

    PureState s = apply(arm_phase(Spin::E, theta, probe), state);
    s = apply(pulse(PulseKind::BeamSplitter, params.phases.phi1, probe), s);
    s = apply(arm_phase(Spin::E, theta / 2.0, probe), s);
    s = apply(pulse(PulseKind::Mirror, params.phases.phi2, probe), s);
    s = apply(arm_phase(Spin::G, theta / 2.0, probe), s);
    return apply(pulse(PulseKind::BeamSplitter, params.phases.phi3, probe), s);
}

double ground_probability(double delta_phi) { return 0.5 * (1.0 + std::cos(delta_phi)); }

}  // namespace gravchan
