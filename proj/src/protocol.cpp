#include "gravchan/protocol.hpp"

#include <algorithm>
#include <cmath>

#include "gravchan/errors.hpp"
#include "gravchan/parallel.hpp"

namespace gravchan {

namespace {

constexpr double kPhaseInversionSlack = 1e-9;

struct Readout {
    double p_select;
    double p_joint_g;
    double p_joint_e;
};

Readout read_out(const PureState& channel, const InterferometerParams& params, double dphi,
                 std::size_t remote) {
    const PureState evolved = apply_composite(channel, params, dphi);
    const auto selected = project(evolved, [](const BasisVector& k) { return k.momentum == 0; });
    if (selected.state.empty()) return {0.0, 0.0, 0.0};
    const auto spins = measure_spin(selected.state, remote);
    return {selected.probability, selected.probability * spins.g, selected.probability * spins.e};
}

void check_grid(std::span<const double> grid) {
    if (grid.empty()) throw InvalidArgument("delta_phi grid is empty");
    for (double v : grid) {
        if (!std::isfinite(v)) throw InvalidArgument("delta_phi grid has a non-finite value");
    }
}

}  // namespace

TransferOutcome run_transfer(const ChannelSpec& spec, const InterferometerParams& params,
                             std::size_t remote_atom_index,
                             std::optional<double> delta_phi_override) {
    validate(spec);
    const std::size_t probe = atom_count(spec) - 1;
    if (remote_atom_index >= probe) {
        throw IndexOutOfRange("remote atom " + std::to_string(remote_atom_index) +
                              " must be a non-probe atom below index " + std::to_string(probe));
    }
    const double dphi = delta_phi_override.value_or(total_phase(params));

    const ChannelState channel = make_channel(spec);
    Readout r{};
    if (const auto* pure = std::get_if<PureState>(&channel)) {
        r = read_out(*pure, params, dphi, remote_atom_index);
    } else {
        for (const auto& m : std::get<Ensemble>(channel).members()) {
            const Readout part = read_out(m.state, params, dphi, remote_atom_index);
            r.p_select += m.weight * part.p_select;
            r.p_joint_g += m.weight * part.p_joint_g;
            r.p_joint_e += m.weight * part.p_joint_e;
        }
    }

    TransferOutcome out;
    out.p_select = r.p_select;
    out.p_joint_g = r.p_joint_g;
    out.p_joint_e = r.p_joint_e;
    out.p_cond_g = r.p_select > 0.0 ? r.p_joint_g / r.p_select : 0.0;
    out.p_closed_form = ground_branch_weight(spec) * ground_probability(dphi);
    out.delta_phi_used = dphi;
    return out;
}

std::vector<FringePoint> fringe_scan(const ChannelSpec& spec, const InterferometerParams& params,
                                     std::span<const double> delta_phi_grid,
                                     std::size_t remote_atom_index) {
    check_grid(delta_phi_grid);
    validate(spec);
    std::vector<FringePoint> points(delta_phi_grid.size());
    parallel_for(delta_phi_grid.size(), [&](std::size_t i) {
        const double dphi = delta_phi_grid[i];
        points[i] = {dphi, run_transfer(spec, params, remote_atom_index, dphi)};
    });
    return points;
}

double direct_measurement(const InterferometerParams& params,
                          std::optional<double> delta_phi_override) {
    const PureState atom = PureState::basis({{Spin::G}, 0});
    return measure_spin(run_pulse_sequence(atom, params, delta_phi_override), 0).g;
}

std::vector<double> direct_scan(const InterferometerParams& params,
                                std::span<const double> delta_phi_grid) {
    check_grid(delta_phi_grid);
    std::vector<double> out(delta_phi_grid.size());
    parallel_for(delta_phi_grid.size(),
                 [&](std::size_t i) { out[i] = direct_measurement(params, delta_phi_grid[i]); });
    return out;
}

double estimate_phase(double p_observed, double amplitude_sq) {
    if (!(amplitude_sq > 0.0) || amplitude_sq > 1.0 + kPhaseInversionSlack) {
        throw OutOfRange("amplitude_sq must lie in (0, 1]");
    }
    if (!std::isfinite(p_observed) || p_observed < -kPhaseInversionSlack ||
        p_observed > amplitude_sq + kPhaseInversionSlack) {
        throw OutOfRange("observed probability " + std::to_string(p_observed) +
                         " outside [0, " + std::to_string(amplitude_sq) + "]");
    }
    const double p = std::clamp(p_observed, 0.0, amplitude_sq);
    return std::acos(std::clamp(2.0 * p / amplitude_sq - 1.0, -1.0, 1.0));
}

}  // namespace gravchan
