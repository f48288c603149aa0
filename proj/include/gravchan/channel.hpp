#pragma once

#include <cstddef>
#include <map>
#include <numbers>
#include <variant>
#include <vector>

#include "gravchan/state.hpp"

namespace gravchan {

/// Atoms plus a single cavity mode truncated at one photon.
class CavityState {
public:
    struct Ket {
        std::vector<Spin> spins;
        int photons = 0;

        auto operator<=>(const Ket&) const = default;
        bool operator==(const Ket&) const = default;
    };
    using Amplitudes = std::map<Ket, Complex>;

    explicit CavityState(std::size_t num_atoms);

    static CavityState product(std::vector<Spin> spins, int photons);

    std::size_t num_atoms() const { return num_atoms_; }
    const Amplitudes& amplitudes() const { return amplitudes_; }
    Complex amplitude(const Ket& ket) const;
    double norm_squared() const;
    /// Probability that the cavity holds a photon.
    double photon_population() const;

    void add(const Ket& ket, Complex value);

    /// Drops the cavity factor, keeping the photon-number-0 component.
    PureState atoms_with_empty_cavity() const;

private:
    std::size_t num_atoms_;
    Amplitudes amplitudes_;
};

/// Resonant single-photon exchange between atom `atom_index` and the cavity for
/// pulse area `omega_t`:
///   |e,0> -> cos(Ωt/2)|e,0> + e^{iχ} sin(Ωt/2)|g,1>
///   |g,1> -> cos(Ωt/2)|g,1> - e^{-iχ} sin(Ωt/2)|e,0>
/// with χ the coupling phase (sign of the mode function at the atom). |g,0> is
/// left alone; |e,1> would leave the one-photon space and is rejected.
CavityState jc_exchange(const CavityState& state, std::size_t atom_index, double omega_t,
                        double coupling_phase = 0.0);

struct BellPreparation {
    double omega_t1 = std::numbers::pi / 2;
    double omega_t2 = std::numbers::pi;
    double coupling_phase1 = 0.0;
    /// Atom 2 sits where the mode function has the opposite sign.
    double coupling_phase2 = std::numbers::pi;
};

/// Full cavity sequence for two atoms: atom 1 enters excited, atom 2 ground.
/// Returns the state after the cavity is left in the vacuum.
CavityState run_cavity_preparation(const BellPreparation& prep = {});

/// Throws ResidualPhoton when the cavity still holds population above 1e-12.
PureState prepare_bell(const BellPreparation& prep = {});

/// Cavity settings that yield a|ge> + b|eg> up to a global phase: the first
/// pulse area sets |a|/|b| and the first coupling phase sets arg(a) - arg(b).
BellPreparation general_preparation(Complex a, Complex b);

struct BellChannel {};
struct GeneralChannel {
    Complex a;
    Complex b;
};
struct CatChannel {
    std::size_t atoms = 3;
};
struct ClassicalMixtureChannel {};

using ChannelSpec = std::variant<BellChannel, GeneralChannel, CatChannel, ClassicalMixtureChannel>;
using ChannelState = std::variant<PureState, Ensemble>;

/// Throws InvalidSpec on a non-normalized general channel or a cat with fewer
/// than two atoms.
void validate(const ChannelSpec& spec);

std::size_t atom_count(const ChannelSpec& spec);

/// |a|^2 weight of the branch where the remote atoms are in |g>.
double ground_branch_weight(const ChannelSpec& spec);

/// Builds the channel with the probe as the last atom at momentum index 0.
ChannelState make_channel(const ChannelSpec& spec);

}  // namespace gravchan
