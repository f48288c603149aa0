#include "gravchan/channel.hpp"

#include <cmath>

#include "gravchan/errors.hpp"

namespace gravchan {

namespace {

constexpr double kResidualPhotonTolerance = 1e-12;

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};

}  // namespace

CavityState::CavityState(std::size_t num_atoms) : num_atoms_(num_atoms) {}

CavityState CavityState::product(std::vector<Spin> spins, int photons) {
    CavityState s(spins.size());
    s.add({std::move(spins), photons}, 1.0);
    return s;
}

Complex CavityState::amplitude(const Ket& ket) const {
    auto it = amplitudes_.find(ket);
    return it == amplitudes_.end() ? Complex{} : it->second;
}

double CavityState::norm_squared() const {
    double sum = 0.0;
    for (const auto& [ket, value] : amplitudes_) sum += std::norm(value);
    return sum;
}

double CavityState::photon_population() const {
    double sum = 0.0;
    for (const auto& [ket, value] : amplitudes_) {
        if (ket.photons > 0) sum += std::norm(value);
    }
    return sum;
}

void CavityState::add(const Ket& ket, Complex value) {
    if (ket.spins.size() != num_atoms_) throw BasisMismatch("cavity ket has wrong atom count");
    if (ket.photons < 0 || ket.photons > 1) {
        throw InvalidArgument("cavity photon number must be 0 or 1");
    }
    auto [it, inserted] = amplitudes_.try_emplace(ket, value);
    if (!inserted) it->second += value;
    if (std::abs(it->second) < kPruneThreshold) amplitudes_.erase(it);
}

PureState CavityState::atoms_with_empty_cavity() const {
    PureState out(num_atoms_);
    for (const auto& [ket, value] : amplitudes_) {
        if (ket.photons == 0) out.add({ket.spins, 0}, value);
    }
    return out;
}

CavityState jc_exchange(const CavityState& state, std::size_t atom_index, double omega_t,
                        double coupling_phase) {
    if (atom_index >= state.num_atoms()) {
        throw IndexOutOfRange("atom index " + std::to_string(atom_index) + " out of range");
    }
    const double c = std::cos(omega_t / 2.0);
    const double s = std::sin(omega_t / 2.0);
    const Complex emit = std::polar(s, coupling_phase);
    const Complex absorb = -std::polar(s, -coupling_phase);

    CavityState out(state.num_atoms());
    for (const auto& [ket, value] : state.amplitudes()) {
        const Spin spin = ket.spins[atom_index];
        CavityState::Ket flipped = ket;
        if (spin == Spin::E && ket.photons == 0) {
            flipped.spins[atom_index] = Spin::G;
            flipped.photons = 1;
            out.add(ket, c * value);
            out.add(flipped, emit * value);
        } else if (spin == Spin::G && ket.photons == 1) {
            flipped.spins[atom_index] = Spin::E;
            flipped.photons = 0;
            out.add(ket, c * value);
            out.add(flipped, absorb * value);
        } else if (spin == Spin::G) {
            out.add(ket, value);
        } else {
            throw InvalidArgument("|e,1> leaves the single-photon space");
        }
    }
    return out;
}

CavityState run_cavity_preparation(const BellPreparation& prep) {
    CavityState s = CavityState::product({Spin::E, Spin::G}, 0);
    s = jc_exchange(s, 0, prep.omega_t1, prep.coupling_phase1);
    // Cavity delay between the two atoms has no dynamical effect here.
    return jc_exchange(s, 1, prep.omega_t2, prep.coupling_phase2);
}

PureState prepare_bell(const BellPreparation& prep) {
    const CavityState s = run_cavity_preparation(prep);
    const double residual = s.photon_population();
    if (residual > kResidualPhotonTolerance) {
        throw ResidualPhoton("cavity photon population " + std::to_string(residual) +
                             " after preparation");
    }
    return s.atoms_with_empty_cavity();
}

BellPreparation general_preparation(Complex a, Complex b) {
    BellPreparation prep;
    prep.omega_t1 = 2.0 * std::atan2(std::abs(a), std::abs(b));
    prep.coupling_phase1 = std::arg(a) - std::arg(b);
    return prep;
}

void validate(const ChannelSpec& spec) {
    std::visit(Overloaded{
                   [](const GeneralChannel& g) {
                       const double n = std::norm(g.a) + std::norm(g.b);
                       if (!std::isfinite(n) || std::abs(n - 1.0) > kNormTolerance) {
                           throw InvalidSpec("general channel needs |a|^2 + |b|^2 = 1, got " +
                                             std::to_string(n));
                       }
                   },
                   [](const CatChannel& c) {
                       if (c.atoms < 2) throw InvalidSpec("cat channel needs at least 2 atoms");
                   },
                   [](const auto&) {},
               },
               spec);
}

std::size_t atom_count(const ChannelSpec& spec) {
    if (const auto* cat = std::get_if<CatChannel>(&spec)) return cat->atoms;
    return 2;
}

double ground_branch_weight(const ChannelSpec& spec) {
    if (const auto* g = std::get_if<GeneralChannel>(&spec)) return std::norm(g->a);
    return 0.5;
}

ChannelState make_channel(const ChannelSpec& spec) {
    validate(spec);
    const double h = std::numbers::sqrt2 / 2.0;
    const BasisVector ge{{Spin::G, Spin::E}, 0};
    const BasisVector eg{{Spin::E, Spin::G}, 0};
    return std::visit(
        Overloaded{
            [&](const BellChannel&) -> ChannelState { return PureState(2, {{ge, h}, {eg, h}}); },
            [&](const GeneralChannel& g) -> ChannelState {
                return PureState(2, {{ge, g.a}, {eg, g.b}});
            },
            [&](const CatChannel& c) -> ChannelState {
                BasisVector all_g{std::vector<Spin>(c.atoms, Spin::G), 0};
                BasisVector all_e{std::vector<Spin>(c.atoms, Spin::E), 0};
                all_g.spins.back() = Spin::E;
                all_e.spins.back() = Spin::G;
                return PureState(c.atoms, {{all_g, h}, {all_e, h}});
            },
            [&](const ClassicalMixtureChannel&) -> ChannelState {
                return Ensemble({{0.5, PureState::basis(ge)}, {0.5, PureState::basis(eg)}});
            },
        },
        spec);
}

}  // namespace gravchan
