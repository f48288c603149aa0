#include "gravchan/state.hpp"

#include <cmath>
#include <sstream>

#include "gravchan/errors.hpp"

namespace gravchan {

namespace {

void check_ket(std::size_t num_atoms, const BasisVector& ket) {
    if (ket.num_atoms() != num_atoms) {
        throw BasisMismatch("ket " + to_string(ket) + " does not have " +
                            std::to_string(num_atoms) + " atoms");
    }
}

}  // namespace

char to_char(Spin s) { return s == Spin::G ? 'g' : 'e'; }

std::string to_string(const BasisVector& ket) {
    std::ostringstream os;
    os << '|';
    for (std::size_t i = 0; i < ket.spins.size(); ++i) {
        if (i != 0) os << ',';
        os << to_char(ket.spins[i]);
    }
    os << ';' << ket.momentum << '>';
    return os.str();
}

PureState::PureState(std::size_t num_atoms) : num_atoms_(num_atoms) {
    if (num_atoms == 0) throw InvalidArgument("a state needs at least one atom");
}

PureState::PureState(std::size_t num_atoms,
                     std::initializer_list<std::pair<BasisVector, Complex>> terms)
    : PureState(num_atoms) {
    for (const auto& [ket, value] : terms) add(ket, value);
}

PureState PureState::basis(BasisVector ket) {
    PureState s(ket.num_atoms());
    s.add(ket, 1.0);
    return s;
}

Complex PureState::amplitude(const BasisVector& ket) const {
    auto it = amplitudes_.find(ket);
    return it == amplitudes_.end() ? Complex{} : it->second;
}

double PureState::norm_squared() const {
    double sum = 0.0;
    for (const auto& [ket, value] : amplitudes_) sum += std::norm(value);
    return sum;
}

void PureState::add(const BasisVector& ket, Complex value) {
    check_ket(num_atoms_, ket);
    auto [it, inserted] = amplitudes_.try_emplace(ket, value);
    if (!inserted) it->second += value;
    if (std::abs(it->second) < kPruneThreshold) amplitudes_.erase(it);
}

PureState PureState::scaled(Complex factor) const {
    PureState out(num_atoms_);
    for (const auto& [ket, value] : amplitudes_) out.add(ket, factor * value);
    return out;
}

PureState operator+(const PureState& lhs, const PureState& rhs) {
    if (lhs.num_atoms() != rhs.num_atoms()) throw BasisMismatch("atom counts differ");
    PureState out = lhs;
    for (const auto& [ket, value] : rhs.amplitudes()) out.add(ket, value);
    return out;
}

BasisOperator::BasisOperator(std::size_t target_atom, bool unitary)
    : target_(target_atom), unitary_(unitary) {}

BasisOperator BasisOperator::identity(std::size_t target_atom) {
    BasisOperator op(target_atom, true);
    op.on(Spin::G, {{1.0, Spin::G, 0}});
    op.on(Spin::E, {{1.0, Spin::E, 0}});
    return op;
}

BasisOperator& BasisOperator::on(Spin spin, std::vector<OperatorTerm> terms) {
    spin_rules_[spin] = std::move(terms);
    return *this;
}

BasisOperator& BasisOperator::on(Spin spin, int momentum, std::vector<OperatorTerm> terms) {
    exact_rules_[{spin, momentum}] = std::move(terms);
    return *this;
}

const std::vector<OperatorTerm>* BasisOperator::rule_for(const BasisVector& ket) const {
    if (target_ >= ket.num_atoms()) return nullptr;
    const Spin spin = ket.spins[target_];
    if (auto it = exact_rules_.find({spin, ket.momentum}); it != exact_rules_.end()) {
        return &it->second;
    }
    if (auto it = spin_rules_.find(spin); it != spin_rules_.end()) return &it->second;
    return nullptr;
}

PureState normalize(const PureState& state) {
    const double n2 = state.norm_squared();
    if (n2 < 1e-24) throw ZeroNorm();
    return state.scaled(1.0 / std::sqrt(n2));
}

PureState apply(const BasisOperator& op, const PureState& state) {
    const bool on_probe = op.target() + 1 == state.num_atoms();
    PureState out(state.num_atoms());
    for (const auto& [ket, value] : state.amplitudes()) {
        const auto* rule = op.rule_for(ket);
        if (rule == nullptr) {
            throw UncoveredBasisVector("operator has no rule for " + to_string(ket));
        }
        for (const auto& term : *rule) {
            if (term.momentum_shift != 0 && !on_probe) {
                throw InvalidArgument("momentum kicks only apply to the probe atom");
            }
            BasisVector next = ket;
            next.spins[op.target()] = term.spin;
            next.momentum += term.momentum_shift;
            out.add(next, term.coefficient * value);
        }
    }
    return out;
}

double unitarity_defect(const BasisOperator& op, std::span<const BasisVector> inputs) {
    std::vector<PureState> images;
    images.reserve(inputs.size());
    for (const auto& ket : inputs) images.push_back(apply(op, PureState::basis(ket)));
    double worst = 0.0;
    for (std::size_t i = 0; i < images.size(); ++i) {
        for (std::size_t j = i; j < images.size(); ++j) {
            const Complex expected = (i == j) ? 1.0 : 0.0;
            worst = std::max(worst, std::abs(inner_product(images[i], images[j]) - expected));
        }
    }
    return worst;
}

Projection project(const PureState& state, const KetPredicate& predicate) {
    PureState kept(state.num_atoms());
    for (const auto& [ket, value] : state.amplitudes()) {
        if (predicate(ket)) kept.add(ket, value);
    }
    const double p = kept.norm_squared();
    if (p < 1e-24) return {0.0, PureState(state.num_atoms())};
    return {p, kept.scaled(1.0 / std::sqrt(p))};
}

SpinProbabilities measure_spin(const PureState& state, std::size_t atom_index) {
    if (atom_index >= state.num_atoms()) {
        throw IndexOutOfRange("atom index " + std::to_string(atom_index) + " out of range for " +
                              std::to_string(state.num_atoms()) + " atoms");
    }
    SpinProbabilities out;
    for (const auto& [ket, value] : state.amplitudes()) {
        (ket.spins[atom_index] == Spin::G ? out.g : out.e) += std::norm(value);
    }
    return out;
}

Complex inner_product(const PureState& bra, const PureState& ket) {
    if (bra.num_atoms() != ket.num_atoms()) {
        throw BasisMismatch("cannot compare states of " + std::to_string(bra.num_atoms()) +
                            " and " + std::to_string(ket.num_atoms()) + " atoms");
    }
    Complex sum{};
    for (const auto& [k, value] : bra.amplitudes()) sum += std::conj(value) * ket.amplitude(k);
    return sum;
}

double fidelity(const PureState& a, const PureState& b) {
    return std::min(1.0, std::norm(inner_product(a, b)));
}

Ensemble::Ensemble(std::vector<Member> members) : members_(std::move(members)) {
    if (members_.empty()) throw InvalidArgument("ensemble has no members");
    double total = 0.0;
    for (const auto& m : members_) {
        if (!(m.weight >= 0.0)) throw InvalidArgument("ensemble weights must be non-negative");
        if (m.state.num_atoms() != members_.front().state.num_atoms()) {
            throw BasisMismatch("ensemble members have different atom counts");
        }
        total += m.weight;
    }
    if (std::abs(total - 1.0) > kNormTolerance) {
        throw InvalidArgument("ensemble weights sum to " + std::to_string(total));
    }
}

double Ensemble::expectation(const std::function<double(const PureState&)>& f) const {
    double sum = 0.0;
    for (const auto& m : members_) sum += m.weight * f(m.state);
    return sum;
}

}  // namespace gravchan
