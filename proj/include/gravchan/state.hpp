#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace gravchan {

using Complex = std::complex<double>;

/// Amplitudes below this magnitude are dropped from every stored state.
inline constexpr double kPruneThreshold = 1e-15;
/// Tolerance on unit norm and on probability sums.
inline constexpr double kNormTolerance = 1e-12;

enum class Spin : std::uint8_t { G = 0, E = 1 };

char to_char(Spin s);

/// Product ket |s_1>|s_2>...|s_M>|p + n k>. The momentum ladder index belongs
/// to the probe atom, which is always the last atom.
struct BasisVector {
    std::vector<Spin> spins;
    int momentum = 0;

    auto operator<=>(const BasisVector&) const = default;
    bool operator==(const BasisVector&) const = default;

    std::size_t num_atoms() const { return spins.size(); }
};

std::string to_string(const BasisVector& ket);

/// Sparse amplitude map over a labelled basis of M atoms. The norm is not
/// forced on construction; use normalize() for that.
class PureState {
public:
    using Amplitudes = std::map<BasisVector, Complex>;

    explicit PureState(std::size_t num_atoms);
    PureState(std::size_t num_atoms,
              std::initializer_list<std::pair<BasisVector, Complex>> terms);

    static PureState basis(BasisVector ket);

    std::size_t num_atoms() const { return num_atoms_; }
    std::size_t probe_index() const { return num_atoms_ - 1; }
    const Amplitudes& amplitudes() const { return amplitudes_; }
    bool empty() const { return amplitudes_.empty(); }

    Complex amplitude(const BasisVector& ket) const;
    double norm_squared() const;

    /// Accumulates `value` onto `ket`; amplitudes that cancel are pruned.
    void add(const BasisVector& ket, Complex value);

    PureState scaled(Complex factor) const;

private:
    std::size_t num_atoms_;
    Amplitudes amplitudes_;
};

PureState operator+(const PureState& lhs, const PureState& rhs);

/// One output branch of an operator rule: coefficient, new spin of the target
/// atom and the shift applied to the probe momentum index.
struct OperatorTerm {
    Complex coefficient;
    Spin spin;
    int momentum_shift = 0;
};

/// Linear operator on a single atom, defined by its action on basis kets.
/// Rules are keyed by the target spin and optionally an exact probe momentum;
/// exact-momentum rules take precedence over spin-only rules.
class BasisOperator {
public:
    BasisOperator(std::size_t target_atom, bool unitary);

    static BasisOperator identity(std::size_t target_atom);

    BasisOperator& on(Spin spin, std::vector<OperatorTerm> terms);
    BasisOperator& on(Spin spin, int momentum, std::vector<OperatorTerm> terms);

    std::size_t target() const { return target_; }
    bool unitary() const { return unitary_; }

    /// Rule that applies to `ket`, or nullptr when the operator does not cover it.
    const std::vector<OperatorTerm>* rule_for(const BasisVector& ket) const;

private:
    std::size_t target_;
    bool unitary_;
    std::map<Spin, std::vector<OperatorTerm>> spin_rules_;
    std::map<std::pair<Spin, int>, std::vector<OperatorTerm>> exact_rules_;
};

PureState normalize(const PureState& state);

/// Linear extension of the operator rules. Throws UncoveredBasisVector naming
/// the first ket with nonzero amplitude that no rule matches.
PureState apply(const BasisOperator& op, const PureState& state);

/// Largest entry of |G - I| where G is the Gram matrix of the operator's images
/// of `inputs`. Zero for an operator that is unitary on span(inputs).
double unitarity_defect(const BasisOperator& op, std::span<const BasisVector> inputs);

using KetPredicate = std::function<bool(const BasisVector&)>;

struct Projection {
    double probability = 0.0;
    /// Renormalized restriction; empty when probability is 0.
    PureState state;
};

Projection project(const PureState& state, const KetPredicate& predicate);

struct SpinProbabilities {
    double g = 0.0;
    double e = 0.0;

    double operator[](Spin s) const { return s == Spin::G ? g : e; }
};

SpinProbabilities measure_spin(const PureState& state, std::size_t atom_index);

Complex inner_product(const PureState& bra, const PureState& ket);
double fidelity(const PureState& a, const PureState& b);

/// Classical mixture of pure states.
class Ensemble {
public:
    struct Member {
        double weight;
        PureState state;
    };

    explicit Ensemble(std::vector<Member> members);

    const std::vector<Member>& members() const { return members_; }

    /// Weight-average of `f` over the members.
    double expectation(const std::function<double(const PureState&)>& f) const;

private:
    std::vector<Member> members_;
};

}  // namespace gravchan
