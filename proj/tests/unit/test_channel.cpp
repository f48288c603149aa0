#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "gravchan/channel.hpp"
#include "gravchan/errors.hpp"

using namespace gravchan;
using std::numbers::pi;

namespace {

const double kH = 1.0 / std::sqrt(2.0);

using Ket = CavityState::Ket;

bool close(Complex a, Complex b, double tol = 1e-12) { return std::abs(a - b) < tol; }

CavityState single(Spin s, int photons) { return CavityState::product({s}, photons); }

PureState bell() {
    return PureState(2, {{{{Spin::G, Spin::E}, 0}, kH}, {{{Spin::E, Spin::G}, 0}, kH}});
}

}  // namespace

TEST(JcExchange, QuarterCycleSplitsExcitation) {
    const CavityState out = jc_exchange(single(Spin::E, 0), 0, pi / 2);
    EXPECT_TRUE(close(out.amplitude({{Spin::E}, 0}), kH));
    EXPECT_TRUE(close(out.amplitude({{Spin::G}, 1}), kH));
}

TEST(JcExchange, FullCycleFlipsSign) {
    // With the half-angle rotation the photon returns after Ωt = 2π with a sign flip;
    // at Ωt = π it has been handed over completely.
    const CavityState cycle = jc_exchange(single(Spin::G, 1), 0, 2 * pi);
    EXPECT_TRUE(close(cycle.amplitude({{Spin::G}, 1}), -1.0));
    EXPECT_NEAR(cycle.norm_squared(), 1.0, 1e-12);

    const CavityState swap = jc_exchange(single(Spin::G, 1), 0, pi);
    EXPECT_TRUE(close(swap.amplitude({{Spin::E}, 0}), -1.0));
}

TEST(JcExchange, EmptyCavityGroundAtomIsInvariant) {
    for (double t : {0.0, 0.3, pi, 5.0}) {
        const CavityState out = jc_exchange(single(Spin::G, 0), 0, t, 1.2);
        EXPECT_TRUE(close(out.amplitude({{Spin::G}, 0}), 1.0));
        EXPECT_EQ(out.amplitudes().size(), 1u);
    }
}

TEST(JcExchange, RejectsTwoExcitations) {
    EXPECT_THROW(jc_exchange(single(Spin::E, 1), 0, 0.5), InvalidArgument);
}

TEST(JcExchange, RejectsBadAtomIndex) {
    EXPECT_THROW(jc_exchange(single(Spin::E, 0), 1, 0.5), IndexOutOfRange);
}

TEST(JcExchange, NormPreservedProperty) {
    std::mt19937_64 rng(51);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    std::normal_distribution<double> z;
    for (int i = 0; i < 1000; ++i) {
        CavityState s(2);
        s.add({{Spin::G, Spin::G}, 0}, {z(rng), z(rng)});
        s.add({{Spin::G, Spin::G}, 1}, {z(rng), z(rng)});
        s.add({{Spin::E, Spin::G}, 0}, {z(rng), z(rng)});
        s.add({{Spin::G, Spin::E}, 0}, {z(rng), z(rng)});
        const double before = s.norm_squared();
        const CavityState out = jc_exchange(s, i % 2, u(rng), u(rng));
        ASSERT_NEAR(out.norm_squared() / before, 1.0, 1e-12);
    }
}

TEST(JcExchange, CompositionProperty) {
    std::mt19937_64 rng(53);
    std::uniform_real_distribution<double> u(-7.0, 7.0);
    for (int i = 0; i < 1000; ++i) {
        const double alpha = u(rng), beta = u(rng), chi = u(rng);
        CavityState s(1);
        s.add({{Spin::E}, 0}, {0.6, 0.1});
        s.add({{Spin::G}, 1}, {-0.3, 0.7});
        s.add({{Spin::G}, 0}, {0.2, 0.0});
        const CavityState twice = jc_exchange(jc_exchange(s, 0, alpha, chi), 0, beta, chi);
        const CavityState once = jc_exchange(s, 0, alpha + beta, chi);
        for (const Ket& k : {Ket{{Spin::E}, 0}, Ket{{Spin::G}, 1}, Ket{{Spin::G}, 0}}) {
            ASSERT_TRUE(close(twice.amplitude(k), once.amplitude(k)));
        }
    }
}

TEST(PrepareBell, MatchesTargetBellState) {
    EXPECT_NEAR(fidelity(prepare_bell(), bell()), 1.0, 1e-12);
    EXPECT_NEAR(fidelity(prepare_bell(), std::get<PureState>(make_channel(BellChannel{}))), 1.0,
                1e-12);
}

TEST(PrepareBell, CavityEndsEmpty) {
    const CavityState full = run_cavity_preparation();
    EXPECT_LT(full.photon_population(), 1e-12);
    EXPECT_NEAR(full.norm_squared(), 1.0, 1e-12);
}

TEST(PrepareBell, MarginalsAreUnbiased) {
    const auto m = measure_spin(prepare_bell(), 0);
    EXPECT_NEAR(m.g, 0.5, 1e-12);
    EXPECT_NEAR(m.e, 0.5, 1e-12);
}

TEST(PrepareBell, NoExchangeGivesProductState) {
    BellPreparation prep;
    prep.omega_t1 = 0.0;
    const PureState out = prepare_bell(prep);
    EXPECT_NEAR(std::norm(out.amplitude({{Spin::E, Spin::G}, 0})), 1.0, 1e-12);
}

TEST(PrepareBell, LeftoverPhotonIsReported) {
    BellPreparation prep;
    prep.omega_t2 = pi / 2;
    EXPECT_THROW(prepare_bell(prep), ResidualPhoton);
}

TEST(GeneralPreparation, ReachesRequestedChannelProperty) {
    std::mt19937_64 rng(57);
    std::uniform_real_distribution<double> u(0.0, 1.0), ph(-pi, pi);
    for (int i = 0; i < 500; ++i) {
        const double mag = u(rng);
        const Complex a = std::polar(mag, ph(rng));
        const Complex b = std::polar(std::sqrt(1.0 - mag * mag), ph(rng));
        const PureState target = std::get<PureState>(make_channel(GeneralChannel{a, b}));
        ASSERT_NEAR(fidelity(prepare_bell(general_preparation(a, b)), target), 1.0, 1e-12);
    }
}

TEST(MakeChannel, GeneralReducesToBell) {
    const auto s = std::get<PureState>(make_channel(GeneralChannel{kH, kH}));
    EXPECT_NEAR(fidelity(s, bell()), 1.0, 1e-12);
}

TEST(MakeChannel, GeneralBoundaryIsProduct) {
    const auto s = std::get<PureState>(make_channel(GeneralChannel{1.0, 0.0}));
    EXPECT_EQ(s.amplitudes().size(), 1u);
    EXPECT_TRUE(close(s.amplitude({{Spin::G, Spin::E}, 0}), 1.0));
}

TEST(MakeChannel, CatIsGhzOnRemoteAtoms) {
    for (std::size_t m : {2u, 3u, 4u, 6u}) {
        const auto s = std::get<PureState>(make_channel(CatChannel{m}));
        EXPECT_NEAR(s.norm_squared(), 1.0, 1e-12);
        for (const auto& [k, v] : s.amplitudes()) {
            EXPECT_EQ(k.momentum, 0);
            for (std::size_t i = 1; i + 1 < m; ++i) EXPECT_EQ(k.spins[i], k.spins[0]);
            EXPECT_NE(k.spins.back(), k.spins[0]);
        }
    }
}

TEST(MakeChannel, MixtureHasBellMarginals) {
    const auto ens = std::get<Ensemble>(make_channel(ClassicalMixtureChannel{}));
    ASSERT_EQ(ens.members().size(), 2u);
    for (std::size_t atom : {0u, 1u}) {
        const double pg = ens.expectation([&](const PureState& s) { return measure_spin(s, atom).g; });
        EXPECT_NEAR(pg, measure_spin(bell(), atom).g, 1e-12);
        EXPECT_NEAR(pg, 0.5, 1e-12);
    }
}

TEST(MakeChannel, InvalidSpecs) {
    EXPECT_THROW(make_channel(GeneralChannel{0.6, 0.9}), InvalidSpec);
    EXPECT_THROW(make_channel(CatChannel{1}), InvalidSpec);
    EXPECT_NO_THROW(make_channel(GeneralChannel{0.6, 0.8}));
}

TEST(MakeChannel, AtomCountsAndGroundWeights) {
    EXPECT_EQ(atom_count(BellChannel{}), 2u);
    EXPECT_EQ(atom_count(CatChannel{5}), 5u);
    EXPECT_EQ(atom_count(ClassicalMixtureChannel{}), 2u);
    EXPECT_NEAR(ground_branch_weight(GeneralChannel{0.6, 0.8}), 0.36, 1e-15);
    EXPECT_NEAR(ground_branch_weight(BellChannel{}), 0.5, 1e-15);
}
