#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "gravchan/errors.hpp"
#include "gravchan/protocol.hpp"
#include "support/oracles.hpp"

using namespace gravchan;
using std::numbers::pi;

namespace {

std::vector<double> uniform_grid(std::size_t n) {
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) g[i] = 2 * pi * static_cast<double>(i) / static_cast<double>(n);
    return g;
}

}  // namespace

TEST(RunTransfer, BellFringeEndpoints) {
    const InterferometerParams params;
    EXPECT_NEAR(run_transfer(BellChannel{}, params, 0, 0.0).p_joint_g, 0.5, 1e-12);
    EXPECT_NEAR(run_transfer(BellChannel{}, params, 0, pi).p_joint_g, 0.0, 1e-12);
}

TEST(RunTransfer, GeneralChannelScalesWithGroundWeight) {
    const auto out = run_transfer(GeneralChannel{0.6, 0.8}, {}, 0, pi / 2);
    EXPECT_NEAR(out.p_joint_g, 0.18, 1e-12);
    EXPECT_NEAR(out.p_closed_form, 0.18, 1e-12);
}

TEST(RunTransfer, ConditionalReadoutCarriesNoSignalForBell) {
    for (double d : {0.0, 0.5, 1.5, 2.9}) {
        EXPECT_NEAR(run_transfer(BellChannel{}, {}, 0, d).p_cond_g, 0.5, 1e-12);
    }
}

TEST(RunTransfer, UsesTotalPhaseWithoutOverride) {
    InterferometerParams params;
    params.timing = {0.01, 3.0};
    const auto out = run_transfer(BellChannel{}, params);
    EXPECT_EQ(out.delta_phi_used, total_phase(params));
}

TEST(RunTransfer, ProbeCannotBeTheRemoteAtom) {
    EXPECT_THROW(run_transfer(BellChannel{}, {}, 1, 0.0), IndexOutOfRange);
    EXPECT_THROW(run_transfer(CatChannel{3}, {}, 2, 0.0), IndexOutOfRange);
    EXPECT_NO_THROW(run_transfer(CatChannel{3}, {}, 1, 0.0));
}

TEST(RunTransfer, OutcomeInvariantsProperty) {
    std::mt19937_64 rng(61);
    std::uniform_real_distribution<double> u(-pi, pi), mag(0.0, 1.0);
    for (int i = 0; i < 500; ++i) {
        const double a = mag(rng);
        const GeneralChannel spec{std::polar(a, u(rng)), std::polar(std::sqrt(1 - a * a), u(rng))};
        InterferometerParams params;
        params.phases = {u(rng), u(rng), u(rng)};
        const auto out = run_transfer(spec, params, 0, u(rng));
        ASSERT_NEAR(out.p_joint_g + out.p_joint_e, out.p_select, 1e-12);
        for (double p : {out.p_select, out.p_joint_g, out.p_joint_e}) {
            ASSERT_GE(p, -1e-15);
            ASSERT_LE(p, 1.0 + 1e-12);
        }
        ASSERT_NEAR(out.p_joint_g, out.p_closed_form, 1e-12);
    }
}

TEST(RunTransfer, IndependentOfLaserPhases) {
    std::mt19937_64 rng(67);
    std::uniform_real_distribution<double> u(-pi, pi);
    for (int i = 0; i < 200; ++i) {
        InterferometerParams params;
        params.phases = {u(rng), u(rng), u(rng)};
        const double d = u(rng);
        EXPECT_NEAR(run_transfer(BellChannel{}, params, 0, d).p_joint_g,
                    run_transfer(BellChannel{}, {}, 0, d).p_joint_g, 1e-12);
    }
}

TEST(FringeScan, BellAndDirectOnThreePoints) {
    const std::vector<double> grid{0.0, pi / 2, pi};
    const auto points = fringe_scan(BellChannel{}, {}, grid);
    const auto direct = direct_scan({}, grid);
    const double bell[] = {0.5, 0.25, 0.0};
    const double lone[] = {1.0, 0.5, 0.0};
    ASSERT_EQ(points.size(), 3u);
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_EQ(points[i].delta_phi, grid[i]);
        EXPECT_NEAR(points[i].outcome.p_joint_g, bell[i], 1e-12);
        EXPECT_NEAR(direct[i], lone[i], 1e-12);
    }
}

TEST(FringeScan, OrderFollowsGrid) {
    std::vector<double> grid = uniform_grid(257);
    std::mt19937_64 rng(71);
    std::shuffle(grid.begin(), grid.end(), rng);
    const auto points = fringe_scan(GeneralChannel{0.6, 0.8}, {}, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        ASSERT_EQ(points[i].delta_phi, grid[i]);
        ASSERT_NEAR(points[i].outcome.p_joint_g, 0.36 * ground_probability(grid[i]), 1e-12);
    }
}

TEST(FringeScan, RejectsEmptyGrid) {
    EXPECT_THROW(fringe_scan(BellChannel{}, {}, std::vector<double>{}), InvalidArgument);
}

TEST(FringeScan, CatMatchesDenseSimulation) {
    const auto grid = uniform_grid(16);
    for (std::size_t m : {3u, 4u}) {
        const oracle::Dense cat = oracle::cat_state(m);
        for (std::size_t remote = 0; remote + 1 < m; ++remote) {
            const auto points = fringe_scan(CatChannel{m}, {}, grid, remote);
            for (std::size_t i = 0; i < grid.size(); ++i) {
                const double expected =
                    cat.interfere(oracle::expanded_block(0, 0, 0, grid[i])).joint_ground(remote);
                ASSERT_NEAR(points[i].outcome.p_joint_g, expected, 1e-12);
            }
        }
    }
}

TEST(FringeScan, RemoteReadoutEquivalenceProperty) {
    std::mt19937_64 rng(73);
    std::uniform_real_distribution<double> u(-pi, pi);
    for (std::size_t m : {3u, 4u, 5u}) {
        for (int trial = 0; trial < 40; ++trial) {
            InterferometerParams params;
            params.phases = {u(rng), u(rng), u(rng)};
            const double d = u(rng);
            const auto first = run_transfer(CatChannel{m}, params, 0, d);
            for (std::size_t remote = 1; remote + 1 < m; ++remote) {
                const auto other = run_transfer(CatChannel{m}, params, remote, d);
                ASSERT_NEAR(first.p_joint_g, other.p_joint_g, 1e-12);
                ASSERT_NEAR(first.p_joint_e, other.p_joint_e, 1e-12);
            }
        }
    }
}

TEST(FringeScan, MixtureMatchesBellProperty) {
    std::mt19937_64 rng(79);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    for (int i = 0; i < 300; ++i) {
        const double d = u(rng);
        ASSERT_NEAR(run_transfer(ClassicalMixtureChannel{}, {}, 0, d).p_joint_g,
                    run_transfer(BellChannel{}, {}, 0, d).p_joint_g, 1e-12);
    }
}

TEST(FringeScan, BellAmplitudeIsHalfTheDirectAmplitude) {
    const auto grid = uniform_grid(128);
    const auto points = fringe_scan(BellChannel{}, {}, grid);
    const auto direct = direct_scan({}, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        ASSERT_NEAR(points[i].outcome.p_joint_g, 0.5 * direct[i], 1e-12);
    }
}

TEST(FringeScan, PhaseOfFringeMaximumIsPreserved) {
    // Shift the fringe so its maximum is away from the grid origin.
    std::vector<double> grid = uniform_grid(360);
    for (double& g : grid) g -= 1.0;
    const auto points = fringe_scan(BellChannel{}, {}, grid);
    const auto direct = direct_scan({}, grid);
    std::size_t best_channel = 0, best_direct = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (points[i].outcome.p_joint_g > points[best_channel].outcome.p_joint_g) best_channel = i;
        if (direct[i] > direct[best_direct]) best_direct = i;
    }
    EXPECT_EQ(best_channel, best_direct);
}

TEST(DirectMeasurement, Examples) {
    EXPECT_NEAR(direct_measurement({}, 0.0), 1.0, 1e-12);
    EXPECT_NEAR(direct_measurement({}, 2 * pi / 3), 0.25, 1e-12);
}

TEST(EstimatePhase, Examples) {
    EXPECT_NEAR(estimate_phase(0.5, 0.5), 0.0, 1e-12);
    EXPECT_NEAR(estimate_phase(0.0, 0.5), pi, 1e-12);
    EXPECT_NEAR(estimate_phase(0.25, 0.5), pi / 2, 1e-12);
}

TEST(EstimatePhase, ClampsRoundoffButRejectsNonsense) {
    EXPECT_NEAR(estimate_phase(0.5 + 1e-12, 0.5), 0.0, 1e-5);
    EXPECT_NEAR(estimate_phase(-1e-12, 0.5), pi, 1e-5);
    EXPECT_THROW(estimate_phase(0.6, 0.5), OutOfRange);
    EXPECT_THROW(estimate_phase(0.1, 0.0), OutOfRange);
}

TEST(EstimatePhase, InvertsTheTransferOnPrincipalBranch) {
    std::mt19937_64 rng(83);
    std::uniform_real_distribution<double> u(0.05, pi - 0.05), mag(0.2, 1.0);
    for (int i = 0; i < 300; ++i) {
        const double a = mag(rng);
        const double d = u(rng);
        const auto out = run_transfer(GeneralChannel{a, std::sqrt(1 - a * a)}, {}, 0, d);
        ASSERT_NEAR(estimate_phase(out.p_joint_g, a * a), d, 1e-7);
    }
}
