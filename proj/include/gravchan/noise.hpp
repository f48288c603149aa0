#pragma once

#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>

namespace gravchan {

struct NoiseParams {
    std::uint64_t n_atoms = 100000;  ///< atoms per phase measurement, N
    double c = 1e-3;                 ///< phase-noise model constant
    double delta_phi_mean = std::numbers::pi / 2;
    std::uint64_t seed = 42;
    std::size_t n_runs = 10000;      ///< Monte Carlo repetitions
    /// Phase-vs-shot dominance weight used for the combined figure.
    double dominance_weight = 100.0;
    /// |a| of a general channel a|ge> + b|eg>; Bell when unset.
    std::optional<double> channel_amplitude;

    /// Throws InvalidArgument unless N >= 1, c >= 0, n_runs >= 2, weight >= 0
    /// and |a| in [0, 1].
    void validate() const;
};

/// How the with-channel shot-noise Monte Carlo accounts for velocity selection.
enum class ShotNoiseModel {
    /// N/2 atoms survive selection and run the full fringe; counts are read
    /// through the half-amplitude fringe. Reproduces sqrt(2/N) at every phase.
    AtomLoss,
    /// Counts drawn as Bin(N, (1 + cos)/4) directly. Gives
    /// 4 sqrt(P(1-P)) / (sqrt(N) |sin|), i.e. sqrt(3/N) at pi/2.
    Naive,
};

struct Estimate {
    double value = 0.0;
    double standard_error = 0.0;
};

/// 1/sqrt(N) without the channel, sqrt(2/N) with it.
double shot_noise_closed_form(std::uint64_t n_atoms, bool with_channel);

/// Linearized binomial noise of the Naive model.
double naive_shot_noise_closed_form(std::uint64_t n_atoms, double delta_phi_mean);

/// c |sin(mean/2)| without the channel; times 1/sqrt(2) through the Bell
/// channel, or times sqrt(|a||b|) through a general channel of amplitude |a|.
double phase_noise_closed_form(double c, double delta_phi_mean, bool with_channel,
                               std::optional<double> amplitude_a = std::nullopt);

/// sqrt(|a| sqrt(1 - |a|^2))
double general_phase_noise_ratio(double amplitude_a);

/// Generator for Monte Carlo run `run` of stream `stream`. The seed is
/// splitmix64 of (seed, stream, run), so results do not depend on how runs are
/// scheduled across threads, or on which channel setting is being sampled.
std::mt19937_64 run_generator(std::uint64_t seed, std::uint64_t stream, std::uint64_t run);

/// Standard deviation of linearized phase estimates across runs, each run
/// drawing one binomial atom count. Throws IllConditioned when
/// |sin mean| <= 0.1.
Estimate mc_shot_noise(const NoiseParams& params, bool with_channel,
                       ShotNoiseModel model = ShotNoiseModel::AtomLoss);

/// Standard deviation of phase samples drawn with variance
/// c^2 w (1 + cos mean)/2, where w is 1 without the channel, 1/2 for Bell and
/// |a||b| for a general channel.
Estimate mc_phase_noise(const NoiseParams& params, bool with_channel,
                        std::optional<double> amplitude_a = std::nullopt);

struct NoiseReport {
    double shot_no_channel = 0.0;
    double shot_with_channel = 0.0;
    double shot_ratio = 0.0;
    double shot_with_channel_naive = 0.0;

    double phase_no_channel = 0.0;
    double phase_with_channel = 0.0;
    double phase_ratio = 0.0;
    std::optional<double> phase_ratio_general;

    Estimate mc_shot_no_channel;
    Estimate mc_shot_with_channel;
    Estimate mc_shot_with_channel_naive;
    Estimate mc_phase_no_channel;
    Estimate mc_phase_with_channel;
    Estimate mc_phase_ratio;
    std::optional<Estimate> mc_phase_ratio_general;

    double dominance_weight = 0.0;
    double combined_no_channel = 0.0;
    double combined_with_channel = 0.0;
    double combined_ratio = 0.0;
    bool channel_improves = false;
};

/// sqrt((w * phase)^2 + shot^2)
double combined_noise(double weight, double phase, double shot);

NoiseReport snr_report(const NoiseParams& params);

}  // namespace gravchan
