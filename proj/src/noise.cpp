#include "gravchan/noise.hpp"

#include <cmath>
#include <vector>

#include "gravchan/errors.hpp"
#include "gravchan/parallel.hpp"

namespace gravchan {

namespace {

constexpr std::uint64_t kShotStream = 1;
constexpr std::uint64_t kPhaseStream = 2;
constexpr double kMinSlope = 0.1;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Neumaier-compensated running sum.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

Estimate sample_std(const std::vector<double>& xs) {
    CompensatedSum total;
    for (double x : xs) total.add(x);
    const double mean = total.value() / static_cast<double>(xs.size());
    CompensatedSum sq;
    for (double x : xs) sq.add((x - mean) * (x - mean));
    const double n = static_cast<double>(xs.size());
    const double s = std::sqrt(sq.value() / (n - 1.0));
    return {s, s / std::sqrt(2.0 * (n - 1.0))};
}

double channel_weight(bool with_channel, std::optional<double> amplitude_a) {
    if (!with_channel) return 1.0;
    if (!amplitude_a) return 0.5;
    const double a = *amplitude_a;
    return a * std::sqrt(std::max(0.0, 1.0 - a * a));
}

Estimate ratio_of(const Estimate& num, const Estimate& den) {
    const double r = num.value / den.value;
    const double rel = std::hypot(num.standard_error / num.value, den.standard_error / den.value);
    return {r, std::abs(r) * rel};
}

}  // namespace

void NoiseParams::validate() const {
    if (n_atoms < 1) throw InvalidArgument("n_atoms must be >= 1");
    if (!(c >= 0.0) || !std::isfinite(c)) throw InvalidArgument("c must be finite and >= 0");
    if (!std::isfinite(delta_phi_mean)) throw InvalidArgument("delta_phi_mean must be finite");
    if (n_runs < 2) throw InvalidArgument("n_runs must be >= 2 for a variance estimate");
    if (!(dominance_weight >= 0.0) || !std::isfinite(dominance_weight)) {
        throw InvalidArgument("dominance_weight must be finite and >= 0");
    }
    if (channel_amplitude && !(*channel_amplitude >= 0.0 && *channel_amplitude <= 1.0)) {
        throw InvalidArgument("channel_amplitude must lie in [0, 1]");
    }
}

double shot_noise_closed_form(std::uint64_t n_atoms, bool with_channel) {
    const double n = static_cast<double>(n_atoms);
    return with_channel ? std::sqrt(2.0 / n) : 1.0 / std::sqrt(n);
}

double naive_shot_noise_closed_form(std::uint64_t n_atoms, double delta_phi_mean) {
    const double p = 0.25 * (1.0 + std::cos(delta_phi_mean));
    return 4.0 * std::sqrt(p * (1.0 - p)) /
           (std::sqrt(static_cast<double>(n_atoms)) * std::abs(std::sin(delta_phi_mean)));
}

double phase_noise_closed_form(double c, double delta_phi_mean, bool with_channel,
                               std::optional<double> amplitude_a) {
    const double direct = c * std::abs(std::sin(delta_phi_mean / 2.0));
    if (!with_channel) return direct;
    if (amplitude_a) return direct * general_phase_noise_ratio(*amplitude_a);
    return direct / std::numbers::sqrt2;
}

double general_phase_noise_ratio(double amplitude_a) {
    return std::sqrt(channel_weight(true, amplitude_a));
}

std::mt19937_64 run_generator(std::uint64_t seed, std::uint64_t stream, std::uint64_t run) {
    const std::uint64_t key = splitmix64(splitmix64(seed) ^ splitmix64(stream << 32 ^ run));
    return std::mt19937_64(key);
}

Estimate mc_shot_noise(const NoiseParams& params, bool with_channel, ShotNoiseModel model) {
    params.validate();
    const double mean = params.delta_phi_mean;
    const double sin_mean = std::sin(mean);
    if (std::abs(sin_mean) <= kMinSlope) {
        throw IllConditioned("shot-noise propagation needs |sin <delta_phi>| > 0.1");
    }
    const double n = static_cast<double>(params.n_atoms);
    const double fringe = 0.5 * (1.0 + std::cos(mean));

    // count ~ Bin(trials, p); the estimate inverts expected_fraction + slope * dphi.
    std::uint64_t trials = params.n_atoms;
    double p = fringe;
    double expected_fraction = fringe;
    double slope = -0.5 * sin_mean;
    if (with_channel && model == ShotNoiseModel::AtomLoss) {
        trials = params.n_atoms / 2;
        const double kept = static_cast<double>(trials) / n;
        expected_fraction = kept * fringe;
        slope *= kept;
    } else if (with_channel) {
        p = 0.5 * fringe;
        expected_fraction = p;
        slope *= 0.5;
    }
    if (trials == 0) throw InvalidArgument("no atoms survive velocity selection");

    std::vector<double> estimates(params.n_runs);
    parallel_for(params.n_runs, [&](std::size_t run) {
        auto rng = run_generator(params.seed, kShotStream, run);
        std::binomial_distribution<std::uint64_t> draw(trials, p);
        const double fraction = static_cast<double>(draw(rng)) / n;
        estimates[run] = mean + (fraction - expected_fraction) / slope;
    });
    return sample_std(estimates);
}

Estimate mc_phase_noise(const NoiseParams& params, bool with_channel,
                        std::optional<double> amplitude_a) {
    params.validate();
    const double mean = params.delta_phi_mean;
    const double variance =
        params.c * params.c * channel_weight(with_channel, amplitude_a) * 0.5 *
        (1.0 + std::cos(mean));
    const double sigma = std::sqrt(std::max(0.0, variance));
    if (sigma == 0.0) return {0.0, 0.0};

    std::vector<double> samples(params.n_runs);
    parallel_for(params.n_runs, [&](std::size_t run) {
        auto rng = run_generator(params.seed, kPhaseStream, run);
        std::normal_distribution<double> z(0.0, 1.0);
        samples[run] = mean + sigma * z(rng);
    });
    return sample_std(samples);
}

double combined_noise(double weight, double phase, double shot) {
    return std::hypot(weight * phase, shot);
}

NoiseReport snr_report(const NoiseParams& params) {
    params.validate();
    NoiseReport r;
    r.shot_no_channel = shot_noise_closed_form(params.n_atoms, false);
    r.shot_with_channel = shot_noise_closed_form(params.n_atoms, true);
    r.shot_ratio = std::numbers::sqrt2;
    r.shot_with_channel_naive = naive_shot_noise_closed_form(params.n_atoms, params.delta_phi_mean);

    r.phase_no_channel = phase_noise_closed_form(params.c, params.delta_phi_mean, false);
    r.phase_with_channel = phase_noise_closed_form(params.c, params.delta_phi_mean, true);
    r.phase_ratio = 1.0 / std::numbers::sqrt2;
    if (params.channel_amplitude) {
        r.phase_ratio_general = general_phase_noise_ratio(*params.channel_amplitude);
    }

    r.mc_shot_no_channel = mc_shot_noise(params, false);
    r.mc_shot_with_channel = mc_shot_noise(params, true, ShotNoiseModel::AtomLoss);
    r.mc_shot_with_channel_naive = mc_shot_noise(params, true, ShotNoiseModel::Naive);
    r.mc_phase_no_channel = mc_phase_noise(params, false);
    r.mc_phase_with_channel = mc_phase_noise(params, true);
    r.mc_phase_ratio = ratio_of(r.mc_phase_with_channel, r.mc_phase_no_channel);
    if (params.channel_amplitude) {
        r.mc_phase_ratio_general =
            ratio_of(mc_phase_noise(params, true, params.channel_amplitude), r.mc_phase_no_channel);
    }

    r.dominance_weight = params.dominance_weight;
    r.combined_no_channel =
        combined_noise(params.dominance_weight, r.phase_no_channel, r.shot_no_channel);
    r.combined_with_channel =
        combined_noise(params.dominance_weight, r.phase_with_channel, r.shot_with_channel);
    r.combined_ratio = r.combined_with_channel / r.combined_no_channel;
    r.channel_improves = r.combined_with_channel < r.combined_no_channel;
    return r;
}

}  // namespace gravchan
