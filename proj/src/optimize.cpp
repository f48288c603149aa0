#include "gravchan/optimize.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "gravchan/errors.hpp"

namespace gravchan {

namespace {

constexpr std::size_t kPrescanPoints = 33;
constexpr double kUnimodalSlack = 1e-12;

void check_amplitude(double a_abs) {
    if (!(a_abs >= 0.0 && a_abs <= 1.0)) throw InvalidArgument("|a| must lie in [0, 1]");
}

double surprisal_bits(double p) { return p > 0.0 ? -p * std::log2(p) : 0.0; }

void check_single_peak(std::size_t grid_size) {
    std::vector<double> values(kPrescanPoints);
    std::size_t peak = 0;
    for (std::size_t i = 0; i < kPrescanPoints; ++i) {
        values[i] = fringe_averaged_entropy(static_cast<double>(i) / (kPrescanPoints - 1), grid_size);
        if (values[i] > values[peak]) peak = i;
    }
    for (std::size_t i = 1; i < kPrescanPoints; ++i) {
        const double step = values[i] - values[i - 1];
        const bool rising_part = i <= peak;
        if ((rising_part && step < -kUnimodalSlack) || (!rising_part && step > kUnimodalSlack)) {
            throw Multimodal("entropy objective is not single-peaked on [0, 1]");
        }
    }
}

}  // namespace

double outcome_entropy(double a_abs, double delta_phi) {
    check_amplitude(a_abs);
    const double a2 = a_abs * a_abs;
    const double b2 = 1.0 - a2;
    const double p1 = 0.5 * (1.0 + std::cos(delta_phi)) * a2;
    const double p2 = 0.5 * (1.0 - std::cos(delta_phi)) * b2;
    const double p3 = std::max(0.0, 1.0 - p1 - p2);
    return surprisal_bits(p1) + surprisal_bits(p2) + surprisal_bits(p3);
}

double fringe_averaged_entropy(double a_abs, std::size_t grid_size) {
    check_amplitude(a_abs);
    if (grid_size == 0) throw InvalidArgument("grid size must be positive");
    double sum = 0.0;
    double comp = 0.0;
    for (std::size_t i = 0; i < grid_size; ++i) {
        const double phi = 2.0 * std::numbers::pi * static_cast<double>(i) /
                           static_cast<double>(grid_size);
        const double x = outcome_entropy(a_abs, phi);
        const double t = sum + x;
        comp += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
        sum = t;
    }
    return (sum + comp) / static_cast<double>(grid_size);
}

OptimizationResult optimize_entropy(double tolerance, std::size_t grid_size) {
    if (!(tolerance > 0.0)) throw InvalidArgument("tolerance must be > 0");
    check_single_peak(grid_size);

    const double r = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = 0.0;
    double hi = 1.0;
    double x1 = hi - r * (hi - lo);
    double x2 = lo + r * (hi - lo);
    double f1 = fringe_averaged_entropy(x1, grid_size);
    double f2 = fringe_averaged_entropy(x2, grid_size);
    std::size_t iterations = 0;
    while (hi - lo >= tolerance) {
        ++iterations;
        if (f1 >= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - r * (hi - lo);
            f1 = fringe_averaged_entropy(x1, grid_size);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + r * (hi - lo);
            f2 = fringe_averaged_entropy(x2, grid_size);
        }
    }
    OptimizationResult out;
    out.a_star = 0.5 * (lo + hi);
    out.b_star = std::sqrt(1.0 - out.a_star * out.a_star);
    out.objective_value = fringe_averaged_entropy(out.a_star, grid_size);
    out.iterations = iterations;
    out.bracket_lo = lo;
    out.bracket_hi = hi;
    out.method = "golden-section";
    return out;
}

double png_ratio(double a_abs) {
    check_amplitude(a_abs);
    return std::sqrt(a_abs * std::sqrt(1.0 - a_abs * a_abs));
}

OptimizationResult png_ratio_extremum() {
    // d/da [a^2 (1 - a^2)] = 0  =>  a^2 = 1/2
    const double a = 1.0 / std::numbers::sqrt2;
    OptimizationResult out;
    out.a_star = a;
    out.b_star = a;
    out.objective_value = png_ratio(a);
    out.bracket_lo = a;
    out.bracket_hi = a;
    out.method = "closed-form";
    return out;
}

}  // namespace gravchan
