#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "softeval/baselines.hpp"
#include "softeval/matrix.hpp"

namespace softeval {

/// Grid start, start + step, ... up to stop (inclusive within 1e-9), each point rounded to 9 decimals
/// so that e.g. 0.3 is the double nearest to 3/10.
[[nodiscard]] std::vector<double> make_grid(double start, double stop, double step);

/// Throws config_error unless the grid is non-empty and strictly increasing.
void validate_grid(const std::vector<double>& grid);

/**
 * Two-point perturbation setup: every fixed point is predicted exactly, and one extra point
 * with reference `perturbed_reference` is predicted as perturbed_reference + epsilon.
 */
struct EpsilonSetup {
    std::vector<double> fixed_points{0.8};
    double perturbed_reference{0.2};
};

struct EpsilonPoint {
    double epsilon{};
    double soft_f{};
    double hard_f{};
    double kld{};
};

/// Soft F, hard F (both sides binarized at 0.5) and mean Bernoulli KL per epsilon.
/// Throws config_error when a perturbed prediction leaves [0, 1].
[[nodiscard]] std::vector<EpsilonPoint> epsilon_sweep(const std::vector<double>& grid, const EpsilonSetup& setup = {});

struct BetaRPoint {
    /// "beta_r" or "constant"
    std::string series;
    /// r for beta_r points, the constant value for the constant point
    double x{};
    double soft_f{};
    double soft_macro_f{};
    double hard_f{};
    double hard_macro_f{};
    double ot_f{};
    double ot_macro_f{};
    double kld{};
};

/// Soft labels resembling annotator-averaged data: per cell, with probability 0.3 a
/// Beta(3, 1.5) "present" value, otherwise a Beta(0.5, 6) "absent" value.
[[nodiscard]] SoftLabelMatrix synthetic_reference(std::size_t n_items, std::vector<std::string> classes,
                                                  const SeededGenerator& gen);

/// Scores Beta(r, r) outputs for each r (stream gen.derive(k) for grid index k) against the reference,
/// then optionally a constant output.
[[nodiscard]] std::vector<BetaRPoint> beta_r_sweep(const SoftLabelMatrix& reference, const std::vector<double>& grid,
                                                   const SeededGenerator& gen,
                                                   std::optional<double> constant_value = 0.5);

[[nodiscard]] std::string format_epsilon_csv(const std::vector<EpsilonPoint>& points);
[[nodiscard]] std::string format_beta_r_csv(const std::vector<BetaRPoint>& points);

}  // namespace softeval
