#pragma once

#include <cstddef>
#include <span>

#include "softeval/matrix.hpp"

namespace softeval {

/// Clipping applied to both arguments of the Bernoulli KL divergence.
inline constexpr double kld_clip = 1e-7;

/// KL(y || y_hat) between Bernoulli(y) and Bernoulli(y_hat) in nats, both clipped to [kld_clip, 1 - kld_clip].
[[nodiscard]] double bernoulli_kl(double y, double y_hat) noexcept;

/// Sum of bernoulli_kl(ref_i, pred_i) over a column pair, left to right.
[[nodiscard]] double kld_sum(std::span<const double> pred, std::span<const double> ref);

/// Mean over all (item, class) cells of the subset of KL(reference || prediction).
[[nodiscard]] double bernoulli_kld(const SoftLabelMatrix& pred, const SoftLabelMatrix& ref,
                                   const ClassSubset& subset);

/// Two-sided Student-t quantile t_{p, dof}.
[[nodiscard]] double student_t_quantile(double p, double dof);

struct JackknifeSummary {
    double estimate{};
    double standard_error{};
    double ci_low{};
    double ci_high{};
    double confidence{0.95};
    std::size_t n{};

    friend bool operator==(const JackknifeSummary&, const JackknifeSummary&) = default;
};

/**
 * @brief Jackknife summary from the full-sample statistic and its leave-one-out values.
 *
 * Pseudo-values are full + (n - 1) * (full - loo[k]). The estimate is their mean,
 * the standard error their sample standard deviation over sqrt(n), and the 95%
 * interval uses the Student-t quantile with n - 1 degrees of freedom.
 * Throws domain_error for n < 2.
 */
[[nodiscard]] JackknifeSummary jackknife(double full, std::span<const double> leave_one_out);

/// Jackknife of the mean statistic over observations (e.g. one score per run).
[[nodiscard]] JackknifeSummary jackknife_mean(std::span<const double> observations);

}  // namespace softeval
