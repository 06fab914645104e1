#include "softeval/stats.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <boost/math/distributions/students_t.hpp>

#include "softeval/errors.hpp"

namespace softeval {

namespace {

// Shifted mean: exact when all values are equal.
double shifted_mean(std::span<const double> x) {
    const double origin = x.front();
    double acc = 0.0;
    for (double v : x) {
        acc += v - origin;
    }
    return origin + acc / static_cast<double>(x.size());
}

}  // namespace

double bernoulli_kl(double y, double y_hat) noexcept {
    y = std::clamp(y, kld_clip, 1.0 - kld_clip);
    y_hat = std::clamp(y_hat, kld_clip, 1.0 - kld_clip);
    return y * std::log(y / y_hat) + (1.0 - y) * std::log((1.0 - y) / (1.0 - y_hat));
}

double kld_sum(std::span<const double> pred, std::span<const double> ref) {
    if (pred.size() != ref.size()) {
        throw alignment_error("prediction has " + std::to_string(pred.size()) + " values but reference has " +
                              std::to_string(ref.size()));
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        acc += bernoulli_kl(ref[i], pred[i]);
    }
    return acc;
}

double bernoulli_kld(const SoftLabelMatrix& pred, const SoftLabelMatrix& ref, const ClassSubset& subset) {
    if (pred.item_ids() != ref.item_ids()) {
        throw alignment_error("prediction and reference items differ or are in different order; align them first");
    }
    const auto pred_idx = subset.resolve(pred);
    const auto ref_idx = subset.resolve(ref);
    const std::size_t cells = pred.n_items() * subset.size();
    if (cells == 0) {
        throw domain_error("KL divergence of an empty matrix is undefined");
    }
    double acc = 0.0;
    for (std::size_t k = 0; k < subset.size(); ++k) {
        acc += kld_sum(pred.column(pred_idx[k]), ref.column(ref_idx[k]));
    }
    return acc / static_cast<double>(cells);
}

double student_t_quantile(double p, double dof) {
    if (!(dof > 0.0) || !(p > 0.0 && p < 1.0)) {
        throw config_error("student-t quantile needs dof > 0 and p in (0, 1)");
    }
    return boost::math::quantile(boost::math::students_t_distribution<double>(dof), p);
}

JackknifeSummary jackknife(double full, std::span<const double> leave_one_out) {
    const std::size_t n = leave_one_out.size();
    if (n < 2) {
        throw domain_error("jackknife needs at least 2 observations, got " + std::to_string(n));
    }
    const double nm1 = static_cast<double>(n - 1);
    std::vector<double> pseudo(n);
    for (std::size_t k = 0; k < n; ++k) {
        pseudo[k] = full + nm1 * (full - leave_one_out[k]);
    }
    JackknifeSummary s;
    s.n = n;
    s.estimate = shifted_mean(pseudo);
    double ss = 0.0;
    for (double p : pseudo) {
        ss += (p - s.estimate) * (p - s.estimate);
    }
    s.standard_error = std::sqrt(ss / nm1) / std::sqrt(static_cast<double>(n));
    const double half_width = student_t_quantile(0.5 + s.confidence / 2.0, nm1) * s.standard_error;
    s.ci_low = s.estimate - half_width;
    s.ci_high = s.estimate + half_width;
    return s;
}

JackknifeSummary jackknife_mean(std::span<const double> observations) {
    const std::size_t n = observations.size();
    if (n < 2) {
        throw domain_error("jackknife needs at least 2 observations, got " + std::to_string(n));
    }
    const double full = shifted_mean(observations);
    // Leave-one-out mean written relative to the full mean so equal observations reproduce it exactly.
    std::vector<double> loo(n);
    for (std::size_t k = 0; k < n; ++k) {
        loo[k] = full + (full - observations[k]) / static_cast<double>(n - 1);
    }
    return jackknife(full, loo);
}

}  // namespace softeval
