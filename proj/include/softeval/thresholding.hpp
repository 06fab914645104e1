#pragma once

#include <span>

#include "softeval/matrix.hpp"
#include "softeval/metrics.hpp"
#include "softeval/threshold_vector.hpp"

namespace softeval {

/// Result of the threshold search on one class column.
struct ColumnThreshold {
    double tau{1.0};
    double f_score{0.0};
    bool unscorable{false};
};

/**
 * @brief Exact F-maximizing threshold for one class.
 *
 * Candidates are 0, 1 and the midpoints between consecutive distinct prediction
 * values, so every binarization reachable with a strict threshold in [0, 1] is
 * visited. Ties resolve to the smallest tau. A reference without positives
 * yields the sentinel tau = 1 flagged unscorable. The reference is binarized at
 * reference_threshold first (a no-op for binary input).
 */
[[nodiscard]] ColumnThreshold optimal_threshold(std::span<const double> pred, std::span<const double> ref);

/// Class-wise optimal thresholds; since classes are independent this maximizes macro F.
[[nodiscard]] ThresholdVector optimal_thresholds(const SoftLabelMatrix& pred, const SoftLabelMatrix& ref,
                                                 const ClassSubset& subset);

/// Hard scores with one threshold per class; micro pools the per-class binarized columns.
[[nodiscard]] ModeScores evaluate_with_thresholds(const SoftLabelMatrix& pred, const SoftLabelMatrix& ref,
                                                  const ClassSubset& subset, const ThresholdVector& thresholds);

}  // namespace softeval
