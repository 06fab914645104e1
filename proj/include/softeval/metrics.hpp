#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "softeval/kernels.hpp"
#include "softeval/matrix.hpp"
#include "softeval/threshold_vector.hpp"

namespace softeval {

/// Threshold applied to references before any hard scoring.
inline constexpr double reference_threshold = 0.5;

/// Which denominator of the precision/recall/F quotients vanished.
enum class Degenerate { none, empty_prediction, empty_reference, both_empty };

[[nodiscard]] std::string_view to_string(Degenerate d) noexcept;
[[nodiscard]] std::optional<Degenerate> parse_degenerate(std::string_view s) noexcept;

struct PRFTriple {
    double precision{};
    double recall{};
    double f_score{};
    Degenerate degenerate{Degenerate::none};

    friend bool operator==(const PRFTriple&, const PRFTriple&) = default;
};

/**
 * @brief Precision, recall and F-score from fuzzy cardinalities.
 *
 * precision = I / |pred|, recall = I / |ref|, F = 2I / (|pred| + |ref|), with F taken
 * directly from the masses rather than from the harmonic mean of P and R.
 * Vanishing denominators resolve to:
 *   - |pred| = |ref| = 0: P = R = F = 1, both_empty
 *   - |pred| = 0 only:    P = R = F = 0, empty_prediction
 *   - |ref| = 0 only:     P = R = F = 0, empty_reference
 */
[[nodiscard]] PRFTriple prf_from_masses(double intersection, double pred_mass, double ref_mass) noexcept;

/// Hard scores from confusion counts; identical to prf_from_masses on the equivalent binary masses.
[[nodiscard]] PRFTriple prf_from_counts(const kernels::Counts& c) noexcept;

/// Sum of min(pred_i, ref_i), the fuzzy intersection cardinality.
[[nodiscard]] double intersection_mass(std::span<const double> pred, std::span<const double> ref);

/// Soft precision/recall/F with min as fuzzy intersection and sums as cardinalities.
[[nodiscard]] PRFTriple soft_prf(std::span<const double> pred, std::span<const double> ref);

/// 1 where value > tau, 0 elsewhere. tau must lie in [0, 1].
[[nodiscard]] std::vector<double> binarize(std::span<const double> values, double tau);

/// Classical set-based scores after binarizing pred at tau; ref must be binary.
[[nodiscard]] PRFTriple hard_prf(std::span<const double> pred, std::span<const double> ref, double tau);

// Evaluation modes over a whole matrix. Hard modes binarize references at reference_threshold.
struct SoftMode {};
struct HardFixedMode {
    double tau{0.5};
};
struct HardPerClassMode {
    ThresholdVector thresholds;
};
using Mode = std::variant<SoftMode, HardFixedMode, HardPerClassMode>;

/// Cardinalities of one class column under a mode. Hard modes store counts as exact integers.
struct ClassTotals {
    std::string class_name;
    double intersection{};
    double pred{};
    double ref{};
};

struct ClassScore {
    std::string class_name;
    PRFTriple prf;

    friend bool operator==(const ClassScore&, const ClassScore&) = default;
};
using ClassScores = std::vector<ClassScore>;

struct MacroSummary {
    double precision{};
    double recall{};
    double f_score{};
    std::size_t classes_scored{};
};

/// Column totals for each class of the subset, in subset order.
/// pred and ref must have identical item order; throws alignment_error otherwise.
[[nodiscard]] std::vector<ClassTotals> class_totals(const SoftLabelMatrix& pred, const SoftLabelMatrix& ref,
                                                    const ClassSubset& subset, const Mode& mode);

[[nodiscard]] ClassScores per_class_scores(const SoftLabelMatrix& pred, const SoftLabelMatrix& ref,
                                           const ClassSubset& subset, const Mode& mode);

/// Scores on the pooled set of all (item, class) cells of the subset.
[[nodiscard]] PRFTriple micro_prf(const SoftLabelMatrix& pred, const SoftLabelMatrix& ref, const ClassSubset& subset,
                                  const Mode& mode);
[[nodiscard]] PRFTriple micro_from_totals(std::span<const ClassTotals> totals) noexcept;
[[nodiscard]] ClassScores scores_from_totals(std::span<const ClassTotals> totals);

/// Unweighted means over classes that are not both_empty.
/// Throws domain_error when no class is scorable.
[[nodiscard]] MacroSummary macro_summary(const ClassScores& scores);
[[nodiscard]] double macro_f(const ClassScores& scores);

/// Per-class, micro and macro scores of one mode. macro is empty when no class is scorable.
struct ModeScores {
    ClassScores per_class;
    PRFTriple micro;
    std::optional<MacroSummary> macro;
};

[[nodiscard]] ModeScores evaluate_mode(const SoftLabelMatrix& pred, const SoftLabelMatrix& ref,
                                       const ClassSubset& subset, const Mode& mode);
[[nodiscard]] ModeScores scores_from_class_totals(std::span<const ClassTotals> totals);

}  // namespace softeval
