#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "softeval/matrix.hpp"
#include "softeval/metrics.hpp"
#include "softeval/stats.hpp"
#include "softeval/threshold_vector.hpp"

namespace softeval {

/// One row of a report: a class, or the micro/macro aggregate.
struct ScoreEntry {
    std::string scope;
    double precision{};
    double recall{};
    double f_score{};
    /// Degenerate flag name; "mixed" when runs disagree.
    std::string degenerate{"none"};
    std::optional<JackknifeSummary> f_jackknife;

    friend bool operator==(const ScoreEntry&, const ScoreEntry&) = default;
};

struct ModeReport {
    /// "soft", "hard@<tau>" or "hard@OT"
    std::string mode;
    std::vector<ScoreEntry> per_class;
    ScoreEntry micro;
    /// Empty when no class is scorable.
    std::optional<ScoreEntry> macro;
    std::size_t macro_classes_scored{};

    friend bool operator==(const ModeReport&, const ModeReport&) = default;
};

struct ReportMetadata {
    std::string tool{"softeval"};
    std::vector<std::string> predictions;
    std::string reference;
    std::vector<std::string> classes;
    std::vector<std::string> modes;
    double reference_threshold{0.5};
    std::string kl_direction{"KL(reference || prediction)"};
    double kl_clip{1e-7};
    std::string ot_tuning{"none"};
    std::string jackknife_unit{"none"};
    double confidence{0.95};
    std::string kernel_backend;
    std::string prng;
    std::optional<std::uint64_t> seed;

    friend bool operator==(const ReportMetadata&, const ReportMetadata&) = default;
};

struct EvalReport {
    ReportMetadata metadata;
    std::vector<ModeReport> modes;
    double kld{};
    std::optional<JackknifeSummary> kld_jackknife;
    std::optional<ThresholdVector> thresholds;

    friend bool operator==(const EvalReport&, const EvalReport&) = default;
};

enum class JackknifeUnit { none, runs, items };

struct EvaluationOptions {
    bool soft{true};
    /// Hard scoring at a fixed threshold.
    std::optional<double> fixed_threshold{0.5};
    /// Hard scoring at class-wise optimal thresholds.
    bool optimal{false};
    /// Thresholds for the optimal mode tuned elsewhere; when empty they are tuned on each evaluated prediction.
    std::optional<ThresholdVector> tuned_thresholds;
    std::string ot_tuning_label{"evaluation"};
    JackknifeUnit jackknife{JackknifeUnit::none};
};

/// Label used in reports for a fixed-threshold hard mode, e.g. "hard@0.5".
[[nodiscard]] std::string hard_mode_label(double tau);

/**
 * @brief Evaluates one or more prediction matrices against a reference.
 *
 * All predictions must already be aligned to the reference. With one prediction
 * the report holds its scores; with several, every score is the mean over runs.
 * Jackknife over runs needs at least two predictions; jackknife over items uses a
 * single prediction and keeps optimal thresholds fixed at their full-data values.
 * Metadata fields describing inputs are left for the caller to fill.
 */
[[nodiscard]] EvalReport evaluate(const std::vector<SoftLabelMatrix>& predictions, const SoftLabelMatrix& reference,
                                  const ClassSubset& subset, const EvaluationOptions& options);

}  // namespace softeval
