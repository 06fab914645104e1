#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "softeval/matrix.hpp"
#include "softeval/report.hpp"
#include "softeval/threshold_vector.hpp"

namespace softeval {

// Wide CSV matrix format:
//   item_id,<class_1>,...,<class_K>
//   <id>,<value>,...,<value>
// Comma separated, '.' decimal point, values in [0, 1]. LF or CRLF on read, LF on write.

/// Parses CSV text; `source` names the input in error messages.
[[nodiscard]] SoftLabelMatrix parse_matrix(std::string_view text, const std::string& source = "<input>",
                                           const std::optional<std::vector<std::string>>& expected_classes = {});

/// Reads a matrix from a path, or stdin for "-".
[[nodiscard]] SoftLabelMatrix read_matrix(const std::string& path,
                                          const std::optional<std::vector<std::string>>& expected_classes = {});

/// CSV text with shortest round-trip decimal values.
[[nodiscard]] std::string format_matrix(const SoftLabelMatrix& m);
void write_matrix(const std::string& path, const SoftLabelMatrix& m);

/**
 * @brief Reorders pred rows into ref's item order.
 *
 * Items present in only one input raise alignment_error listing them. Without a subset the
 * two class sets must be equal; with one, both inputs need every class of the subset.
 */
[[nodiscard]] std::pair<SoftLabelMatrix, SoftLabelMatrix> align(const SoftLabelMatrix& pred,
                                                                const SoftLabelMatrix& ref,
                                                                const std::optional<ClassSubset>& subset = {});

enum class ReportFormat { json, csv };

/// JSON: one object, fixed key order, doubles at round-trip precision.
/// CSV: mode,scope,precision,recall,f_score,degenerate with 6 decimals; one macro row per mode.
[[nodiscard]] std::string write_report(const EvalReport& report, ReportFormat format);
[[nodiscard]] EvalReport parse_report_json(std::string_view text);

[[nodiscard]] std::string thresholds_to_json(const ThresholdVector& tv);
[[nodiscard]] ThresholdVector thresholds_from_json(std::string_view text);

/// Whole-file helpers; "-" means stdin / stdout.
[[nodiscard]] std::string read_text(const std::string& path);
void write_text(const std::string& path, std::string_view content);

}  // namespace softeval
