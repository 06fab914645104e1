#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "softeval/matrix.hpp"

namespace softeval {

/// Identifier of the sampling stack; recorded in reports so runs can be reproduced.
inline constexpr std::string_view prng_id = "mt19937_64/splitmix64-derive/gamma-ratio-beta v1";

/**
 * @brief Seeded pseudo-random source with fully specified output.
 *
 * The engine is std::mt19937_64, whose sequence is fixed by the standard. All
 * variates are derived here rather than through <random> distributions, whose
 * algorithms are implementation-defined, so a seed reproduces the same samples
 * with every standard library.
 */
class SeededGenerator {
  public:
    explicit SeededGenerator(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }

    /// Independent generator for a sub-stream: seed = splitmix64(seed ^ splitmix64(index)).
    [[nodiscard]] SeededGenerator derive(std::uint64_t index) const noexcept;

    std::uint64_t next_u64() { return engine_(); }
    /// Uniform on the open interval (0, 1), 53-bit resolution.
    double uniform();
    /// Uniform integer in [0, n); n > 0.
    std::uint64_t uniform_index(std::uint64_t n);
    /// Standard normal (Marsaglia polar method).
    double normal();
    /// Natural log of a Gamma(shape, 1) variate; stays finite for tiny shapes.
    double log_gamma_variate(double shape);
    /// Beta(alpha, beta) via the ratio of two gamma variates, evaluated in log space.
    double beta(double alpha, double beta);

  private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
    std::optional<double> spare_normal_;
};

[[nodiscard]] std::uint64_t splitmix64(std::uint64_t x) noexcept;

struct BetaShape {
    double alpha{};
    double beta{};

    friend bool operator==(const BetaShape&, const BetaShape&) = default;
};

/// Sampling distribution of one class: a beta shape, or a constant at `mean` when the fit degenerated.
struct ClassDistribution {
    std::string class_name;
    std::optional<BetaShape> shape;
    double mean{};

    [[nodiscard]] bool degenerate() const noexcept { return !shape.has_value(); }
    friend bool operator==(const ClassDistribution&, const ClassDistribution&) = default;
};

/// Ordered per-class distributions.
class BetaParams {
  public:
    BetaParams() = default;
    explicit BetaParams(std::vector<ClassDistribution> entries);

    [[nodiscard]] const std::vector<ClassDistribution>& entries() const noexcept { return entries_; }
    [[nodiscard]] std::size_t size() const noexcept { return entries_.size(); }
    [[nodiscard]] std::vector<std::string> class_names() const;
    [[nodiscard]] const ClassDistribution& at(const std::string& class_name) const;

    friend bool operator==(const BetaParams&, const BetaParams&) = default;

  private:
    std::vector<ClassDistribution> entries_;
};

/// Method-of-moments shape; empty when mean is not in (0, 1) or variance not in (0, mean(1 - mean)).
[[nodiscard]] std::optional<BetaShape> beta_from_moments(double mean, double variance) noexcept;

/// Per-class method-of-moments fit using the population variance. Columns need at least 2 values.
[[nodiscard]] BetaParams fit_betas(const SoftLabelMatrix& training, const ClassSubset& subset);

/// item_0, item_1, ...
[[nodiscard]] std::vector<std::string> make_item_ids(std::size_t n);

/// Each column i.i.d. from its class distribution; column c draws from gen.derive(c).
[[nodiscard]] SoftLabelMatrix sample_betas(const BetaParams& params, std::vector<std::string> item_ids,
                                           const SeededGenerator& gen);
[[nodiscard]] SoftLabelMatrix sample_betas(const BetaParams& params, std::size_t n_items, const SeededGenerator& gen);

/// Reassigns distributions by a uniformly random derangement, so no class keeps its own.
[[nodiscard]] BetaParams shuffle_assignment(const BetaParams& params, SeededGenerator& gen);

/// Whole training rows drawn uniformly with replacement.
[[nodiscard]] SoftLabelMatrix sample_rows(const SoftLabelMatrix& training, std::vector<std::string> item_ids,
                                          SeededGenerator& gen);
[[nodiscard]] SoftLabelMatrix sample_rows(const SoftLabelMatrix& training, std::size_t n_items,
                                          SeededGenerator& gen);

/// Every cell i.i.d. Beta(r, r).
[[nodiscard]] SoftLabelMatrix symmetric_beta_output(double r, std::vector<std::string> item_ids,
                                                    std::vector<std::string> classes, const SeededGenerator& gen);

/// Every cell equal to value.
[[nodiscard]] SoftLabelMatrix constant_output(double value, std::vector<std::string> item_ids,
                                              std::vector<std::string> classes);

}  // namespace softeval
