#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace softeval {

/// Per-class binarization threshold.
struct ClassThreshold {
    std::string class_name;
    double tau{0.5};
    /// Set when the class has no positive reference and its threshold is only a sentinel.
    bool unscorable{false};

    friend bool operator==(const ClassThreshold&, const ClassThreshold&) = default;
};

/// Ordered per-class thresholds; every tau lies in [0, 1].
class ThresholdVector {
  public:
    ThresholdVector() = default;
    explicit ThresholdVector(std::vector<ClassThreshold> entries);

    /// Same tau for every listed class.
    static ThresholdVector uniform(const std::vector<std::string>& classes, double tau);

    [[nodiscard]] const std::vector<ClassThreshold>& entries() const noexcept { return entries_; }
    [[nodiscard]] std::size_t size() const noexcept { return entries_.size(); }
    [[nodiscard]] bool contains(const std::string& class_name) const noexcept;

    /// Threshold of a class; throws alignment_error when absent.
    [[nodiscard]] const ClassThreshold& at(const std::string& class_name) const;

    friend bool operator==(const ThresholdVector&, const ThresholdVector&) = default;

  private:
    std::vector<ClassThreshold> entries_;
};

}  // namespace softeval
