#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace softeval {

/**
 * @brief Items x classes grid of membership grades in [0, 1].
 *
 * Used for both system outputs and references. Storage is column-major so that
 * every class column is a contiguous span; all metric kernels operate per column.
 */
class SoftLabelMatrix {
  public:
    SoftLabelMatrix() = default;

    /// All-zero matrix. Throws parse_error on duplicate item ids or class names.
    SoftLabelMatrix(std::vector<std::string> item_ids, std::vector<std::string> class_names);

    /// Builds from row-major data; every value is range checked.
    static SoftLabelMatrix from_rows(std::vector<std::string> item_ids,
                                     std::vector<std::string> class_names,
                                     const std::vector<std::vector<double>>& rows);

    [[nodiscard]] std::size_t n_items() const noexcept { return item_ids_.size(); }
    [[nodiscard]] std::size_t n_classes() const noexcept { return class_names_.size(); }
    [[nodiscard]] std::size_t n_cells() const noexcept { return values_.size(); }
    [[nodiscard]] bool empty() const noexcept { return item_ids_.empty(); }

    [[nodiscard]] const std::vector<std::string>& item_ids() const noexcept { return item_ids_; }
    [[nodiscard]] const std::vector<std::string>& class_names() const noexcept { return class_names_; }

    [[nodiscard]] std::optional<std::size_t> item_index(const std::string& id) const;
    [[nodiscard]] std::optional<std::size_t> class_index(const std::string& name) const;

    [[nodiscard]] double at(std::size_t item, std::size_t cls) const {
        return values_[cls * n_items() + item];
    }
    /// Range-checked write; throws parse_error naming the cell when v is outside [0, 1].
    void set(std::size_t item, std::size_t cls, double v);

    [[nodiscard]] std::span<const double> column(std::size_t cls) const {
        return {values_.data() + cls * n_items(), n_items()};
    }
    void set_column(std::size_t cls, std::span<const double> values);

    [[nodiscard]] std::vector<double> row(std::size_t item) const;

    /// True when every cell is exactly 0 or 1.
    [[nodiscard]] bool is_binary() const noexcept;

    friend bool operator==(const SoftLabelMatrix& a, const SoftLabelMatrix& b) {
        return a.item_ids_ == b.item_ids_ && a.class_names_ == b.class_names_ && a.values_ == b.values_;
    }

  private:
    void build_indices();

    std::vector<std::string> item_ids_;
    std::vector<std::string> class_names_;
    std::vector<double> values_;
    std::unordered_map<std::string, std::size_t> item_lookup_;
    std::unordered_map<std::string, std::size_t> class_lookup_;
};

/// Ordered, duplicate-free, non-empty selection of class names to evaluate.
class ClassSubset {
  public:
    explicit ClassSubset(std::vector<std::string> selected);

    /// Every class of the matrix, in matrix order.
    static ClassSubset all_of(const SoftLabelMatrix& m);

    [[nodiscard]] const std::vector<std::string>& names() const noexcept { return selected_; }
    [[nodiscard]] std::size_t size() const noexcept { return selected_.size(); }

    /// Column indices of the subset in m; throws alignment_error naming any missing class.
    [[nodiscard]] std::vector<std::size_t> resolve(const SoftLabelMatrix& m) const;

    friend bool operator==(const ClassSubset&, const ClassSubset&) = default;

  private:
    std::vector<std::string> selected_;
};

}  // namespace softeval
