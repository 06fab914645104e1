#include "softeval/matrix.hpp"

#include <unordered_set>
#include <utility>

#include "softeval/errors.hpp"

namespace softeval {

namespace {

std::string cell_location(const std::string& item, const std::string& cls) {
    return "row '" + item + "', class '" + cls + "'";
}

}  // namespace

SoftLabelMatrix::SoftLabelMatrix(std::vector<std::string> item_ids, std::vector<std::string> class_names)
    : item_ids_(std::move(item_ids)), class_names_(std::move(class_names)) {
    values_.assign(item_ids_.size() * class_names_.size(), 0.0);
    build_indices();
}

SoftLabelMatrix SoftLabelMatrix::from_rows(std::vector<std::string> item_ids,
                                           std::vector<std::string> class_names,
                                           const std::vector<std::vector<double>>& rows) {
    if (rows.size() != item_ids.size()) {
        throw alignment_error("row count " + std::to_string(rows.size()) + " does not match item count " +
                              std::to_string(item_ids.size()));
    }
    SoftLabelMatrix m(std::move(item_ids), std::move(class_names));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != m.n_classes()) {
            throw alignment_error("row '" + m.item_ids_[i] + "' has " + std::to_string(rows[i].size()) +
                                  " values, expected " + std::to_string(m.n_classes()));
        }
        for (std::size_t c = 0; c < m.n_classes(); ++c) {
            m.set(i, c, rows[i][c]);
        }
    }
    return m;
}

void SoftLabelMatrix::build_indices() {
    item_lookup_.clear();
    class_lookup_.clear();
    item_lookup_.reserve(item_ids_.size());
    for (std::size_t i = 0; i < item_ids_.size(); ++i) {
        if (!item_lookup_.emplace(item_ids_[i], i).second) {
            throw parse_error("duplicate item id '" + item_ids_[i] + "'");
        }
    }
    for (std::size_t c = 0; c < class_names_.size(); ++c) {
        if (!class_lookup_.emplace(class_names_[c], c).second) {
            throw parse_error("duplicate class name '" + class_names_[c] + "'");
        }
    }
}

std::optional<std::size_t> SoftLabelMatrix::item_index(const std::string& id) const {
    if (auto it = item_lookup_.find(id); it != item_lookup_.end()) {
        return it->second;
    }
    return std::nullopt;
}

std::optional<std::size_t> SoftLabelMatrix::class_index(const std::string& name) const {
    if (auto it = class_lookup_.find(name); it != class_lookup_.end()) {
        return it->second;
    }
    return std::nullopt;
}

void SoftLabelMatrix::set(std::size_t item, std::size_t cls, double v) {
    // written as a negated range test so NaN is rejected too
    if (!(v >= 0.0 && v <= 1.0)) {
        throw parse_error("value " + std::to_string(v) + " outside [0, 1] at " +
                          cell_location(item_ids_[item], class_names_[cls]));
    }
    values_[cls * n_items() + item] = v + 0.0;  // -0.0 -> +0.0
}

void SoftLabelMatrix::set_column(std::size_t cls, std::span<const double> values) {
    if (values.size() != n_items()) {
        throw alignment_error("column length " + std::to_string(values.size()) + " does not match item count " +
                              std::to_string(n_items()));
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
        set(i, cls, values[i]);
    }
}

std::vector<double> SoftLabelMatrix::row(std::size_t item) const {
    std::vector<double> out(n_classes());
    for (std::size_t c = 0; c < n_classes(); ++c) {
        out[c] = at(item, c);
    }
    return out;
}

bool SoftLabelMatrix::is_binary() const noexcept {
    for (double v : values_) {
        if (v != 0.0 && v != 1.0) {
            return false;
        }
    }
    return true;
}

ClassSubset::ClassSubset(std::vector<std::string> selected) : selected_(std::move(selected)) {
    if (selected_.empty()) {
        throw config_error("class subset must not be empty");
    }
    std::unordered_set<std::string> seen;
    for (const auto& name : selected_) {
        if (!seen.insert(name).second) {
            throw config_error("class subset lists '" + name + "' twice");
        }
    }
}

ClassSubset ClassSubset::all_of(const SoftLabelMatrix& m) {
    return ClassSubset(m.class_names());
}

std::vector<std::size_t> ClassSubset::resolve(const SoftLabelMatrix& m) const {
    std::vector<std::size_t> idx;
    idx.reserve(selected_.size());
    std::string missing;
    for (const auto& name : selected_) {
        if (auto c = m.class_index(name)) {
            idx.push_back(*c);
        } else {
            missing += (missing.empty() ? "" : ", ") + name;
        }
    }
    if (!missing.empty()) {
        throw alignment_error("classes missing from matrix: " + missing);
    }
    return idx;
}

}  // namespace softeval
