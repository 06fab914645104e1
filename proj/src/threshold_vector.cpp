#include "softeval/threshold_vector.hpp"

#include <algorithm>
#include <unordered_set>
#include <utility>

#include "softeval/errors.hpp"

namespace softeval {

ThresholdVector::ThresholdVector(std::vector<ClassThreshold> entries) : entries_(std::move(entries)) {
    std::unordered_set<std::string> seen;
    for (const auto& e : entries_) {
        if (!(e.tau >= 0.0 && e.tau <= 1.0)) {
            throw config_error("threshold for class '" + e.class_name + "' outside [0, 1]");
        }
        if (!seen.insert(e.class_name).second) {
            throw config_error("duplicate threshold for class '" + e.class_name + "'");
        }
    }
}

ThresholdVector ThresholdVector::uniform(const std::vector<std::string>& classes, double tau) {
    std::vector<ClassThreshold> entries;
    entries.reserve(classes.size());
    for (const auto& c : classes) {
        entries.push_back({c, tau, false});
    }
    return ThresholdVector(std::move(entries));
}

bool ThresholdVector::contains(const std::string& class_name) const noexcept {
    return std::any_of(entries_.begin(), entries_.end(),
                       [&](const ClassThreshold& e) { return e.class_name == class_name; });
}

const ClassThreshold& ThresholdVector::at(const std::string& class_name) const {
    for (const auto& e : entries_) {
        if (e.class_name == class_name) {
            return e;
        }
    }
    throw alignment_error("missing threshold for class '" + class_name + "'");
}

}  // namespace softeval
