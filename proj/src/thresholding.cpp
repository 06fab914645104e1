#include "softeval/thresholding.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

#include "softeval/errors.hpp"

namespace softeval {

namespace {

// Strictly between a and b when representable, else a (which still separates them under ">").
double separating_midpoint(double a, double b) {
    const double m = (a + b) / 2.0;
    return m < b ? m : a;
}

}  // namespace

ColumnThreshold optimal_threshold(std::span<const double> pred, std::span<const double> ref) {
    if (pred.size() != ref.size()) {
        throw alignment_error("prediction has " + std::to_string(pred.size()) + " values but reference has " +
                              std::to_string(ref.size()));
    }
    const std::size_t n = pred.size();
    std::size_t positives = 0;
    for (double r : ref) {
        positives += r > reference_threshold ? 1 : 0;
    }
    if (positives == 0) {
        return {1.0, 0.0, true};
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return pred[a] < pred[b]; });

    // Groups of equal prediction values, ascending, with their positive/negative counts.
    struct Group {
        double value;
        std::size_t pos;
        std::size_t neg;
    };
    std::vector<Group> groups;
    for (std::size_t idx : order) {
        const bool is_pos = ref[idx] > reference_threshold;
        if (groups.empty() || groups.back().value != pred[idx]) {
            groups.push_back({pred[idx], 0, 0});
        }
        (is_pos ? groups.back().pos : groups.back().neg) += 1;
    }

    const double ref_mass = static_cast<double>(positives);
    auto f_for = [&](std::size_t tp, std::size_t predicted) {
        return prf_from_masses(static_cast<double>(tp), static_cast<double>(predicted), ref_mass).f_score;
    };

    // Suffix counts: items in groups [g, end).
    std::vector<std::size_t> suffix_tp(groups.size() + 1, 0), suffix_all(groups.size() + 1, 0);
    for (std::size_t g = groups.size(); g-- > 0;) {
        suffix_tp[g] = suffix_tp[g + 1] + groups[g].pos;
        suffix_all[g] = suffix_all[g + 1] + groups[g].pos + groups[g].neg;
    }

    // Sentinel 0: everything strictly above zero.
    const std::size_t first_above_zero = groups.front().value > 0.0 ? 0 : 1;
    ColumnThreshold best{0.0, f_for(suffix_tp[first_above_zero], suffix_all[first_above_zero]), false};

    for (std::size_t g = 0; g + 1 < groups.size(); ++g) {
        const double tau = separating_midpoint(groups[g].value, groups[g + 1].value);
        const double f = f_for(suffix_tp[g + 1], suffix_all[g + 1]);
        if (f > best.f_score) {
            best = {tau, f, false};
        }
    }
    // Sentinel 1 predicts nothing: F = 0, never strictly better than the candidates above.
    return best;
}

ThresholdVector optimal_thresholds(const SoftLabelMatrix& pred, const SoftLabelMatrix& ref,
                                   const ClassSubset& subset) {
    if (pred.item_ids() != ref.item_ids()) {
        throw alignment_error("prediction and reference items differ or are in different order; align them first");
    }
    const auto pred_idx = subset.resolve(pred);
    const auto ref_idx = subset.resolve(ref);
    std::vector<ClassThreshold> entries;
    entries.reserve(subset.size());
    for (std::size_t k = 0; k < subset.size(); ++k) {
        const auto t = optimal_threshold(pred.column(pred_idx[k]), ref.column(ref_idx[k]));
        entries.push_back({subset.names()[k], t.tau, t.unscorable});
    }
    return ThresholdVector(std::move(entries));
}

ModeScores evaluate_with_thresholds(const SoftLabelMatrix& pred, const SoftLabelMatrix& ref,
                                    const ClassSubset& subset, const ThresholdVector& thresholds) {
    return evaluate_mode(pred, ref, subset, HardPerClassMode{thresholds});
}

}  // namespace softeval
