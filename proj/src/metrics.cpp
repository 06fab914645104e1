#include "softeval/metrics.hpp"

#include <algorithm>

#include "softeval/errors.hpp"

namespace softeval {

namespace {

void require_same_length(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw alignment_error("prediction has " + std::to_string(a.size()) + " values but reference has " +
                              std::to_string(b.size()));
    }
}

void require_threshold(double tau) {
    if (!(tau >= 0.0 && tau <= 1.0)) {
        throw config_error("threshold " + std::to_string(tau) + " outside [0, 1]");
    }
}

void require_same_items(const SoftLabelMatrix& pred, const SoftLabelMatrix& ref) {
    if (pred.item_ids() != ref.item_ids()) {
        throw alignment_error("prediction and reference items differ or are in different order; align them first");
    }
}

ClassTotals totals_from_counts(std::string name, const kernels::Counts& c) {
    return {std::move(name), static_cast<double>(c.tp), static_cast<double>(c.tp + c.fp),
            static_cast<double>(c.tp + c.fn)};
}

}  // namespace

std::string_view to_string(Degenerate d) noexcept {
    switch (d) {
        case Degenerate::none:
            return "none";
        case Degenerate::empty_prediction:
            return "empty_prediction";
        case Degenerate::empty_reference:
            return "empty_reference";
        case Degenerate::both_empty:
            return "both_empty";
    }
    return "none";
}

std::optional<Degenerate> parse_degenerate(std::string_view s) noexcept {
    for (auto d : {Degenerate::none, Degenerate::empty_prediction, Degenerate::empty_reference,
                   Degenerate::both_empty}) {
        if (to_string(d) == s) {
            return d;
        }
    }
    return std::nullopt;
}

PRFTriple prf_from_masses(double intersection, double pred_mass, double ref_mass) noexcept {
    if (pred_mass == 0.0 && ref_mass == 0.0) {
        return {1.0, 1.0, 1.0, Degenerate::both_empty};
    }
    if (pred_mass == 0.0) {
        return {0.0, 0.0, 0.0, Degenerate::empty_prediction};
    }
    if (ref_mass == 0.0) {
        return {0.0, 0.0, 0.0, Degenerate::empty_reference};
    }
    return {intersection / pred_mass, intersection / ref_mass, 2.0 * intersection / (pred_mass + ref_mass),
            Degenerate::none};
}

PRFTriple prf_from_counts(const kernels::Counts& c) noexcept {
    const auto t = totals_from_counts({}, c);
    return prf_from_masses(t.intersection, t.pred, t.ref);
}

double intersection_mass(std::span<const double> pred, std::span<const double> ref) {
    require_same_length(pred, ref);
    return kernels::soft_sums(pred, ref).intersection;
}

PRFTriple soft_prf(std::span<const double> pred, std::span<const double> ref) {
    require_same_length(pred, ref);
    const auto s = kernels::soft_sums(pred, ref);
    return prf_from_masses(s.intersection, s.pred, s.ref);
}

std::vector<double> binarize(std::span<const double> values, double tau) {
    require_threshold(tau);
    std::vector<double> out(values.size());
    kernels::binarize(values, tau, out);
    return out;
}

PRFTriple hard_prf(std::span<const double> pred, std::span<const double> ref, double tau) {
    require_same_length(pred, ref);
    require_threshold(tau);
    if (!std::all_of(ref.begin(), ref.end(), [](double v) { return v == 0.0 || v == 1.0; })) {
        throw config_error("hard scoring needs a binary reference; binarize it first");
    }
    return prf_from_counts(kernels::hard_counts(pred, tau, ref, reference_threshold));
}

std::vector<ClassTotals> class_totals(const SoftLabelMatrix& pred, const SoftLabelMatrix& ref,
                                      const ClassSubset& subset, const Mode& mode) {
    require_same_items(pred, ref);
    const auto pred_idx = subset.resolve(pred);
    const auto ref_idx = subset.resolve(ref);
    if (const auto* per_class = std::get_if<HardPerClassMode>(&mode)) {
        for (const auto& name : subset.names()) {
            (void)per_class->thresholds.at(name);
        }
    }
    if (const auto* fixed = std::get_if<HardFixedMode>(&mode)) {
        require_threshold(fixed->tau);
    }

    std::vector<ClassTotals> out;
    out.reserve(subset.size());
    for (std::size_t k = 0; k < subset.size(); ++k) {
        const auto& name = subset.names()[k];
        const auto p = pred.column(pred_idx[k]);
        const auto r = ref.column(ref_idx[k]);
        if (std::holds_alternative<SoftMode>(mode)) {
            const auto s = kernels::soft_sums(p, r);
            out.push_back({name, s.intersection, s.pred, s.ref});
        } else {
            const double tau = std::holds_alternative<HardFixedMode>(mode)
                                   ? std::get<HardFixedMode>(mode).tau
                                   : std::get<HardPerClassMode>(mode).thresholds.at(name).tau;
            out.push_back(totals_from_counts(name, kernels::hard_counts(p, tau, r, reference_threshold)));
        }
    }
    return out;
}

ClassScores scores_from_totals(std::span<const ClassTotals> totals) {
    ClassScores out;
    out.reserve(totals.size());
    for (const auto& t : totals) {
        out.push_back({t.class_name, prf_from_masses(t.intersection, t.pred, t.ref)});
    }
    return out;
}

PRFTriple micro_from_totals(std::span<const ClassTotals> totals) noexcept {
    double inter = 0.0, pred = 0.0, ref = 0.0;
    for (const auto& t : totals) {
        inter += t.intersection;
        pred += t.pred;
        ref += t.ref;
    }
    return prf_from_masses(inter, pred, ref);
}

ClassScores per_class_scores(const SoftLabelMatrix& pred, const SoftLabelMatrix& ref, const ClassSubset& subset,
                             const Mode& mode) {
    return scores_from_totals(class_totals(pred, ref, subset, mode));
}

PRFTriple micro_prf(const SoftLabelMatrix& pred, const SoftLabelMatrix& ref, const ClassSubset& subset,
                    const Mode& mode) {
    return micro_from_totals(class_totals(pred, ref, subset, mode));
}

MacroSummary macro_summary(const ClassScores& scores) {
    MacroSummary m;
    for (const auto& s : scores) {
        if (s.prf.degenerate == Degenerate::both_empty) {
            continue;
        }
        m.precision += s.prf.precision;
        m.recall += s.prf.recall;
        m.f_score += s.prf.f_score;
        ++m.classes_scored;
    }
    if (m.classes_scored == 0) {
        throw domain_error("no scorable classes: every class has empty prediction and empty reference");
    }
    const auto n = static_cast<double>(m.classes_scored);
    m.precision /= n;
    m.recall /= n;
    m.f_score /= n;
    return m;
}

double macro_f(const ClassScores& scores) {
    return macro_summary(scores).f_score;
}

ModeScores scores_from_class_totals(std::span<const ClassTotals> totals) {
    ModeScores out{scores_from_totals(totals), micro_from_totals(totals), std::nullopt};
    const bool any_scorable = std::any_of(out.per_class.begin(), out.per_class.end(), [](const ClassScore& s) {
        return s.prf.degenerate != Degenerate::both_empty;
    });
    if (any_scorable) {
        out.macro = macro_summary(out.per_class);
    }
    return out;
}

ModeScores evaluate_mode(const SoftLabelMatrix& pred, const SoftLabelMatrix& ref, const ClassSubset& subset,
                         const Mode& mode) {
    const auto totals = class_totals(pred, ref, subset, mode);
    return scores_from_class_totals(totals);
}

}  // namespace softeval
