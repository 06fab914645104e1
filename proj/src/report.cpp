#include "softeval/report.hpp"

#include <algorithm>
#include <charconv>
#include <variant>

#include "softeval/baselines.hpp"
#include "softeval/errors.hpp"
#include "softeval/kernels.hpp"
#include "softeval/thresholding.hpp"

namespace softeval {

namespace {

enum class ModeKind { soft, hard_fixed, hard_optimal };

struct ModeSpec {
    ModeKind kind;
    std::string label;
    double tau{};
};

ScoreEntry entry_from(const std::string& scope, const PRFTriple& prf) {
    return {scope, prf.precision, prf.recall, prf.f_score, std::string(to_string(prf.degenerate)), std::nullopt};
}

ScoreEntry entry_from(const MacroSummary& m) {
    return {"macro", m.precision, m.recall, m.f_score, "none", std::nullopt};
}

ModeReport mode_report(const std::string& label, const ModeScores& scores) {
    ModeReport r;
    r.mode = label;
    for (const auto& cs : scores.per_class) {
        r.per_class.push_back(entry_from(cs.class_name, cs.prf));
    }
    r.micro = entry_from("micro", scores.micro);
    if (scores.macro) {
        r.macro = entry_from(*scores.macro);
        r.macro_classes_scored = scores.macro->classes_scored;
    }
    return r;
}

Mode make_mode(const ModeSpec& spec, const SoftLabelMatrix& pred, const SoftLabelMatrix& ref,
               const ClassSubset& subset, const EvaluationOptions& options, ThresholdVector* used) {
    switch (spec.kind) {
        case ModeKind::soft:
            return SoftMode{};
        case ModeKind::hard_fixed:
            return HardFixedMode{spec.tau};
        case ModeKind::hard_optimal:
            break;
    }
    ThresholdVector tv = options.tuned_thresholds ? *options.tuned_thresholds : optimal_thresholds(pred, ref, subset);
    if (used != nullptr) {
        *used = tv;
    }
    return HardPerClassMode{std::move(tv)};
}

// Per-item contributions of one class column under a mode, as prefix sums so that
// leave-one-out totals are prefix[k] + suffix[k + 1]; sums of non-negative terms stay exactly zero
// when every remaining term is zero.
struct ColumnPrefix {
    std::vector<double> inter, pred, ref;  // size n + 1, prefix[i] = sum over items < i
    std::vector<double> s_inter, s_pred, s_ref;  // suffix[i] = sum over items >= i
};

ColumnPrefix column_prefix(std::span<const double> p, std::span<const double> r, const Mode& mode,
                           const std::string& class_name) {
    const std::size_t n = p.size();
    ColumnPrefix cp;
    cp.inter.assign(n + 1, 0.0);
    cp.pred.assign(n + 1, 0.0);
    cp.ref.assign(n + 1, 0.0);
    cp.s_inter.assign(n + 1, 0.0);
    cp.s_pred.assign(n + 1, 0.0);
    cp.s_ref.assign(n + 1, 0.0);
    auto contrib = [&](std::size_t i, double& ci, double& cpred, double& cref) {
        if (std::holds_alternative<SoftMode>(mode)) {
            ci = std::min(p[i], r[i]);
            cpred = p[i];
            cref = r[i];
            return;
        }
        const double tau = std::holds_alternative<HardFixedMode>(mode)
                               ? std::get<HardFixedMode>(mode).tau
                               : std::get<HardPerClassMode>(mode).thresholds.at(class_name).tau;
        const bool pp = p[i] > tau;
        const bool rp = r[i] > reference_threshold;
        ci = (pp && rp) ? 1.0 : 0.0;
        cpred = pp ? 1.0 : 0.0;
        cref = rp ? 1.0 : 0.0;
    };
    for (std::size_t i = 0; i < n; ++i) {
        double ci = 0, cpr = 0, cr = 0;
        contrib(i, ci, cpr, cr);
        cp.inter[i + 1] = cp.inter[i] + ci;
        cp.pred[i + 1] = cp.pred[i] + cpr;
        cp.ref[i + 1] = cp.ref[i] + cr;
    }
    for (std::size_t i = n; i-- > 0;) {
        double ci = 0, cpr = 0, cr = 0;
        contrib(i, ci, cpr, cr);
        cp.s_inter[i] = cp.s_inter[i + 1] + ci;
        cp.s_pred[i] = cp.s_pred[i + 1] + cpr;
        cp.s_ref[i] = cp.s_ref[i + 1] + cr;
    }
    return cp;
}

// Jackknife over items of every F score of one mode; fills the f_jackknife fields of `report`.
void item_jackknife_mode(ModeReport& report, const SoftLabelMatrix& pred, const SoftLabelMatrix& ref,
                         const ClassSubset& subset, const Mode& mode, const ModeScores& full) {
    const std::size_t n = pred.n_items();
    const auto pred_idx = subset.resolve(pred);
    const auto ref_idx = subset.resolve(ref);
    std::vector<ColumnPrefix> prefixes;
    prefixes.reserve(subset.size());
    for (std::size_t k = 0; k < subset.size(); ++k) {
        prefixes.push_back(column_prefix(pred.column(pred_idx[k]), ref.column(ref_idx[k]), mode, subset.names()[k]));
    }

    std::vector<std::vector<double>> class_loo(subset.size(), std::vector<double>(n));
    std::vector<double> micro_loo(n), macro_loo(n);
    bool macro_defined = full.macro.has_value();
    std::vector<ClassTotals> loo(subset.size());
    for (std::size_t k = 0; k < subset.size(); ++k) {
        loo[k].class_name = subset.names()[k];
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < subset.size(); ++k) {
            const auto& cp = prefixes[k];
            loo[k].intersection = cp.inter[i] + cp.s_inter[i + 1];
            loo[k].pred = cp.pred[i] + cp.s_pred[i + 1];
            loo[k].ref = cp.ref[i] + cp.s_ref[i + 1];
        }
        const auto scores = scores_from_class_totals(loo);
        for (std::size_t k = 0; k < subset.size(); ++k) {
            class_loo[k][i] = scores.per_class[k].prf.f_score;
        }
        micro_loo[i] = scores.micro.f_score;
        if (scores.macro) {
            macro_loo[i] = scores.macro->f_score;
        } else {
            macro_defined = false;
        }
    }
    for (std::size_t k = 0; k < subset.size(); ++k) {
        report.per_class[k].f_jackknife = jackknife(full.per_class[k].prf.f_score, class_loo[k]);
    }
    report.micro.f_jackknife = jackknife(full.micro.f_score, micro_loo);
    if (macro_defined && report.macro) {
        report.macro->f_jackknife = jackknife(full.macro->f_score, macro_loo);
    }
}

JackknifeSummary item_jackknife_kld(const SoftLabelMatrix& pred, const SoftLabelMatrix& ref,
                                    const ClassSubset& subset, double full) {
    const std::size_t n = pred.n_items();
    const auto pred_idx = subset.resolve(pred);
    const auto ref_idx = subset.resolve(ref);
    std::vector<double> per_item(n, 0.0);
    for (std::size_t k = 0; k < subset.size(); ++k) {
        const auto p = pred.column(pred_idx[k]);
        const auto r = ref.column(ref_idx[k]);
        for (std::size_t i = 0; i < n; ++i) {
            per_item[i] += bernoulli_kl(r[i], p[i]);
        }
    }
    std::vector<double> prefix(n + 1, 0.0), suffix(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        prefix[i + 1] = prefix[i] + per_item[i];
    }
    for (std::size_t i = n; i-- > 0;) {
        suffix[i] = suffix[i + 1] + per_item[i];
    }
    const double cells = static_cast<double>((n - 1) * subset.size());
    std::vector<double> loo(n);
    for (std::size_t i = 0; i < n; ++i) {
        loo[i] = (prefix[i] + suffix[i + 1]) / cells;
    }
    return jackknife(full, loo);
}

double mean_of(const std::vector<double>& v) {
    double acc = 0.0;
    for (double x : v) {
        acc += x;
    }
    return acc / static_cast<double>(v.size());
}

// Averages a score entry across runs; degenerate flag kept only when every run agrees.
ScoreEntry average_entries(const std::vector<const ScoreEntry*>& runs, bool with_jackknife) {
    ScoreEntry out;
    out.scope = runs.front()->scope;
    std::vector<double> p, r, f;
    for (const auto* e : runs) {
        p.push_back(e->precision);
        r.push_back(e->recall);
        f.push_back(e->f_score);
    }
    out.precision = mean_of(p);
    out.recall = mean_of(r);
    out.f_score = mean_of(f);
    out.degenerate = runs.front()->degenerate;
    for (const auto* e : runs) {
        if (e->degenerate != out.degenerate) {
            out.degenerate = "mixed";
        }
    }
    if (with_jackknife) {
        out.f_jackknife = jackknife_mean(f);
    }
    return out;
}

}  // namespace

std::string hard_mode_label(double tau) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), tau);
    return "hard@" + std::string(buf, res.ptr);
}

EvalReport evaluate(const std::vector<SoftLabelMatrix>& predictions, const SoftLabelMatrix& reference,
                    const ClassSubset& subset, const EvaluationOptions& options) {
    if (predictions.empty()) {
        throw config_error("no prediction matrices to evaluate");
    }
    std::vector<ModeSpec> specs;
    if (options.fixed_threshold) {
        if (!(*options.fixed_threshold >= 0.0 && *options.fixed_threshold <= 1.0)) {
            throw config_error("threshold outside [0, 1]");
        }
        specs.push_back({ModeKind::hard_fixed, hard_mode_label(*options.fixed_threshold), *options.fixed_threshold});
    }
    if (options.optimal) {
        specs.push_back({ModeKind::hard_optimal, "hard@OT", 0.0});
    }
    if (options.soft) {
        specs.push_back({ModeKind::soft, "soft", 0.0});
    }
    if (specs.empty()) {
        throw config_error("no evaluation mode selected");
    }
    if (options.jackknife == JackknifeUnit::runs && predictions.size() < 2) {
        throw config_error("jackknife over runs needs at least 2 prediction files");
    }
    if (options.jackknife == JackknifeUnit::items && predictions.size() != 1) {
        throw config_error("jackknife over items works on a single prediction file");
    }

    EvalReport report;
    report.metadata.classes = subset.names();
    for (const auto& s : specs) {
        report.metadata.modes.push_back(s.label);
    }
    report.metadata.reference_threshold = reference_threshold;
    report.metadata.kl_clip = kld_clip;
    report.metadata.ot_tuning = options.optimal ? options.ot_tuning_label : "none";
    report.metadata.jackknife_unit = options.jackknife == JackknifeUnit::runs    ? "runs"
                                     : options.jackknife == JackknifeUnit::items ? "items"
                                                                                 : "none";
    report.metadata.kernel_backend = std::string(kernels::backend_name(kernels::active_backend()));
    report.metadata.prng = std::string(prng_id);

    // run-major results
    std::vector<std::vector<ModeReport>> per_run(predictions.size());
    std::vector<double> klds;
    for (std::size_t run = 0; run < predictions.size(); ++run) {
        const auto& pred = predictions[run];
        for (const auto& spec : specs) {
            ThresholdVector used;
            const Mode mode = make_mode(spec, pred, reference, subset, options, &used);
            const auto scores = evaluate_mode(pred, reference, subset, mode);
            per_run[run].push_back(mode_report(spec.label, scores));
            if (spec.kind == ModeKind::hard_optimal && (predictions.size() == 1 || options.tuned_thresholds)) {
                report.thresholds = used;
            }
            if (options.jackknife == JackknifeUnit::items) {
                item_jackknife_mode(per_run[run].back(), pred, reference, subset, mode, scores);
            }
        }
        klds.push_back(bernoulli_kld(pred, reference, subset));
    }

    if (predictions.size() == 1) {
        report.modes = std::move(per_run.front());
        report.kld = klds.front();
        if (options.jackknife == JackknifeUnit::items) {
            report.kld_jackknife = item_jackknife_kld(predictions.front(), reference, subset, report.kld);
        }
        return report;
    }

    const bool jk = options.jackknife == JackknifeUnit::runs;
    for (std::size_t m = 0; m < specs.size(); ++m) {
        ModeReport agg;
        agg.mode = specs[m].label;
        const auto& first = per_run.front()[m];
        for (std::size_t k = 0; k < first.per_class.size(); ++k) {
            std::vector<const ScoreEntry*> entries;
            for (const auto& run : per_run) {
                entries.push_back(&run[m].per_class[k]);
            }
            agg.per_class.push_back(average_entries(entries, jk));
        }
        std::vector<const ScoreEntry*> micro;
        std::vector<const ScoreEntry*> macro;
        for (const auto& run : per_run) {
            micro.push_back(&run[m].micro);
            if (run[m].macro) {
                macro.push_back(&*run[m].macro);
            }
        }
        agg.micro = average_entries(micro, jk);
        if (macro.size() == per_run.size()) {
            agg.macro = average_entries(macro, jk);
            agg.macro_classes_scored = first.macro_classes_scored;
        }
        report.modes.push_back(std::move(agg));
    }
    report.kld = mean_of(klds);
    if (jk) {
        report.kld_jackknife = jackknife_mean(klds);
    }
    return report;
}

}  // namespace softeval
