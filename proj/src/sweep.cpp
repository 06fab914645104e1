#include "softeval/sweep.hpp"

#include <charconv>
#include <cmath>

#include "softeval/errors.hpp"
#include "softeval/metrics.hpp"
#include "softeval/stats.hpp"
#include "softeval/thresholding.hpp"

namespace softeval {

namespace {

std::string shortest(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return {buf, res.ptr};
}

}  // namespace

std::vector<double> make_grid(double start, double stop, double step) {
    if (!(step > 0.0) || !std::isfinite(start) || !std::isfinite(stop) || stop < start) {
        throw config_error("grid needs finite start <= stop and step > 0");
    }
    std::vector<double> grid;
    for (std::size_t k = 0;; ++k) {
        const double raw = start + static_cast<double>(k) * step;
        if (raw > stop + 1e-9) {
            break;
        }
        grid.push_back(std::round(raw * 1e9) / 1e9);
    }
    return grid;
}

void validate_grid(const std::vector<double>& grid) {
    if (grid.empty()) {
        throw config_error("sweep grid is empty");
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!std::isfinite(grid[i])) {
            throw config_error("sweep grid contains a non-finite value");
        }
        if (i > 0 && !(grid[i] > grid[i - 1])) {
            throw config_error("sweep grid must be strictly increasing");
        }
    }
}

std::vector<EpsilonPoint> epsilon_sweep(const std::vector<double>& grid, const EpsilonSetup& setup) {
    validate_grid(grid);
    std::vector<double> ref = setup.fixed_points;
    ref.push_back(setup.perturbed_reference);
    for (double v : ref) {
        if (!(v >= 0.0 && v <= 1.0)) {
            throw config_error("sweep reference values must lie in [0, 1]");
        }
    }
    const auto ref_binary = binarize(ref, reference_threshold);
    std::vector<double> pred = ref;

    std::vector<EpsilonPoint> out;
    out.reserve(grid.size());
    for (double eps : grid) {
        pred.back() = setup.perturbed_reference + eps;
        if (!(pred.back() >= 0.0 && pred.back() <= 1.0)) {
            throw config_error("epsilon " + shortest(eps) + " moves the prediction outside [0, 1]");
        }
        const auto soft = soft_prf(pred, ref);
        const auto hard = hard_prf(pred, ref_binary, reference_threshold);
        out.push_back({eps, soft.f_score, hard.f_score, kld_sum(pred, ref) / static_cast<double>(ref.size())});
    }
    return out;
}

SoftLabelMatrix synthetic_reference(std::size_t n_items, std::vector<std::string> classes,
                                    const SeededGenerator& gen) {
    SoftLabelMatrix m(make_item_ids(n_items), std::move(classes));
    std::vector<double> column(n_items);
    for (std::size_t c = 0; c < m.n_classes(); ++c) {
        auto stream = gen.derive(c);
        for (double& v : column) {
            v = stream.uniform() < 0.3 ? stream.beta(3.0, 1.5) : stream.beta(0.5, 6.0);
        }
        m.set_column(c, column);
    }
    return m;
}

std::vector<BetaRPoint> beta_r_sweep(const SoftLabelMatrix& reference, const std::vector<double>& grid,
                                     const SeededGenerator& gen, std::optional<double> constant_value) {
    validate_grid(grid);
    const auto subset = ClassSubset::all_of(reference);
    auto score = [&](const std::string& series, double x, const SoftLabelMatrix& pred) {
        BetaRPoint p{series, x};
        const auto soft = evaluate_mode(pred, reference, subset, SoftMode{});
        const auto hard = evaluate_mode(pred, reference, subset, HardFixedMode{0.5});
        const auto ot = evaluate_with_thresholds(pred, reference, subset, optimal_thresholds(pred, reference, subset));
        p.soft_f = soft.micro.f_score;
        p.soft_macro_f = soft.macro ? soft.macro->f_score : std::nan("");
        p.hard_f = hard.micro.f_score;
        p.hard_macro_f = hard.macro ? hard.macro->f_score : std::nan("");
        p.ot_f = ot.micro.f_score;
        p.ot_macro_f = ot.macro ? ot.macro->f_score : std::nan("");
        p.kld = bernoulli_kld(pred, reference, subset);
        return p;
    };

    std::vector<BetaRPoint> out;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const auto pred = symmetric_beta_output(grid[k], reference.item_ids(), reference.class_names(), gen.derive(k));
        out.push_back(score("beta_r", grid[k], pred));
    }
    if (constant_value) {
        out.push_back(score("constant", *constant_value,
                            constant_output(*constant_value, reference.item_ids(), reference.class_names())));
    }
    return out;
}

std::string format_epsilon_csv(const std::vector<EpsilonPoint>& points) {
    std::string out = "x,soft_F,hard_F,kld\n";
    for (const auto& p : points) {
        out += shortest(p.epsilon) + ',' + shortest(p.soft_f) + ',' + shortest(p.hard_f) + ',' + shortest(p.kld) + '\n';
    }
    return out;
}

std::string format_beta_r_csv(const std::vector<BetaRPoint>& points) {
    std::string out = "x,soft_F,hard_F,kld,soft_macro_F,hard_macro_F,ot_F,ot_macro_F,series\n";
    for (const auto& p : points) {
        out += shortest(p.x) + ',' + shortest(p.soft_f) + ',' + shortest(p.hard_f) + ',' + shortest(p.kld) + ',' +
               shortest(p.soft_macro_f) + ',' + shortest(p.hard_macro_f) + ',' + shortest(p.ot_f) + ',' +
               shortest(p.ot_macro_f) + ',' + p.series + '\n';
    }
    return out;
}

}  // namespace softeval
