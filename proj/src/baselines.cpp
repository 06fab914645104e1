#include "softeval/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

#include "softeval/errors.hpp"

namespace softeval {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

SeededGenerator SeededGenerator::derive(std::uint64_t index) const noexcept {
    return SeededGenerator(splitmix64(seed_ ^ splitmix64(index)));
}

double SeededGenerator::uniform() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

std::uint64_t SeededGenerator::uniform_index(std::uint64_t n) {
    // reject the low partial block so every residue is equally likely
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
        const std::uint64_t x = engine_();
        if (x >= threshold) {
            return x % n;
        }
    }
}

double SeededGenerator::normal() {
    if (spare_normal_) {
        const double v = *spare_normal_;
        spare_normal_.reset();
        return v;
    }
    for (;;) {
        const double u = 2.0 * uniform() - 1.0;
        const double v = 2.0 * uniform() - 1.0;
        const double s = u * u + v * v;
        if (s > 0.0 && s < 1.0) {
            const double f = std::sqrt(-2.0 * std::log(s) / s);
            spare_normal_ = v * f;
            return u * f;
        }
    }
}

double SeededGenerator::log_gamma_variate(double shape) {
    if (shape < 1.0) {
        // Gamma(a) = Gamma(a + 1) * U^(1/a), kept in log space so a -> 0 does not underflow
        return log_gamma_variate(shape + 1.0) + std::log(uniform()) / shape;
    }
    // Marsaglia & Tsang squeeze/rejection
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x = 0.0;
        double v = 0.0;
        do {
            x = normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = uniform();
        if (u < 1.0 - 0.0331 * (x * x) * (x * x)) {
            return std::log(d * v);
        }
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) {
            return std::log(d * v);
        }
    }
}

double SeededGenerator::beta(double alpha, double beta) {
    const double lx = log_gamma_variate(alpha);
    const double ly = log_gamma_variate(beta);
    // X / (X + Y) = 1 / (1 + Y / X)
    return 1.0 / (1.0 + std::exp(ly - lx));
}

BetaParams::BetaParams(std::vector<ClassDistribution> entries) : entries_(std::move(entries)) {
    for (const auto& e : entries_) {
        if (e.shape && !(e.shape->alpha > 0.0 && e.shape->beta > 0.0)) {
            throw config_error("beta parameters of class '" + e.class_name + "' must be positive");
        }
        if (!(e.mean >= 0.0 && e.mean <= 1.0)) {
            throw config_error("mean of class '" + e.class_name + "' outside [0, 1]");
        }
    }
}

std::vector<std::string> BetaParams::class_names() const {
    std::vector<std::string> names;
    names.reserve(entries_.size());
    for (const auto& e : entries_) {
        names.push_back(e.class_name);
    }
    return names;
}

const ClassDistribution& BetaParams::at(const std::string& class_name) const {
    for (const auto& e : entries_) {
        if (e.class_name == class_name) {
            return e;
        }
    }
    throw alignment_error("no distribution for class '" + class_name + "'");
}

std::optional<BetaShape> beta_from_moments(double mean, double variance) noexcept {
    if (!(mean > 0.0 && mean < 1.0)) {
        return std::nullopt;
    }
    const double spread = mean * (1.0 - mean);
    if (!(variance > 0.0 && variance < spread)) {
        return std::nullopt;
    }
    const double common = spread / variance - 1.0;
    return BetaShape{mean * common, (1.0 - mean) * common};
}

BetaParams fit_betas(const SoftLabelMatrix& training, const ClassSubset& subset) {
    if (training.n_items() < 2) {
        throw domain_error("beta fitting needs at least 2 values per class, got " +
                           std::to_string(training.n_items()));
    }
    const auto idx = subset.resolve(training);
    const auto n = static_cast<double>(training.n_items());
    std::vector<ClassDistribution> out;
    out.reserve(idx.size());
    for (std::size_t k = 0; k < idx.size(); ++k) {
        const auto col = training.column(idx[k]);
        double sum = 0.0;
        for (double v : col) {
            sum += v;
        }
        const auto [lo, hi] = std::minmax_element(col.begin(), col.end());
        if (*lo == *hi) {
            // rounding in the mean would otherwise leave a tiny spurious variance
            out.push_back({subset.names()[k], std::nullopt, *lo});
            continue;
        }
        const double mean = sum / n;
        double ss = 0.0;
        for (double v : col) {
            ss += (v - mean) * (v - mean);
        }
        out.push_back({subset.names()[k], beta_from_moments(mean, ss / n), std::clamp(mean, 0.0, 1.0)});
    }
    return BetaParams(std::move(out));
}

std::vector<std::string> make_item_ids(std::size_t n) {
    std::vector<std::string> ids;
    ids.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        ids.push_back("item_" + std::to_string(i));
    }
    return ids;
}

SoftLabelMatrix sample_betas(const BetaParams& params, std::vector<std::string> item_ids,
                             const SeededGenerator& gen) {
    SoftLabelMatrix m(std::move(item_ids), params.class_names());
    std::vector<double> column(m.n_items());
    for (std::size_t c = 0; c < params.size(); ++c) {
        const auto& dist = params.entries()[c];
        auto stream = gen.derive(c);
        for (double& v : column) {
            v = dist.shape ? stream.beta(dist.shape->alpha, dist.shape->beta) : dist.mean;
        }
        m.set_column(c, column);
    }
    return m;
}

SoftLabelMatrix sample_betas(const BetaParams& params, std::size_t n_items, const SeededGenerator& gen) {
    return sample_betas(params, make_item_ids(n_items), gen);
}

BetaParams shuffle_assignment(const BetaParams& params, SeededGenerator& gen) {
    const std::size_t n = params.size();
    if (n < 2) {
        throw config_error("shuffled assignment needs at least 2 classes");
    }
    // Rejection of uniform permutations with fixed points leaves a uniform derangement.
    std::vector<std::size_t> perm(n);
    bool has_fixed_point = true;
    while (has_fixed_point) {
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        for (std::size_t i = n - 1; i > 0; --i) {
            std::swap(perm[i], perm[gen.uniform_index(i + 1)]);
        }
        has_fixed_point = false;
        for (std::size_t i = 0; i < n; ++i) {
            has_fixed_point = has_fixed_point || perm[i] == i;
        }
    }
    std::vector<ClassDistribution> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& donor = params.entries()[perm[i]];
        out.push_back({params.entries()[i].class_name, donor.shape, donor.mean});
    }
    return BetaParams(std::move(out));
}

SoftLabelMatrix sample_rows(const SoftLabelMatrix& training, std::vector<std::string> item_ids,
                            SeededGenerator& gen) {
    if (training.empty()) {
        throw domain_error("cannot sample rows from an empty training matrix");
    }
    SoftLabelMatrix m(std::move(item_ids), training.class_names());
    for (std::size_t i = 0; i < m.n_items(); ++i) {
        const std::size_t src = gen.uniform_index(training.n_items());
        for (std::size_t c = 0; c < m.n_classes(); ++c) {
            m.set(i, c, training.at(src, c));
        }
    }
    return m;
}

SoftLabelMatrix sample_rows(const SoftLabelMatrix& training, std::size_t n_items, SeededGenerator& gen) {
    return sample_rows(training, make_item_ids(n_items), gen);
}

SoftLabelMatrix symmetric_beta_output(double r, std::vector<std::string> item_ids, std::vector<std::string> classes,
                                      const SeededGenerator& gen) {
    if (!(r > 0.0) || !std::isfinite(r)) {
        throw config_error("symmetric beta parameter r must be positive");
    }
    std::vector<ClassDistribution> entries;
    entries.reserve(classes.size());
    for (auto& c : classes) {
        entries.push_back({std::move(c), BetaShape{r, r}, 0.5});
    }
    return sample_betas(BetaParams(std::move(entries)), std::move(item_ids), gen);
}

SoftLabelMatrix constant_output(double value, std::vector<std::string> item_ids, std::vector<std::string> classes) {
    if (!(value >= 0.0 && value <= 1.0)) {
        throw config_error("constant output value must lie in [0, 1]");
    }
    SoftLabelMatrix m(std::move(item_ids), std::move(classes));
    const std::vector<double> column(m.n_items(), value);
    for (std::size_t c = 0; c < m.n_classes(); ++c) {
        m.set_column(c, column);
    }
    return m;
}

}  // namespace softeval
