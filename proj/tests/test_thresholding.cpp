#include <random>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "softeval/errors.hpp"
#include "softeval/thresholding.hpp"

using namespace softeval;
using Vec = std::vector<double>;

namespace {

SoftLabelMatrix columns_to_matrix(const std::vector<Vec>& cols, const std::vector<std::string>& classes) {
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < cols.front().size(); ++i) ids.push_back("i" + std::to_string(i));
    SoftLabelMatrix m(ids, classes);
    for (std::size_t c = 0; c < cols.size(); ++c) m.set_column(c, cols[c]);
    return m;
}

}  // namespace

TEST_CASE("optimal_threshold examples") {
    auto a = optimal_threshold(Vec{0.1, 0.4, 0.6, 0.9}, Vec{0, 0, 1, 1});
    CHECK(a.tau == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(a.f_score == 1.0);
    CHECK_FALSE(a.unscorable);

    auto b = optimal_threshold(Vec{0.9, 0.8}, Vec{1, 1});
    CHECK(b.tau == 0.0);
    CHECK(b.f_score == 1.0);

    auto c = optimal_threshold(Vec{0.6, 0.7}, Vec{1, 0});
    // the only way to keep 0.7 out is to predict nothing, so the best is F = 2/3 at tau = 0
    CHECK(c.f_score == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(c.tau == 0.0);

    auto d = optimal_threshold(Vec{0.6, 0.7}, Vec{0, 1});
    CHECK(d.tau == doctest::Approx(0.65).epsilon(1e-15));
    CHECK(d.f_score == 1.0);
}

TEST_CASE("optimal_threshold without positives is a flagged sentinel") {
    auto t = optimal_threshold(Vec{0.2, 0.9}, Vec{0, 0.4});
    CHECK(t.unscorable);
    CHECK(t.tau == 1.0);
}

TEST_CASE("optimal_threshold handles ties and zeros") {
    // tied values must be split by group, never between equal values
    auto t = optimal_threshold(Vec{0.5, 0.5, 0.5, 0.2}, Vec{1, 0, 1, 0});
    CHECK(t.tau == doctest::Approx(0.35).epsilon(1e-15));
    CHECK(t.f_score == doctest::Approx(0.8).epsilon(1e-15));

    // zero-valued positives are unreachable with tau >= 0
    auto z = optimal_threshold(Vec{0.0, 0.0}, Vec{1, 1});
    CHECK(z.f_score == 0.0);
    CHECK(z.tau == 0.0);

    // adjacent doubles still separate
    const double a = 0.3;
    const double b = std::nextafter(a, 1.0);
    auto adj = optimal_threshold(Vec{a, b}, Vec{0, 1});
    CHECK(adj.f_score == 1.0);
    CHECK(binarize(Vec{a, b}, adj.tau) == Vec{0, 1});
}

TEST_CASE("optimal_threshold rejects misaligned input") {
    CHECK_THROWS_AS((void)optimal_threshold(Vec{0.1}, Vec{1, 0}), alignment_error);
}

TEST_CASE("property: scan reaches the brute-force optimum") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 500; ++t) {
        const std::size_t n = 1 + rng() % 8;
        Vec pred(n), ref(n);
        bool any_pos = false;
        for (std::size_t i = 0; i < n; ++i) {
            // coarse grid so ties are common
            pred[i] = 0.1 * static_cast<double>(rng() % 11);  // includes exact 0 and 1
            ref[i] = static_cast<double>(rng() & 1);
            any_pos = any_pos || ref[i] == 1.0;
        }
        const auto res = optimal_threshold(pred, ref);
        if (!any_pos) {
            CHECK(res.unscorable);
            continue;
        }
        CHECK(res.f_score == oracle::best_threshold_f(pred, ref));
        CHECK(hard_prf(pred, ref, res.tau).f_score == res.f_score);
        // smallest maximizing tau: any lower candidate value is strictly worse
        for (double lower : pred) {
            if (lower < res.tau) {
                CHECK(hard_prf(pred, ref, lower).f_score <= res.f_score);
            }
        }
    }
}

TEST_CASE("evaluate_with_thresholds") {
    const std::vector<std::string> classes{"a", "b"};
    const auto ref = columns_to_matrix({{0, 0, 1, 1}, {1, 0, 1, 0}}, classes);
    const auto pred = columns_to_matrix({{0.1, 0.4, 0.6, 0.9}, {0.3, 0.1, 0.25, 0.2}}, classes);
    const auto subset = ClassSubset(classes);

    const auto tv = optimal_thresholds(pred, ref, subset);
    REQUIRE(tv.size() == 2);
    CHECK(tv.at("a").tau == doctest::Approx(0.5));
    CHECK(tv.at("b").tau == doctest::Approx(0.225));
    const auto ot = evaluate_with_thresholds(pred, ref, subset, tv);
    REQUIRE(ot.macro.has_value());
    CHECK(ot.macro->f_score == 1.0);

    const auto fixed = evaluate_mode(pred, ref, subset, HardFixedMode{0.5});
    CHECK(fixed.per_class[1].prf.f_score == 0.0);
    CHECK(ot.macro->f_score > fixed.macro->f_score);

    const auto uniform = evaluate_with_thresholds(pred, ref, subset, ThresholdVector::uniform(classes, 0.5));
    CHECK(uniform.per_class == fixed.per_class);
    CHECK(uniform.micro == fixed.micro);

    CHECK_THROWS_AS((void)evaluate_with_thresholds(pred, ref, subset, ThresholdVector::uniform({"a"}, 0.5)),
                    alignment_error);
}

TEST_CASE("optimal thresholds flag classes without positives and skip them in macro") {
    const std::vector<std::string> classes{"a", "b"};
    const auto ref = columns_to_matrix({{0, 1}, {0, 0}}, classes);
    const auto pred = columns_to_matrix({{0.2, 0.7}, {0.9, 0.6}}, classes);
    const auto tv = optimal_thresholds(pred, ref, ClassSubset(classes));
    CHECK(tv.at("b").unscorable);
    CHECK(tv.at("b").tau == 1.0);
    const auto scores = evaluate_with_thresholds(pred, ref, ClassSubset(classes), tv);
    CHECK(scores.per_class[1].prf.degenerate == Degenerate::both_empty);
    CHECK(scores.macro->classes_scored == 1);
}

TEST_CASE("property: OT macro F dominates every uniform threshold") {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const std::vector<std::string> classes{"a", "b", "c"};
    for (int t = 0; t < 200; ++t) {
        std::vector<Vec> p(3, Vec(15)), r(3, Vec(15));
        for (int c = 0; c < 3; ++c) {
            for (int i = 0; i < 15; ++i) {
                p[c][i] = u(rng);
                r[c][i] = u(rng) < 0.3 ? 1.0 : 0.0;
            }
        }
        const auto pred = columns_to_matrix(p, classes);
        const auto ref = columns_to_matrix(r, classes);
        const ClassSubset subset(classes);
        const auto ot = evaluate_with_thresholds(pred, ref, subset, optimal_thresholds(pred, ref, subset));
        for (double tau : {0.0, 0.1, 0.3, 0.5, 0.7, 0.9, 1.0}) {
            const auto fixed = evaluate_mode(pred, ref, subset, HardFixedMode{tau});
            if (fixed.macro) {
                REQUIRE(ot.macro.has_value());
                CHECK(ot.macro->f_score >= fixed.macro->f_score);
            }
        }
    }
}

TEST_CASE("threshold vector validation") {
    CHECK_THROWS_AS(ThresholdVector({{"a", 1.5, false}}), config_error);
    CHECK_THROWS_AS(ThresholdVector({{"a", 0.5, false}, {"a", 0.2, false}}), config_error);
    const auto tv = ThresholdVector::uniform({"x", "y"}, 0.3);
    CHECK(tv.contains("y"));
    CHECK_FALSE(tv.contains("z"));
    CHECK_THROWS_AS((void)tv.at("z"), alignment_error);
}
