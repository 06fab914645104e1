#include <random>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "softeval/errors.hpp"
#include "softeval/metrics.hpp"

using namespace softeval;
using Vec = std::vector<double>;

namespace {

SoftLabelMatrix matrix(const std::vector<std::vector<double>>& rows, std::vector<std::string> classes) {
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < rows.size(); ++i) ids.push_back("s" + std::to_string(i));
    return SoftLabelMatrix::from_rows(ids, std::move(classes), rows);
}

Vec random_vec(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Vec v(n);
    for (auto& x : v) x = u(rng);
    return v;
}

}  // namespace

TEST_CASE("intersection_mass") {
    CHECK(intersection_mass(Vec{1, 0, 1, 0}, Vec{1, 1, 0, 0}) == 1.0);
    CHECK(intersection_mass(Vec{0.3, 0.7}, Vec{0.3, 0.7}) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(intersection_mass(Vec{0.8, 0.5}, Vec{0.8, 0.2}) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK_THROWS_AS((void)intersection_mass(Vec{0.1}, Vec{0.1, 0.2}), alignment_error);
}

TEST_CASE("soft_prf examples") {
    auto a = soft_prf(Vec{1, 0, 1, 0}, Vec{1, 1, 0, 0});
    CHECK(a == PRFTriple{0.5, 0.5, 0.5, Degenerate::none});

    auto b = soft_prf(Vec{0.3, 0.7}, Vec{0.3, 0.7});
    CHECK(b == PRFTriple{1.0, 1.0, 1.0, Degenerate::none});

    auto c = soft_prf(Vec{0.8, 0.5}, Vec{0.8, 0.2});
    CHECK(c.precision == doctest::Approx(1.0 / 1.3).epsilon(1e-14));
    CHECK(c.recall == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(c.f_score == doctest::Approx(2.0 / 2.3).epsilon(1e-14));
    CHECK(c.degenerate == Degenerate::none);

    CHECK_THROWS_AS((void)soft_prf(Vec{0.1, 0.2}, Vec{0.1}), alignment_error);
}

TEST_CASE("degenerate denominators") {
    CHECK(soft_prf(Vec{0, 0}, Vec{0, 0}) == PRFTriple{1, 1, 1, Degenerate::both_empty});
    CHECK(soft_prf(Vec{0, 0}, Vec{0.4, 0}) == PRFTriple{0, 0, 0, Degenerate::empty_prediction});
    CHECK(soft_prf(Vec{0.4, 0}, Vec{0, 0}) == PRFTriple{0, 0, 0, Degenerate::empty_reference});
    CHECK(soft_prf(Vec{}, Vec{}).degenerate == Degenerate::both_empty);
}

TEST_CASE("binarize is strict") {
    CHECK(binarize(Vec{0.8, 0.5, 0.2}, 0.5) == Vec{1, 0, 0});
    CHECK(binarize(Vec{0, 1}, 0.5) == Vec{0, 1});
    CHECK(binarize(Vec{0.3, 0.7}, 0.0) == Vec{1, 1});
    CHECK_THROWS_AS((void)binarize(Vec{0.3}, 1.5), config_error);
}

TEST_CASE("hard_prf examples") {
    auto a = hard_prf(Vec{0.6, 0.4, 0.9}, Vec{1, 0, 0}, 0.5);
    CHECK(a.precision == 0.5);
    CHECK(a.recall == 1.0);
    CHECK(a.f_score == doctest::Approx(2.0 / 3.0).epsilon(1e-15));

    CHECK(hard_prf(Vec{0.8, 0.5}, Vec{1, 0}, 0.5) == PRFTriple{1, 1, 1, Degenerate::none});

    auto c = hard_prf(Vec{0.8, 0.81}, Vec{1, 0}, 0.5);
    CHECK(c.precision == 0.5);
    CHECK(c.recall == 1.0);
    CHECK(c.f_score == doctest::Approx(2.0 / 3.0).epsilon(1e-15));

    CHECK_THROWS_AS((void)hard_prf(Vec{0.8}, Vec{0.7}, 0.5), config_error);
    CHECK_THROWS_AS((void)hard_prf(Vec{0.8, 0.1}, Vec{1}, 0.5), alignment_error);
}

TEST_CASE("hard_prf equals soft_prf of the binarized prediction") {
    std::mt19937_64 rng(21);
    for (int t = 0; t < 300; ++t) {
        const std::size_t n = 1 + rng() % 40;
        auto pred = random_vec(rng, n);
        auto ref = binarize(random_vec(rng, n), 0.5);
        const double tau = static_cast<double>(rng() % 11) / 10.0;
        CHECK(hard_prf(pred, ref, tau) == soft_prf(binarize(pred, tau), ref));
    }
}

TEST_CASE("per_class_scores examples") {
    const auto same = matrix({{0.2}, {0.7}}, {"a"});
    auto s = per_class_scores(same, same, ClassSubset({"a"}), SoftMode{});
    REQUIRE(s.size() == 1);
    CHECK(s[0].prf == PRFTriple{1, 1, 1, Degenerate::none});

    const auto zero_pred = matrix({{0.0}, {0.0}}, {"a"});
    const auto some_ref = matrix({{0.3}, {0.0}}, {"a"});
    s = per_class_scores(zero_pred, some_ref, ClassSubset({"a"}), SoftMode{});
    CHECK(s[0].prf == PRFTriple{0, 0, 0, Degenerate::empty_prediction});

    const auto pred = matrix({{1, 0}, {0, 1}}, {"a", "b"});
    const auto ref = matrix({{1, 1}, {0, 0}}, {"a", "b"});
    s = per_class_scores(pred, ref, ClassSubset({"a", "b"}), SoftMode{});
    CHECK(s[0].class_name == "a");
    CHECK(s[0].prf == PRFTriple{1, 1, 1, Degenerate::none});
    CHECK(s[1].prf.f_score == 0.0);
    CHECK(s[1].prf.precision == 0.0);
    CHECK(s[1].prf.recall == 0.0);
}

TEST_CASE("per_class_scores errors") {
    const auto a = matrix({{0.2}, {0.7}}, {"a"});
    CHECK_THROWS_AS((void)per_class_scores(a, a, ClassSubset({"zzz"}), SoftMode{}), alignment_error);
    auto other = SoftLabelMatrix::from_rows({"x", "y"}, {"a"}, {{0.2}, {0.7}});
    CHECK_THROWS_AS((void)per_class_scores(a, other, ClassSubset({"a"}), SoftMode{}), alignment_error);
    CHECK_THROWS_AS((void)per_class_scores(a, a, ClassSubset({"a"}), HardPerClassMode{}), alignment_error);
}

TEST_CASE("hard modes binarize the reference at 0.5") {
    const auto pred = matrix({{0.9}, {0.2}, {0.7}}, {"a"});
    const auto ref = matrix({{0.6}, {0.5}, {0.4}}, {"a"});
    auto s = per_class_scores(pred, ref, ClassSubset({"a"}), HardFixedMode{0.5});
    CHECK(s[0].prf.precision == 0.5);
    CHECK(s[0].prf.recall == 1.0);
    auto t = per_class_scores(pred, ref, ClassSubset({"a"}),
                              HardPerClassMode{ThresholdVector::uniform({"a"}, 0.8)});
    CHECK(t[0].prf == PRFTriple{1, 1, 1, Degenerate::none});
}

TEST_CASE("micro_prf examples") {
    const auto perfect = matrix({{0.3, 0.9}, {0.6, 0.1}}, {"a", "b"});
    CHECK(micro_prf(perfect, perfect, ClassSubset::all_of(perfect), SoftMode{}).f_score == 1.0);

    // a: sum min = 1, sum pred = 2, sum ref = 1; b: 0, 0, 1
    const auto pred = matrix({{1, 0}, {1, 0}}, {"a", "b"});
    const auto ref = matrix({{1, 0}, {0, 1}}, {"a", "b"});
    auto m = micro_prf(pred, ref, ClassSubset::all_of(pred), SoftMode{});
    CHECK(m == PRFTriple{0.5, 0.5, 0.5, Degenerate::none});

    const auto zeros = matrix({{0, 0}, {0, 0}}, {"a", "b"});
    CHECK(micro_prf(zeros, zeros, ClassSubset::all_of(zeros), SoftMode{}) ==
          PRFTriple{1, 1, 1, Degenerate::both_empty});
}

TEST_CASE("macro_f examples") {
    CHECK(macro_f({{"a", {0, 0, 0.2, Degenerate::none}}, {"b", {0, 0, 0.8, Degenerate::none}}}) ==
          doctest::Approx(0.5).epsilon(1e-15));
    CHECK(macro_f({{"a", {1, 1, 1.0, Degenerate::none}}}) == 1.0);
    CHECK(macro_f({{"a", {0.6, 0.6, 0.6, Degenerate::none}}, {"b", {1, 1, 1, Degenerate::both_empty}}}) == 0.6);
    // empty reference with a prediction still counts as F = 0
    CHECK(macro_f({{"a", {1, 1, 1, Degenerate::none}}, {"b", {0, 0, 0, Degenerate::empty_reference}}}) == 0.5);
    CHECK_THROWS_AS((void)macro_f({{"a", {1, 1, 1, Degenerate::both_empty}}}), domain_error);
    CHECK_THROWS_AS((void)macro_f({}), domain_error);
}

TEST_CASE("evaluate_mode leaves macro empty when nothing is scorable") {
    const auto zeros = matrix({{0}, {0}}, {"a"});
    const auto r = evaluate_mode(zeros, zeros, ClassSubset::all_of(zeros), SoftMode{});
    CHECK_FALSE(r.macro.has_value());
    CHECK(r.micro.degenerate == Degenerate::both_empty);
}

TEST_CASE("property: range, harmonic identity, symmetry") {
    std::mt19937_64 rng(99);
    for (int t = 0; t < 2000; ++t) {
        const std::size_t n = 1 + rng() % 30;
        auto pred = random_vec(rng, n);
        auto ref = random_vec(rng, n);
        const auto s = soft_prf(pred, ref);
        CHECK((s.precision >= 0 && s.precision <= 1));
        CHECK((s.recall >= 0 && s.recall <= 1));
        CHECK((s.f_score >= 0 && s.f_score <= 1));
        double sp = 0, sr = 0;
        for (std::size_t i = 0; i < n; ++i) {
            sp += pred[i];
            sr += ref[i];
        }
        CHECK(intersection_mass(pred, ref) <= std::min(sp, sr) * (1 + 1e-15));
        if (s.degenerate == Degenerate::none) {
            CHECK(std::abs(s.f_score - 2 * s.precision * s.recall / (s.precision + s.recall)) < 1e-12);
        }
        const auto swapped = soft_prf(ref, pred);
        CHECK(swapped.f_score == doctest::Approx(s.f_score).epsilon(1e-14));
        CHECK(swapped.recall == s.precision);
        CHECK(swapped.precision == s.recall);
    }
}

TEST_CASE("property: idempotency holds exactly") {
    std::mt19937_64 rng(4);
    for (int t = 0; t < 500; ++t) {
        auto v = random_vec(rng, 1 + rng() % 50);
        CHECK(soft_prf(v, v) == PRFTriple{1, 1, 1, Degenerate::none});
    }
}

TEST_CASE("property: raising a prediction above its reference never raises precision") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 1000; ++t) {
        const std::size_t n = 1 + rng() % 20;
        auto pred = random_vec(rng, n);
        auto ref = random_vec(rng, n);
        const std::size_t i = rng() % n;
        const double lo = std::max(pred[i], ref[i]);
        pred[i] = lo;  // start at or above the reference
        const double before_inter = intersection_mass(pred, ref);
        const double before_p = soft_prf(pred, ref).precision;
        pred[i] = lo + (1.0 - lo) * u(rng);
        CHECK(soft_prf(pred, ref).precision <= before_p + 1e-15);
        CHECK(intersection_mass(pred, ref) == doctest::Approx(before_inter).epsilon(1e-14));
    }
}

TEST_CASE("property: binary inputs give identical soft and hard scores") {
    std::mt19937_64 rng(12);
    for (int t = 0; t < 500; ++t) {
        const std::size_t n = 1 + rng() % 30;
        Vec pred(n), ref(n);
        for (std::size_t i = 0; i < n; ++i) {
            pred[i] = static_cast<double>(rng() & 1);
            ref[i] = static_cast<double>(rng() & 1);
        }
        CHECK(soft_prf(pred, ref) == hard_prf(pred, ref, 0.5));
    }
}

TEST_CASE("degenerate names round trip") {
    for (auto d : {Degenerate::none, Degenerate::empty_prediction, Degenerate::empty_reference,
                   Degenerate::both_empty}) {
        CHECK(parse_degenerate(to_string(d)) == d);
    }
    CHECK_FALSE(parse_degenerate("mixed").has_value());
}
