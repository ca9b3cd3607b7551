#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "vcc/errors.hpp"
#include "vcc/metrics.hpp"
#include "vcc/rng.hpp"

using namespace vcc;

namespace {

// Reference accuracy: try every one-to-one assignment of predicted clusters
// to true clusters. Feasible up to ~8 clusters.
double permutation_accuracy(const std::vector<int>& pred, const std::vector<int>& truth) {
    int kp = *std::max_element(pred.begin(), pred.end()) + 1;
    int kt = *std::max_element(truth.begin(), truth.end()) + 1;
    int k = std::max(kp, kt);
    std::vector<std::vector<long>> cont(k, std::vector<long>(k, 0));
    for (size_t i = 0; i < pred.size(); ++i) ++cont[pred[i]][truth[i]];
    std::vector<int> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    long best = 0;
    do {
        long mass = 0;
        for (int c = 0; c < k; ++c) mass += cont[c][perm[c]];
        best = std::max(best, mass);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return static_cast<double>(best) / pred.size();
}

// Reference NMI straight from the entropy definitions.
double entropy_nmi(const std::vector<int>& pred, const std::vector<int>& truth) {
    int kp = *std::max_element(pred.begin(), pred.end()) + 1;
    int kt = *std::max_element(truth.begin(), truth.end()) + 1;
    double n = static_cast<double>(pred.size());
    std::vector<std::vector<double>> joint(kp, std::vector<double>(kt, 0.0));
    std::vector<double> pp(kp, 0.0), pt(kt, 0.0);
    for (size_t i = 0; i < pred.size(); ++i) {
        joint[pred[i]][truth[i]] += 1.0 / n;
        pp[pred[i]] += 1.0 / n;
        pt[truth[i]] += 1.0 / n;
    }
    double hi = 0.0, ht = 0.0, mi = 0.0;
    for (double p : pp)
        if (p > 0) hi -= p * std::log(p);
    for (double p : pt)
        if (p > 0) ht -= p * std::log(p);
    for (int a = 0; a < kp; ++a)
        for (int b = 0; b < kt; ++b)
            if (joint[a][b] > 0) mi += joint[a][b] * std::log(joint[a][b] / (pp[a] * pt[b]));
    if (hi <= 0.0 || ht <= 0.0) return mi > 0 ? 1.0 : 0.0;
    return mi / std::sqrt(hi * ht);
}

std::vector<int> random_labels(int n, int k, uint64_t seed) {
    std::vector<int> v(n);
    Rng r(seed);
    for (int i = 0; i < n; ++i) v[i] = static_cast<int>(r.below(k));
    return v;
}

} // namespace

TEST_CASE("contingency table counts co-occurrences") {
    std::vector<int> pred{0, 0, 1, 1, 2};
    std::vector<int> truth{1, 1, 0, 1, 0};
    Mat<int64_t> c = contingency_table(pred, truth);
    REQUIRE(c.rows == 3);
    REQUIRE(c.cols == 2);
    CHECK(c(0, 1) == 2);
    CHECK(c(1, 0) == 1);
    CHECK(c(1, 1) == 1);
    CHECK(c(2, 0) == 1);
    CHECK(c(0, 0) == 0);
}

TEST_CASE("accuracy is 1 for a relabeled copy") {
    std::vector<int> truth{0, 1, 2, 0, 1, 2, 2, 1};
    std::vector<int> pred;
    for (int t : truth) pred.push_back((t + 1) % 3);
    auto [acc, mapping] = accuracy(pred, truth);
    CHECK(acc == 1.0);
    REQUIRE(mapping.size() == 3);
    CHECK(mapping[1] == 0);
    CHECK(mapping[2] == 1);
    CHECK(mapping[0] == 2);
}

TEST_CASE("accuracy on a half-right labeling") {
    std::vector<int> truth{0, 0, 1, 1};
    std::vector<int> pred{0, 1, 0, 1};
    auto [acc, mapping] = accuracy(pred, truth);
    CHECK(acc == 0.5);
}

TEST_CASE("accuracy handles unequal cluster counts via padding") {
    // 3 predicted clusters, 2 true: one predicted cluster matches nothing
    std::vector<int> truth{0, 0, 0, 1, 1, 1};
    std::vector<int> pred{0, 0, 1, 2, 2, 1};
    auto [acc, mapping] = accuracy(pred, truth);
    CHECK(acc == doctest::Approx(4.0 / 6.0));
    REQUIRE(mapping.size() == 3);
    int unmatched = 0;
    for (int m : mapping) unmatched += m == -1 ? 1 : 0;
    CHECK(unmatched == 1);
}

TEST_CASE("matching equals exhaustive permutation search on random instances") {
    Rng meta(2024);
    for (int trial = 0; trial < 60; ++trial) {
        int k = 2 + static_cast<int>(meta.below(5));          // up to 6 clusters
        int n = 20 + static_cast<int>(meta.below(60));
        auto pred = random_labels(n, k, 1000 + trial);
        auto truth = random_labels(n, k, 2000 + trial);
        auto [acc, mapping] = accuracy(pred, truth);
        CHECK(acc == doctest::Approx(permutation_accuracy(pred, truth)).epsilon(1e-15));
    }
}

TEST_CASE("accuracy never drops below the trivial floor on random labelings") {
    for (int trial = 0; trial < 10; ++trial) {
        int k = 2 + trial % 4;
        auto pred = random_labels(200, k, 3000 + trial);
        auto truth = random_labels(200, k, 4000 + trial);
        auto [acc, mapping] = accuracy(pred, truth);
        CHECK(acc >= 1.0 / k);
        CHECK(acc <= 1.0);
    }
}

TEST_CASE("nmi matches the entropy formula to near machine precision") {
    Rng meta(77);
    for (int trial = 0; trial < 40; ++trial) {
        int kp = 2 + static_cast<int>(meta.below(4));
        int kt = 2 + static_cast<int>(meta.below(4));
        int n = 30 + static_cast<int>(meta.below(100));
        auto pred = random_labels(n, kp, 5000 + trial);
        auto truth = random_labels(n, kt, 6000 + trial);
        double got = nmi(pred, truth);
        double ref = entropy_nmi(pred, truth);
        CHECK(std::abs(got - ref) < 1e-12);
        CHECK(got >= 0.0);
        CHECK(got <= 1.0 + 1e-12);
    }
}

TEST_CASE("nmi is symmetric") {
    auto a = random_labels(120, 3, 11);
    auto b = random_labels(120, 4, 12);
    CHECK(nmi(a, b) == doctest::Approx(nmi(b, a)).epsilon(1e-13));
}

TEST_CASE("nmi of a relabeled copy is exactly one") {
    std::vector<int> truth{0, 1, 2, 0, 1, 2, 1, 0, 2, 2};
    std::vector<int> pred;
    for (int t : truth) pred.push_back(2 - t);
    CHECK(nmi(pred, truth) == 1.0);
    CHECK(nmi(truth, truth) == 1.0);
}

TEST_CASE("nmi with a constant side is exactly zero") {
    std::vector<int> constant(50, 0);
    auto varied = random_labels(50, 3, 13);
    CHECK(nmi(constant, varied) == 0.0);
    CHECK(nmi(varied, constant) == 0.0);
}

TEST_CASE("independent labelings give near-zero nmi, dependent give high") {
    auto truth = random_labels(5000, 4, 14);
    auto indep = random_labels(5000, 4, 15);
    CHECK(nmi(indep, truth) < 0.01);
    std::vector<int> noisy = truth;
    Rng r(16);
    for (int i = 0; i < 250; ++i) noisy[r.below(5000)] = static_cast<int>(r.below(4));
    CHECK(nmi(noisy, truth) > 0.7);
}

TEST_CASE("metrics reject malformed label vectors") {
    std::vector<int> a{0, 1, 2};
    std::vector<int> b{0, 1};
    CHECK_THROWS_AS(accuracy(a, b), LengthError);
    CHECK_THROWS_AS(nmi(a, b), LengthError);
    std::vector<int> neg{0, -1, 2};
    CHECK_THROWS_AS(accuracy(a, neg), ArgumentError);
    std::vector<int> empty;
    CHECK_THROWS_AS(accuracy(empty, empty), LengthError);
}

TEST_CASE("evaluate bundles everything consistently") {
    auto truth = random_labels(150, 3, 17);
    auto pred = random_labels(150, 3, 18);
    MetricsReport rep = evaluate(pred, truth);
    auto [acc, mapping] = accuracy(pred, truth);
    CHECK(rep.acc == acc);
    CHECK(rep.nmi == nmi(pred, truth));
    CHECK(rep.mapping == mapping);
    CHECK(rep.contingency.rows == 3);
    long total = 0;
    for (size_t t = 0; t < rep.contingency.size(); ++t) total += rep.contingency.a[t];
    CHECK(total == 150);
}
