#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>
#include <vector>

#include "vcc/errors.hpp"
#include "vcc/graph.hpp"
#include "vcc/rng.hpp"

using namespace vcc;

namespace {

Dataset gaussian_data(int n, int d, uint64_t seed, double scale = 1.0) {
    Dataset ds;
    ds.features = Mat<double>(n, d);
    Rng r(seed);
    for (size_t i = 0; i < ds.features.size(); ++i)
        ds.features.a[i] = r.gaussian() * scale;
    return ds;
}

// Independent reference: sort ALL other points by (squared distance, index)
// and keep the first m.
void reference_knn(const Dataset& ds, int m, Mat<int>& idx, Mat<double>& dist) {
    int n = ds.n(), d = ds.dim();
    idx = Mat<int>(n, m);
    dist = Mat<double>(n, m);
    for (int i = 0; i < n; ++i) {
        std::vector<std::pair<double, int>> cand;
        cand.reserve(n - 1);
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            double s = 0.0;
            for (int t = 0; t < d; ++t) {
                double diff = ds.features(i, t) - ds.features(j, t);
                s += diff * diff;
            }
            cand.emplace_back(s, j);
        }
        std::sort(cand.begin(), cand.end());
        for (int c = 0; c < m; ++c) {
            idx(i, c) = cand[c].second;
            dist(i, c) = std::sqrt(cand[c].first);
        }
    }
}

} // namespace

TEST_CASE("knn matches the exhaustive sort reference exactly") {
    for (uint64_t seed : {1ull, 2ull, 3ull}) {
        Dataset ds = gaussian_data(60, 5, seed);
        Mat<int> idx, ridx;
        Mat<double> dist, rdist;
        knn_distances(ds, 7, idx, dist);
        reference_knn(ds, 7, ridx, rdist);
        REQUIRE(idx.rows == 60);
        REQUIRE(idx.cols == 7);
        for (int i = 0; i < 60; ++i)
            for (int c = 0; c < 7; ++c) {
                CHECK(idx(i, c) == ridx(i, c));
                // same algorithm, but fused-multiply-add contraction may differ
                // between translation units, so allow last-few-ulp slack
                CHECK(dist(i, c) == doctest::Approx(rdist(i, c)).epsilon(1e-12));
            }
    }
}

TEST_CASE("knn breaks distance ties by lower index") {
    // five copies of the same point plus distant fillers: every copy must list
    // the other copies in ascending index order
    Dataset ds;
    ds.features = Mat<double>(8, 2, 0.0);
    for (int i = 5; i < 8; ++i) {
        ds.features(i, 0) = 100.0 + i;
        ds.features(i, 1) = -50.0;
    }
    Mat<int> idx;
    Mat<double> dist;
    knn_distances(ds, 4, idx, dist);
    for (int i = 0; i < 5; ++i) {
        std::vector<int> expect;
        for (int j = 0; j < 5 && static_cast<int>(expect.size()) < 4; ++j)
            if (j != i) expect.push_back(j);
        for (int c = 0; c < 4; ++c) {
            CHECK(idx(i, c) == expect[c]);
            CHECK(dist(i, c) == 0.0);
        }
    }

    Mat<int> ridx;
    Mat<double> rdist;
    reference_knn(ds, 4, ridx, rdist);
    CHECK(idx == ridx);
}

TEST_CASE("knn never returns self and rejects bad m") {
    Dataset ds = gaussian_data(20, 3, 5);
    Mat<int> idx;
    Mat<double> dist;
    knn_distances(ds, 19, idx, dist);
    for (int i = 0; i < 20; ++i)
        for (int c = 0; c < 19; ++c) REQUIRE(idx(i, c) != i);
    CHECK_THROWS_AS(knn_distances(ds, 0, idx, dist), ArgumentError);
    CHECK_THROWS_AS(knn_distances(ds, 20, idx, dist), ArgumentError);
}

TEST_CASE("knn distance rows are ascending") {
    Dataset ds = gaussian_data(50, 4, 9);
    Mat<int> idx;
    Mat<double> dist;
    knn_distances(ds, 10, idx, dist);
    for (int i = 0; i < 50; ++i)
        for (int c = 1; c < 10; ++c) CHECK(dist(i, c) >= dist(i, c - 1));
}

TEST_CASE("softmax rows sum to one and match a long-double reference") {
    Rng r(42);
    Mat<double> d(12, 6);
    for (size_t i = 0; i < d.size(); ++i) d.a[i] = r.uniform(0.0, 30.0);
    Mat<double> f = softmax_forces(d);
    for (int i = 0; i < d.rows; ++i) {
        double sum = 0.0;
        long double lsum = 0.0L;
        for (int c = 0; c < d.cols; ++c) {
            REQUIRE(f(i, c) > 0.0);
            sum += f(i, c);
            lsum += expl(-static_cast<long double>(d(i, c)));
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
        for (int c = 0; c < d.cols; ++c) {
            long double ref = expl(-static_cast<long double>(d(i, c))) / lsum;
            CHECK(f(i, c) == doctest::Approx(static_cast<double>(ref)).epsilon(1e-13));
        }
    }
}

TEST_CASE("softmax survives rows that would overflow a naive exp") {
    Mat<double> d(1, 3);
    d(0, 0) = 5000.0;
    d(0, 1) = 5001.0;
    d(0, 2) = 5002.0;
    Mat<double> f = softmax_forces(d);
    double sum = f(0, 0) + f(0, 1) + f(0, 2);
    CHECK(std::isfinite(sum));
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(f(0, 0) > f(0, 1));
    CHECK(f(0, 1) > f(0, 2));
}

TEST_CASE("softmax rejects non-finite distances") {
    Mat<double> d(1, 2, 1.0);
    d(0, 1) = std::nan("");
    CHECK_THROWS_AS(softmax_forces(d), ArgumentError);
}

TEST_CASE("symmetrize implements w = a + b - a*b over directed forces") {
    Dataset ds = gaussian_data(40, 3, 17);
    LatentGraph g = build_latent_graph(ds, 6);

    // reference: collect both directions from the force matrix by hand
    std::map<std::pair<int, int>, std::pair<double, double>> dir;
    for (int i = 0; i < g.n; ++i)
        for (int c = 0; c < 6; ++c) {
            int j = g.neighbor_idx(i, c);
            auto key = std::make_pair(std::min(i, j), std::max(i, j));
            if (i < j)
                dir[key].first = g.forces(i, c);
            else
                dir[key].second = g.forces(i, c);
        }
    REQUIRE(g.edges.size() == dir.size());
    size_t at = 0;
    double wmax = 0.0, wsum = 0.0;
    for (const auto& [key, ab] : dir) {
        const auto& e = g.edges[at++];
        CHECK(e.i == key.first);
        CHECK(e.j == key.second);
        double expect = ab.first + ab.second - ab.first * ab.second;
        CHECK(e.w == doctest::Approx(expect).epsilon(1e-15));
        // equivalent complement form, algebraically 1 - (1-a)(1-b)
        CHECK(e.w == doctest::Approx(1.0 - (1.0 - ab.first) * (1.0 - ab.second)).epsilon(1e-12));
        CHECK(e.w > 0.0);
        CHECK(e.w <= 1.0);
        wmax = std::max(wmax, e.w);
        wsum += e.w;
    }
    CHECK(g.f_max == doctest::Approx(wmax).epsilon(1e-15));
    CHECK(g.f_mean == doctest::Approx(wsum / dir.size()).epsilon(1e-15));
}

TEST_CASE("edges are sorted, unique, and well-formed") {
    Dataset ds = gaussian_data(35, 4, 23);
    LatentGraph g = build_latent_graph(ds, 5);
    for (size_t e = 0; e < g.edges.size(); ++e) {
        CHECK(g.edges[e].i < g.edges[e].j);
        if (e > 0) {
            bool ordered = g.edges[e - 1].i < g.edges[e].i ||
                           (g.edges[e - 1].i == g.edges[e].i && g.edges[e - 1].j < g.edges[e].j);
            CHECK(ordered);
        }
    }
}

TEST_CASE("one-sided neighbor pairs still get an edge") {
    // a far outlier picks some hub as neighbor, but no hub picks the outlier
    Dataset ds;
    ds.features = Mat<double>(6, 1);
    for (int i = 0; i < 5; ++i) ds.features(i, 0) = i * 0.1;
    ds.features(5, 0) = 1000.0;
    LatentGraph g = build_latent_graph(ds, 2);
    bool outlier_edge = false;
    for (const auto& e : g.edges) outlier_edge |= e.j == 5;
    CHECK(outlier_edge);
}

TEST_CASE("boundary score is the unbiased variance of each distance row") {
    Mat<double> d(3, 3);
    // row 0: {1,2,3} -> mean 2, var ((1)+(0)+(1))/2 = 1
    d(0, 0) = 1;
    d(0, 1) = 2;
    d(0, 2) = 3;
    // row 1: constant -> 0
    d(1, 0) = 4;
    d(1, 1) = 4;
    d(1, 2) = 4;
    // row 2: {0, 0, 6} -> mean 2, var (4+4+16)/2 = 12
    d(2, 0) = 0;
    d(2, 1) = 0;
    d(2, 2) = 6;
    auto s = boundary_scores(d);
    REQUIRE(s.size() == 3);
    CHECK(s[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(s[1] == 0.0);
    CHECK(s[2] == doctest::Approx(12.0).epsilon(1e-15));
}

TEST_CASE("boundary score with a single neighbor is zero by convention") {
    Mat<double> d(4, 1, 3.14);
    auto s = boundary_scores(d);
    for (double v : s) CHECK(v == 0.0);
}

TEST_CASE("full graph build is deterministic") {
    Dataset ds = gaussian_data(30, 3, 77);
    LatentGraph a = build_latent_graph(ds, 4);
    LatentGraph b = build_latent_graph(ds, 4);
    REQUIRE(a.edges.size() == b.edges.size());
    for (size_t e = 0; e < a.edges.size(); ++e) {
        CHECK(a.edges[e].i == b.edges[e].i);
        CHECK(a.edges[e].j == b.edges[e].j);
        CHECK(a.edges[e].w == b.edges[e].w);
    }
    CHECK(a.forces == b.forces);
}
