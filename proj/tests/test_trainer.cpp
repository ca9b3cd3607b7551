#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <vector>

#include "vcc/dataset.hpp"
#include "vcc/errors.hpp"
#include "vcc/metrics.hpp"
#include "vcc/trainer.hpp"

using namespace vcc;

namespace {

// Small blobs + small net: seconds-fast end-to-end configs.
Dataset small_blobs(uint64_t seed = 3, int n_per = 20, int k = 3, int dim = 4,
                    double separation = 12.0) {
    return make_blobs(n_per, k, dim, 1.0, separation, seed);
}

TrainConfig small_config() {
    TrainConfig cfg;
    cfg.k_clusters = 3;
    cfg.latent_dim = 2;
    cfg.epochs = 6;
    cfg.m_neighbors = 5;
    cfg.batch_size = 50;
    cfg.center_init_epoch = 3;
    cfg.hidden_dims = {16};
    cfg.seed = 11;
    return cfg;
}

} // namespace

TEST_CASE("the same seed reproduces the run exactly") {
    Dataset data = small_blobs();
    TrainConfig cfg = small_config();
    RunResult a = fit(data, cfg);
    RunResult b = fit(data, cfg);
    REQUIRE(a.loss_history.size() == b.loss_history.size());
    for (size_t e = 0; e < a.loss_history.size(); ++e) {
        CHECK(a.loss_history[e].total == b.loss_history[e].total);
        CHECK(a.loss_history[e].l_bps == b.loss_history[e].l_bps);
    }
    CHECK(a.embeddings == b.embeddings);
    CHECK(a.assignments == b.assignments);
    CHECK(a.centers == b.centers);

    TrainConfig other = cfg;
    other.seed = 12;
    RunResult c = fit(data, other);
    CHECK(a.embeddings.a != c.embeddings.a);
}

TEST_CASE("loss history covers every epoch and total adds up") {
    Dataset data = small_blobs();
    TrainConfig cfg = small_config();
    RunResult r = fit(data, cfg);
    REQUIRE(r.loss_history.size() == static_cast<size_t>(cfg.epochs));
    for (const auto& lb : r.loss_history) {
        CHECK(lb.total ==
              doctest::Approx(lb.l_bps + lb.l_c + lb.l_e + lb.beta * lb.l_clu).epsilon(1e-12));
        CHECK(lb.l_bps > 0.0);
    }
}

TEST_CASE("the clustering weight follows the schedule") {
    Dataset data = small_blobs();
    TrainConfig cfg = small_config();
    cfg.epochs = 4;
    cfg.center_init_epoch = 2;
    cfg.gamma = 0.01;
    RunResult r = fit(data, cfg);
    CHECK(r.loss_history[0].beta == 0.0);
    CHECK(r.loss_history[1].beta == 0.0);
    CHECK(r.loss_history[2].beta == doctest::Approx(0.02).epsilon(1e-15));
    CHECK(r.loss_history[3].beta == doctest::Approx(0.03).epsilon(1e-15));
    CHECK(r.loss_history[1].l_clu == 0.0);
    CHECK(r.loss_history[2].l_clu > 0.0);
}

TEST_CASE("a run that never reaches center initialization still clusters") {
    Dataset data = small_blobs();
    TrainConfig cfg = small_config();
    cfg.epochs = 1;
    cfg.center_init_epoch = 5; // beyond the run: weight stays zero
    RunResult r = fit(data, cfg);
    REQUIRE(r.loss_history.size() == 1);
    CHECK(r.loss_history[0].beta == 0.0);
    CHECK(r.loss_history[0].l_clu == 0.0);
    // resumable state has no centers yet...
    CHECK_FALSE(r.checkpoint.has_centers);
    // ...but the result still carries k centers and in-range assignments
    CHECK(r.centers.rows == cfg.k_clusters);
    CHECK(r.centers.cols == cfg.latent_dim);
    REQUIRE(r.assignments.size() == static_cast<size_t>(data.n()));
    for (int a : r.assignments) {
        CHECK(a >= 0);
        CHECK(a < cfg.k_clusters);
    }
}

TEST_CASE("metric history appears once labels and centers are both live") {
    Dataset data = small_blobs();
    TrainConfig cfg = small_config(); // epochs 6, centers from epoch 3
    RunResult r = fit(data, cfg);
    REQUIRE(r.metric_history.size() == 3);
    CHECK(r.metric_history[0].epoch == 3);
    CHECK(r.metric_history[2].epoch == 5);
    for (const auto& mp : r.metric_history) {
        CHECK(mp.acc >= 1.0 / cfg.k_clusters);
        CHECK(mp.acc <= 1.0);
        CHECK(mp.nmi >= 0.0);
        CHECK(mp.nmi <= 1.0);
    }

    Dataset unlabeled = data;
    unlabeled.labels.clear();
    RunResult r2 = fit(unlabeled, cfg);
    CHECK(r2.metric_history.empty());
}

TEST_CASE("ablation flags silence their loss term end to end") {
    Dataset data = small_blobs();
    TrainConfig cfg = small_config();
    cfg.enable_contraction = false;
    RunResult r = fit(data, cfg);
    for (const auto& lb : r.loss_history) {
        CHECK(lb.l_c == 0.0);
        CHECK(lb.l_e > 0.0);
    }
    cfg.enable_contraction = true;
    cfg.enable_expansion = false;
    RunResult r2 = fit(data, cfg);
    for (const auto& lb : r2.loss_history) {
        CHECK(lb.l_e == 0.0);
        CHECK(lb.l_c > 0.0);
    }
}

TEST_CASE("resuming from a checkpoint replays the uninterrupted run bit for bit") {
    Dataset data = small_blobs();
    TrainConfig cfg = small_config(); // 6 epochs, centers at 3

    RunResult full = fit(data, cfg);

    TrainConfig head = cfg;
    head.epochs = 2; // stop before centers exist
    RunResult first = fit(data, head);
    CHECK(first.checkpoint.epoch_next == 2);
    RunResult rest = fit(data, cfg, &first.checkpoint);

    CHECK(rest.embeddings == full.embeddings);
    CHECK(rest.assignments == full.assignments);
    CHECK(rest.centers == full.centers);
    REQUIRE(rest.loss_history.size() == 4); // epochs 2..5
    for (int e = 0; e < 4; ++e)
        CHECK(rest.loss_history[e].total == full.loss_history[e + 2].total);

    // split after centers exist: momentum and center state must carry over too
    TrainConfig head2 = cfg;
    head2.epochs = 4;
    RunResult second = fit(data, head2);
    CHECK(second.checkpoint.has_centers);
    RunResult tail = fit(data, cfg, &second.checkpoint);
    CHECK(tail.embeddings == full.embeddings);
    CHECK(tail.centers == full.centers);
}

TEST_CASE("per-epoch callback observes resumable snapshots") {
    Dataset data = small_blobs();
    TrainConfig cfg = small_config();
    std::vector<int> epochs_seen;
    Checkpoint at3;
    fit(data, cfg, nullptr, [&](int epoch, const LossBreakdown& lb, const Checkpoint& ck) {
        epochs_seen.push_back(epoch);
        CHECK(ck.epoch_next == epoch + 1);
        CHECK(std::isfinite(lb.total));
        if (epoch == 2) at3 = ck;
    });
    std::vector<int> expect(cfg.epochs);
    std::iota(expect.begin(), expect.end(), 0);
    CHECK(epochs_seen == expect);

    // the snapshot taken mid-run resumes to the uninterrupted result
    RunResult full = fit(data, cfg);
    RunResult resumed = fit(data, cfg, &at3);
    CHECK(resumed.embeddings == full.embeddings);
}

TEST_CASE("resume validates precision and architecture") {
    Dataset data = small_blobs();
    TrainConfig cfg = small_config();
    cfg.epochs = 2;
    RunResult r = fit(data, cfg);

    TrainConfig wrong_prec = cfg;
    wrong_prec.precision = Precision::F64;
    CHECK_THROWS_AS(fit(data, wrong_prec, &r.checkpoint), ArgumentError);

    TrainConfig wrong_arch = cfg;
    wrong_arch.hidden_dims = {24};
    CHECK_THROWS_AS(fit(data, wrong_arch, &r.checkpoint), ShapeError);

    TrainConfig shorter = cfg;
    shorter.epochs = 1; // checkpoint is already past this
    CHECK_THROWS_AS(fit(data, shorter, &r.checkpoint), ArgumentError);
}

TEST_CASE("a poisoned checkpoint is caught at the first update") {
    Dataset data = small_blobs();
    TrainConfig cfg = small_config();
    cfg.epochs = 2;
    RunResult r = fit(data, cfg);
    Checkpoint bad = r.checkpoint;
    bad.weights[0](0, 0) = std::numeric_limits<double>::quiet_NaN();
    TrainConfig longer = cfg;
    longer.epochs = 4;
    CHECK_THROWS_AS(fit(data, longer, &bad), NonFiniteError);
}

TEST_CASE("config validation rejects out-of-range values") {
    Dataset data = small_blobs();
    TrainConfig cfg = small_config();
    cfg.k_clusters = 1;
    CHECK_THROWS_AS(fit(data, cfg), ArgumentError);
    cfg = small_config();
    cfg.m_neighbors = data.n();
    CHECK_THROWS_AS(fit(data, cfg), ArgumentError);
    cfg = small_config();
    cfg.learning_rate = 0.0;
    CHECK_THROWS_AS(fit(data, cfg), ArgumentError);
    cfg = small_config();
    cfg.momentum = 1.0;
    CHECK_THROWS_AS(fit(data, cfg), ArgumentError);
    cfg = small_config();
    cfg.epochs = 0;
    CHECK_THROWS_AS(fit(data, cfg), ArgumentError);
    cfg = small_config();
    cfg.clamp_eps = 0.5;
    CHECK_THROWS_AS(fit(data, cfg), ArgumentError);
}

TEST_CASE("well separated blobs are clustered essentially perfectly") {
    Dataset data = make_blobs(50, 3, 5, 1.0, 20.0, 21);
    TrainConfig cfg;
    cfg.k_clusters = 3;
    cfg.latent_dim = 2;
    cfg.epochs = 8;
    cfg.m_neighbors = 8;
    cfg.center_init_epoch = 3;
    cfg.seed = 1;
    RunResult r = fit(data, cfg);
    MetricsReport rep = evaluate(r.assignments, data.labels);
    CHECK(rep.acc >= 0.95);
    CHECK(rep.nmi >= 0.90);
    // loss should actually decrease while only the embedding terms are live
    CHECK(r.loss_history.front().l_bps > r.loss_history[2].l_bps);
}

TEST_CASE("double precision training works end to end") {
    Dataset data = small_blobs();
    TrainConfig cfg = small_config();
    cfg.precision = Precision::F64;
    RunResult r = fit(data, cfg);
    CHECK(r.checkpoint.precision == Precision::F64);
    CHECK(r.loss_history.size() == static_cast<size_t>(cfg.epochs));
    for (int a : r.assignments) CHECK(a >= 0);
}

TEST_CASE("embeddings do not depend on how rows are grouped for inference") {
    Dataset data = small_blobs();
    TrainConfig cfg = small_config();
    RunResult r = fit(data, cfg);

    Mat<double> full = embed(r.checkpoint, data);
    CHECK(full == r.embeddings);

    // one row at a time through a fresh Dataset
    for (int i : {0, 7, data.n() - 1}) {
        Dataset one;
        one.features = Mat<double>(1, data.dim());
        for (int c = 0; c < data.dim(); ++c) one.features(0, c) = data.features(i, c);
        one.sample_ids = {0};
        Mat<double> h = embed(r.checkpoint, one);
        for (int c = 0; c < h.cols; ++c) CHECK(h(0, c) == full(i, c));
    }
}

TEST_CASE("embed rejects width mismatches") {
    Dataset data = small_blobs();
    TrainConfig cfg = small_config();
    cfg.epochs = 1;
    RunResult r = fit(data, cfg);
    Dataset wrong;
    wrong.features = Mat<double>(3, data.dim() + 1, 0.0);
    CHECK_THROWS_AS(embed(r.checkpoint, wrong), ShapeError);
}

TEST_CASE("center seeding: n distinct points and k=n gives the points back") {
    Mat<double> H(4, 2);
    H(0, 0) = 0.0;
    H(0, 1) = 0.0;
    H(1, 0) = 10.0;
    H(1, 1) = 0.0;
    H(2, 0) = 0.0;
    H(2, 1) = 10.0;
    H(3, 0) = 10.0;
    H(3, 1) = 10.0;
    Mat<double> C = init_centers(H, 4, 99);
    REQUIRE(C.rows == 4);
    // every point appears exactly once among the centers
    for (int i = 0; i < 4; ++i) {
        int hits = 0;
        for (int c = 0; c < 4; ++c)
            hits += C(c, 0) == H(i, 0) && C(c, 1) == H(i, 1) ? 1 : 0;
        CHECK(hits == 1);
    }
}

TEST_CASE("center seeding lands one center per separated cluster") {
    Dataset data = make_blobs(40, 4, 3, 0.5, 30.0, 31);
    Mat<double> C = init_centers(data.features, 4, 7);
    // nearest-center labels must reproduce the generator partition
    std::vector<int> pred(data.n());
    for (int i = 0; i < data.n(); ++i) {
        int best = 0;
        double bd = 1e300;
        for (int c = 0; c < 4; ++c) {
            double s = 0.0;
            for (int t = 0; t < 3; ++t) {
                double d = data.features(i, t) - C(c, t);
                s += d * d;
            }
            if (s < bd) {
                bd = s;
                best = c;
            }
        }
        pred[i] = best;
    }
    auto [acc, mapping] = accuracy(pred, data.labels);
    CHECK(acc == 1.0);
}

TEST_CASE("center seeding objective never increases across refinements") {
    Dataset data = make_blobs(30, 3, 4, 2.0, 3.0, 41); // messy overlap
    std::vector<double> trace;
    init_centers(data.features, 5, 13, 50, &trace);
    REQUIRE(trace.size() >= 2);
    for (size_t i = 1; i < trace.size(); ++i) CHECK(trace[i] <= trace[i - 1] + 1e-9);
}

TEST_CASE("center seeding is deterministic per seed") {
    Dataset data = make_blobs(25, 3, 3, 1.0, 8.0, 51);
    Mat<double> a = init_centers(data.features, 3, 5);
    Mat<double> b = init_centers(data.features, 3, 5);
    CHECK(a == b);
}

TEST_CASE("center seeding refuses indistinct data") {
    Mat<double> H(6, 2, 1.5); // six identical points
    H(5, 0) = 2.0;            // two distinct values, three clusters wanted
    CHECK_THROWS_AS(init_centers(H, 3, 1), DegenerateError);
    Mat<double> tiny(2, 2, 0.0);
    CHECK_THROWS_AS(init_centers(tiny, 3, 1), DegenerateError);
}
