// Micro-benchmarks for the hot paths: graph construction, edge-pool
// building, encoder forward/backward, loss evaluation, and the Hungarian
// assignment used by the accuracy metric.
#include <benchmark/benchmark.h>

#include "vcc/dataset.hpp"
#include "vcc/graph.hpp"
#include "vcc/loss.hpp"
#include "vcc/metrics.hpp"
#include "vcc/nn.hpp"
#include "vcc/rng.hpp"
#include "vcc/sampling.hpp"

#include <algorithm>
#include <utility>
#include <vector>

namespace {

vcc::Dataset random_dataset(int n, int dim, std::uint64_t seed) {
    vcc::Dataset d;
    d.features.resize(n, dim);
    vcc::Rng rng(seed);
    for (auto& v : d.features.a) v = rng.gaussian();
    d.sample_ids.resize(n);
    for (int i = 0; i < n; ++i) d.sample_ids[i] = i;
    return d;
}

} // namespace

static void BM_KnnGraph(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    vcc::Dataset data = random_dataset(n, 32, 99);
    for (auto _ : state) {
        auto graph = vcc::build_latent_graph(data, 10);
        benchmark::DoNotOptimize(graph.f_mean);
    }
    state.SetComplexityN(n);
}
BENCHMARK(BM_KnnGraph)->Arg(500)->Arg(1000)->Arg(2000)->Unit(benchmark::kMillisecond)->Complexity(benchmark::oNSquared);

static void BM_EdgePools(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    vcc::Dataset data = random_dataset(n, 16, 123);
    auto graph = vcc::build_latent_graph(data, 10);
    for (auto _ : state) {
        auto pools = vcc::build_pools(graph);
        benchmark::DoNotOptimize(pools.e_neg.size());
    }
}
BENCHMARK(BM_EdgePools)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);

static void BM_EncoderForward(benchmark::State& state) {
    const int batch = static_cast<int>(state.range(0));
    auto enc = vcc::init_params<float>({64, 500, 500, 2000, 2}, 11);
    vcc::Rng rng(7);
    vcc::Mat<float> X(batch, 64);
    for (auto& v : X.a) v = static_cast<float>(rng.gaussian());
    for (auto _ : state) {
        vcc::Mat<float> H = vcc::forward(enc, X);
        benchmark::DoNotOptimize(H.data());
    }
}
BENCHMARK(BM_EncoderForward)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

static void BM_EncoderForwardBackward(benchmark::State& state) {
    const int batch = static_cast<int>(state.range(0));
    auto enc = vcc::init_params<float>({64, 500, 500, 2000, 2}, 11);
    auto grads = vcc::make_grads(enc);
    vcc::Rng rng(7);
    vcc::Mat<float> X(batch, 64);
    for (auto& v : X.a) v = static_cast<float>(rng.gaussian());
    for (auto _ : state) {
        vcc::Tape<float> tape;
        vcc::Mat<float> H = vcc::forward(enc, X, &tape);
        vcc::Mat<float> dH(H.rows, H.cols, 1.0f / static_cast<float>(H.size()));
        vcc::backward(enc, tape, dH, grads);
        benchmark::DoNotOptimize(grads.dW.front().data());
    }
}
BENCHMARK(BM_EncoderForwardBackward)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

static void BM_PairLosses(benchmark::State& state) {
    const int pairs = static_cast<int>(state.range(0));
    const int n = 2000;
    vcc::Rng rng(31);
    vcc::Mat<double> H(n, 2);
    for (auto& v : H.a) v = rng.gaussian();
    std::vector<std::pair<int, int>> ps(pairs);
    for (auto& p : ps) {
        p.first = static_cast<int>(rng.below(n));
        p.second = static_cast<int>(rng.below(n));
        if (p.second == p.first) p.second = (p.second + 1) % n;
    }
    vcc::LossOpts opts;
    vcc::Mat<double> dH(n, 2);
    for (auto _ : state) {
        dH.fill(0.0);
        double l = vcc::loss_bps<double>(H, ps, opts, &dH);
        benchmark::DoNotOptimize(l);
    }
}
BENCHMARK(BM_PairLosses)->Arg(1024)->Arg(8192)->Unit(benchmark::kMicrosecond);

static void BM_HungarianAccuracy(benchmark::State& state) {
    const int k = static_cast<int>(state.range(0));
    const int n = 5000;
    vcc::Rng rng(17);
    std::vector<int> pred(n), truth(n);
    for (int i = 0; i < n; ++i) {
        truth[i] = static_cast<int>(rng.below(k));
        // Mostly consistent predictions under a shifted labeling, with noise.
        pred[i] = (rng.uniform() < 0.85) ? (truth[i] + 1) % k : static_cast<int>(rng.below(k));
    }
    for (auto _ : state) {
        auto [acc, mapping] = vcc::accuracy(pred, truth);
        benchmark::DoNotOptimize(acc);
    }
}
BENCHMARK(BM_HungarianAccuracy)->Arg(10)->Arg(50)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
