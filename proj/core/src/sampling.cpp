#include "vcc/sampling.hpp"

#include <cmath>

#include "vcc/errors.hpp"

namespace vcc {

EdgePools build_pools(const LatentGraph& graph, int multiplicity_cap) {
    if (graph.edges.empty()) throw EmptyPoolError("graph has no edges");
    if (multiplicity_cap < 1) throw ArgumentError("multiplicity cap must be >= 1");

    EdgePools pools;
    pools.n = graph.n;
    pools.connected.reserve(graph.edges.size());
    for (const auto& e : graph.edges) {
        double r_neg = std::floor(graph.f_max / e.w);
        double r_pos = std::floor(e.w / graph.f_mean);
        if (r_neg > multiplicity_cap || r_pos > multiplicity_cap)
            throw OverflowGuardError(
                "edge (" + std::to_string(e.i) + "," + std::to_string(e.j) +
                ") with weight " + std::to_string(e.w) + " wants multiplicity above cap " +
                std::to_string(multiplicity_cap));
        for (int r = 0; r < static_cast<int>(r_neg); ++r) pools.e_neg.emplace_back(e.i, e.j);
        for (int r = 0; r < static_cast<int>(r_pos); ++r) pools.e_pos.emplace_back(e.i, e.j);
        pools.connected.insert(uint64_t(e.i) << 32 | uint32_t(e.j));
    }
    return pools;
}

std::vector<std::pair<int, int>> sample_disconnected(const EdgePools& pools,
                                                     int count, Rng& rng) {
    std::vector<std::pair<int, int>> out;
    out.reserve(count);
    const int n = pools.n;
    uint64_t attempts = 0, rejects = 0;
    constexpr uint64_t kWindow = 10000;
    while (static_cast<int>(out.size()) < count) {
        int i = static_cast<int>(rng.below(n));
        int j = static_cast<int>(rng.below(n));
        ++attempts;
        if (i == j || pools.is_connected(i, j)) {
            ++rejects;
            // >99.9% rejected over the probe window: graph nearly complete.
            if (attempts % kWindow == 0 && rejects * 1000 > attempts * 999)
                throw SaturationError("rejection sampler starved after " +
                                      std::to_string(attempts) + " attempts (" +
                                      std::to_string(rejects) + " rejected)");
            continue;
        }
        out.emplace_back(std::min(i, j), std::max(i, j));
    }
    return out;
}

std::vector<EdgeBatch> epoch_batches(const EdgePools& pools, int batch_size,
                                     int n_neg, uint64_t epoch_seed) {
    if (batch_size < 1) throw ArgumentError("batch_size must be >= 1");
    if (n_neg < 0) throw ArgumentError("n_neg must be >= 0");
    if (pools.e_neg.empty()) throw EmptyPoolError("boundary-separation pool is empty");
    if (pools.e_pos.empty()) throw EmptyPoolError("contraction pool is empty");

    Rng rng(epoch_seed);
    std::vector<std::pair<int, int>> order = pools.e_neg;
    rng.shuffle(order.begin(), order.end());

    size_t nbatches = (order.size() + batch_size - 1) / batch_size;
    std::vector<EdgeBatch> batches(nbatches);
    for (size_t b = 0; b < nbatches; ++b) {
        EdgeBatch& batch = batches[b];
        size_t lo = b * batch_size;
        size_t hi = std::min(order.size(), lo + batch_size);
        batch.neg.assign(order.begin() + lo, order.begin() + hi);
        // pos/disc counts stay at the nominal batch size even for a short
        // final chunk, keeping the per-batch sampling ratios fixed.
        batch.pos.reserve(batch_size);
        for (int k = 0; k < batch_size; ++k)
            batch.pos.push_back(pools.e_pos[rng.below(pools.e_pos.size())]);
        batch.disc = sample_disconnected(pools, n_neg * batch_size, rng);
    }
    return batches;
}

} // namespace vcc
