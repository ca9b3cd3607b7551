#ifndef VCC_SAMPLING_HPP
#define VCC_SAMPLING_HPP

#include <cstdint>
#include <unordered_set>
#include <utility>
#include <vector>

#include "vcc/graph.hpp"
#include "vcc/rng.hpp"

namespace vcc {

// Edge multisets that realize the sampling rates: an edge with weight w is
// repeated floor(f_max / w) times in e_neg (weak edges oversampled) and
// floor(w / f_mean) times in e_pos (strong edges oversampled). `connected`
// answers membership for unordered pairs of the underlying graph.
struct EdgePools {
    int n = 0;                                   // node count
    std::vector<std::pair<int, int>> e_neg;      // boundary-separation pool
    std::vector<std::pair<int, int>> e_pos;      // contraction pool
    std::unordered_set<uint64_t> connected;      // packed (lo, hi) pairs

    bool is_connected(int i, int j) const {
        uint64_t key = i < j ? (uint64_t(i) << 32 | uint32_t(j))
                             : (uint64_t(j) << 32 | uint32_t(i));
        return connected.count(key) != 0;
    }
};

// One training batch: a chunk of the shuffled e_neg pool plus freshly drawn
// contraction pairs and disconnected pairs.
struct EdgeBatch {
    std::vector<std::pair<int, int>> neg;   // <= batch_size, epoch-unique
    std::vector<std::pair<int, int>> pos;   // batch_size, with replacement
    std::vector<std::pair<int, int>> disc;  // n_neg * batch_size, disconnected
};

// Materializes both pools. Throws OverflowGuardError when a single edge's
// multiplicity exceeds cap (pathological weight ratio).
EdgePools build_pools(const LatentGraph& graph, int multiplicity_cap = 10000);

// Deterministic batch plan for one epoch: e_neg shuffled by epoch_seed and
// chunked to size <= batch_size (every element appears exactly once per
// epoch); each batch carries batch_size pos pairs and n_neg*batch_size
// disconnected pairs. Throws EmptyPoolError when e_neg is empty.
std::vector<EdgeBatch> epoch_batches(const EdgePools& pools, int batch_size,
                                     int n_neg, uint64_t epoch_seed);

// Uniform rejection sampling of pairs that share no graph edge (i != j,
// returned with i < j). Throws SaturationError when the rejection rate
// exceeds 99.9% over a probe window (graph nearly complete).
std::vector<std::pair<int, int>> sample_disconnected(const EdgePools& pools,
                                                     int count, Rng& rng);

} // namespace vcc

#endif
