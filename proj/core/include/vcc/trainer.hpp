#ifndef VCC_TRAINER_HPP
#define VCC_TRAINER_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "vcc/checkpoint.hpp"
#include "vcc/dataset.hpp"
#include "vcc/graph.hpp"
#include "vcc/loss.hpp"
#include "vcc/matrix.hpp"
#include "vcc/nn.hpp"

namespace vcc {

struct TrainConfig {
    int m_neighbors = 10;
    Metric metric = Metric::kEuclidean;  // neighbor-search distance
    int k_clusters = 0;          // required, >= 2
    int latent_dim = 2;
    int epochs = 50;
    int batch_size = 200;
    double learning_rate = 0.01;
    double momentum = 0.9;
    double weight_decay = 0.0005;
    double gamma = 0.01;         // clustering-weight slope: beta = gamma * epoch
    int n_neg = 5;               // disconnected pairs per boundary pair
    int center_init_epoch = 5;   // clustering term held at 0 before this epoch
    uint64_t seed = 0;
    double clamp_eps = 1e-4;
    bool enable_contraction = true;
    bool enable_expansion = true;
    int multiplicity_cap = 10000;
    std::vector<int> hidden_dims = {500, 500, 2000};
    Precision precision = Precision::F32;
};

struct MetricPoint {
    int epoch;
    double acc, nmi;
};

struct RunResult {
    Mat<double> embeddings;                  // N×d, equal to embed() on the final state
    Mat<double> centers;                     // K×d
    std::vector<int> assignments;            // argmax of the soft assignments
    std::vector<LossBreakdown> loss_history; // one record per epoch
    std::vector<MetricPoint> metric_history; // only when labels are present
    Checkpoint checkpoint;                   // final resumable state
};

// Called after each completed epoch with a resumable snapshot.
using EpochCallback =
    std::function<void(int epoch, const LossBreakdown&, const Checkpoint&)>;

// Full training run: builds the neighbor graph and edge pools once, then
// runs the epoch loop (shuffled boundary pairs, pair losses, self-training
// from center_init_epoch on). Deterministic for a fixed config; a run
// resumed from a checkpoint at an epoch boundary continues the identical
// sequence.
RunResult fit(const Dataset& data, const TrainConfig& cfg,
              const Checkpoint* resume = nullptr, const EpochCallback& on_epoch = {});

// k-means++ seeding plus at most `lloyd_iters` Lloyd rounds. Deterministic
// per seed. Throws DegenerateError when there are fewer than k distinct
// rows. `objective_trace`, when given, records the clustering objective
// after seeding and after every Lloyd round.
Mat<double> init_centers(const Mat<double>& H, int k, uint64_t seed,
                         int lloyd_iters = 50, std::vector<double>* objective_trace = nullptr);

// Inference pass mapping every dataset row through the encoder. Each row is
// computed independently, so results do not depend on any batch grouping.
Mat<double> embed(const Checkpoint& state, const Dataset& data);
template <typename T>
Mat<double> embed(const Encoder<T>& enc, const Dataset& data);

// Encoder <-> checkpoint conversion (exact for both precisions).
template <typename T>
void pack_encoder(const Encoder<T>& enc, Checkpoint& ck);
template <typename T>
Encoder<T> unpack_encoder(const Checkpoint& ck);

} // namespace vcc

#endif
