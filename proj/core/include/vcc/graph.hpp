#ifndef VCC_GRAPH_HPP
#define VCC_GRAPH_HPP

#include <utility>
#include <vector>

#include "vcc/dataset.hpp"
#include "vcc/matrix.hpp"

namespace vcc {

// Distance metric used for the neighbor search. Only Euclidean is supported;
// the enum exists so configs can name the metric explicitly and future
// metrics slot in without an interface change.
enum class Metric { kEuclidean };

// Nearest-neighbor graph over the input features with row-softmax forces and
// symmetrized edge weights. Immutable once built; shareable across threads.
struct LatentGraph {
    struct Edge {
        int i, j;      // i < j
        double w;      // symmetric weight in (0, 1]
    };

    int n = 0;                 // node count
    Mat<int> neighbor_idx;     // N×M, self excluded, ascending distance
    Mat<double> distances;     // N×M Euclidean distances, same order
    Mat<double> forces;        // N×M row-stochastic connection probabilities
    std::vector<Edge> edges;   // sorted by (i, j); no duplicates, no self-loops
    double f_max = 0.0;        // max edge weight
    double f_mean = 0.0;       // mean edge weight
};

// Exact m-nearest-neighbor search (brute force over all pairs).
// Ties broken by lower sample index; self excluded. Parallel over rows.
void knn_distances(const Dataset& data, int m, Mat<int>& neighbor_idx, Mat<double>& distances,
                   Metric metric = Metric::kEuclidean);

// Row softmax of negated distances, computed with max subtraction so large
// magnitudes cannot overflow. Each row sums to 1.
Mat<double> softmax_forces(const Mat<double>& distances);

// Collapses the directed force matrix onto undirected edges:
// w = f_ij + f_ji - f_ij*f_ji, with an absent direction contributing 0.
// Fills edges / f_max / f_mean of the result.
void symmetrize(const Mat<double>& forces, const Mat<int>& neighbor_idx,
                std::vector<LatentGraph::Edge>& edges, double& f_max, double& f_mean);

// Unbiased sample variance of each row of the neighbor-distance matrix.
// Flags likely cluster-boundary points (their local distance profile is more
// uneven than interior points'). One neighbor yields 0 by convention.
std::vector<double> boundary_scores(const Mat<double>& distances);

// Convenience: full pipeline from data to finished graph.
LatentGraph build_latent_graph(const Dataset& data, int m, Metric metric = Metric::kEuclidean);

} // namespace vcc

#endif
