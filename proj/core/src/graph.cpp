#include "vcc/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <thread>
#include <unordered_map>

#include "vcc/errors.hpp"
#include "vcc/threads.hpp"

namespace vcc {

int thread_count() {
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw < 1) hw = 1;
    if (const char* env = std::getenv("VCC_THREADS")) {
        int cap = std::atoi(env);
        if (cap >= 1 && cap < hw) hw = cap;
    }
    return hw;
}

void knn_distances(const Dataset& data, int m, Mat<int>& neighbor_idx, Mat<double>& distances,
                   Metric metric) {
    const int n = data.n();
    const int dim = data.dim();
    if (m < 1 || m > n - 1)
        throw ArgumentError("neighbor count " + std::to_string(m) +
                            " out of range [1, " + std::to_string(n - 1) + "]");
    if (metric != Metric::kEuclidean)
        throw ArgumentError("unsupported distance metric");

    neighbor_idx = Mat<int>(n, m);
    distances = Mat<double>(n, m);

    const double* X = data.features.data();
    auto worker = [&](int r0, int r1) {
        // (squared distance, index) candidates for one row at a time;
        // comparisons use the squared distance so ties match a plain
        // all-pairs sort oracle bit for bit.
        std::vector<std::pair<double, int>> cand(n - 1);
        for (int i = r0; i < r1; ++i) {
            const double* xi = X + static_cast<size_t>(i) * dim;
            int t = 0;
            for (int j = 0; j < n; ++j) {
                if (j == i) continue;
                const double* xj = X + static_cast<size_t>(j) * dim;
                double s = 0.0;
                for (int d = 0; d < dim; ++d) {
                    double diff = xi[d] - xj[d];
                    s += diff * diff;
                }
                cand[t++] = {s, j};
            }
            std::partial_sort(cand.begin(), cand.begin() + m, cand.end());
            for (int k = 0; k < m; ++k) {
                neighbor_idx(i, k) = cand[k].second;
                distances(i, k) = std::sqrt(cand[k].first);
            }
        }
    };

    int workers = std::min(thread_count(), n);
    if (workers <= 1) {
        worker(0, n);
    } else {
        std::vector<std::thread> pool;
        int chunk = (n + workers - 1) / workers;
        for (int w = 0; w < workers; ++w) {
            int r0 = w * chunk, r1 = std::min(n, r0 + chunk);
            if (r0 >= r1) break;
            pool.emplace_back(worker, r0, r1);
        }
        for (auto& th : pool) th.join();
    }
}

Mat<double> softmax_forces(const Mat<double>& distances) {
    Mat<double> F(distances.rows, distances.cols);
    for (int i = 0; i < distances.rows; ++i) {
        const double* d = distances.row(i);
        double* f = F.row(i);
        double dmin = d[0];
        for (int k = 0; k < distances.cols; ++k) {
            if (!std::isfinite(d[k]))
                throw ArgumentError("non-finite distance in row " + std::to_string(i));
            dmin = std::min(dmin, d[k]);
        }
        double sum = 0.0;
        for (int k = 0; k < distances.cols; ++k) {
            f[k] = std::exp(dmin - d[k]);  // exp(-d - max(-d))
            sum += f[k];
        }
        for (int k = 0; k < distances.cols; ++k) f[k] /= sum;
    }
    return F;
}

void symmetrize(const Mat<double>& forces, const Mat<int>& neighbor_idx,
                std::vector<LatentGraph::Edge>& edges, double& f_max, double& f_mean) {
    // Per unordered pair: force in each direction (0 when that direction is
    // not in the neighbor lists).
    struct Pair { double lo_hi = 0.0, hi_lo = 0.0; };
    std::unordered_map<uint64_t, Pair> acc;
    acc.reserve(static_cast<size_t>(forces.rows) * forces.cols);
    for (int i = 0; i < forces.rows; ++i)
        for (int k = 0; k < forces.cols; ++k) {
            int j = neighbor_idx(i, k);
            uint64_t key = i < j ? (uint64_t(i) << 32 | uint32_t(j))
                                 : (uint64_t(j) << 32 | uint32_t(i));
            Pair& p = acc[key];
            (i < j ? p.lo_hi : p.hi_lo) = forces(i, k);
        }

    edges.clear();
    edges.reserve(acc.size());
    double sum = 0.0, mx = 0.0;
    for (const auto& [key, p] : acc) {
        double w = p.lo_hi + p.hi_lo - p.lo_hi * p.hi_lo;
        edges.push_back({static_cast<int>(key >> 32), static_cast<int>(key & 0xffffffffu), w});
        sum += w;
        mx = std::max(mx, w);
    }
    std::sort(edges.begin(), edges.end(),
              [](const LatentGraph::Edge& a, const LatentGraph::Edge& b) {
                  return a.i != b.i ? a.i < b.i : a.j < b.j;
              });
    f_max = mx;
    f_mean = edges.empty() ? 0.0 : sum / static_cast<double>(edges.size());
}

std::vector<double> boundary_scores(const Mat<double>& distances) {
    std::vector<double> scores(distances.rows, 0.0);
    int m = distances.cols;
    if (m < 2) return scores;  // a single neighbor has no spread
    for (int i = 0; i < distances.rows; ++i) {
        const double* d = distances.row(i);
        double mean = 0.0;
        for (int k = 0; k < m; ++k) mean += d[k];
        mean /= m;
        double ss = 0.0;
        for (int k = 0; k < m; ++k) {
            double t = d[k] - mean;
            ss += t * t;
        }
        scores[i] = ss / (m - 1);
    }
    return scores;
}

LatentGraph build_latent_graph(const Dataset& data, int m, Metric metric) {
    LatentGraph g;
    g.n = data.n();
    knn_distances(data, m, g.neighbor_idx, g.distances, metric);
    g.forces = softmax_forces(g.distances);
    symmetrize(g.forces, g.neighbor_idx, g.edges, g.f_max, g.f_mean);
    return g;
}

} // namespace vcc
