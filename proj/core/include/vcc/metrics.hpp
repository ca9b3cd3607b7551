#ifndef VCC_METRICS_HPP
#define VCC_METRICS_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "vcc/matrix.hpp"

namespace vcc {

// Clustering evaluation result. `mapping[k]` is the true label matched to
// predicted cluster k by the optimal assignment (-1 for a padded column).
struct MetricsReport {
    double acc = 0.0;
    double nmi = 0.0;
    Mat<int64_t> contingency;   // K_pred × K_true counts
    std::vector<int> mapping;
};

// Co-occurrence counts between two labelings (labels must be >= 0).
Mat<int64_t> contingency_table(const std::vector<int>& pred, const std::vector<int>& truth);

// Clustering accuracy: maximum-weight one-to-one matching of predicted to
// true clusters (Hungarian algorithm on the zero-padded square contingency),
// matched mass / N. Returns the mapping used.
std::pair<double, std::vector<int>> accuracy(const std::vector<int>& pred,
                                             const std::vector<int>& truth);

// Normalized mutual information: I(pred;truth) / sqrt(H(pred) H(truth)) with
// natural logs and 0·log 0 = 0. Identical partitions (up to relabeling) give
// 1; a zero entropy on either side with differing partitions gives 0.
double nmi(const std::vector<int>& pred, const std::vector<int>& truth);

MetricsReport evaluate(const std::vector<int>& pred, const std::vector<int>& truth);

} // namespace vcc

#endif
