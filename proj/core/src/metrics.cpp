#include "vcc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "vcc/errors.hpp"

namespace vcc {

namespace {

void check_labels(const std::vector<int>& pred, const std::vector<int>& truth) {
    if (pred.size() != truth.size())
        throw LengthError("prediction length " + std::to_string(pred.size()) +
                          " does not match truth length " + std::to_string(truth.size()));
    if (pred.empty()) throw LengthError("empty label vectors");
    for (size_t i = 0; i < pred.size(); ++i)
        if (pred[i] < 0 || truth[i] < 0)
            throw ArgumentError("negative label at position " + std::to_string(i));
}

// Minimum-cost assignment over a square cost matrix via shortest augmenting
// paths with potentials, O(n^3). Returns row -> column.
std::vector<int> hungarian_min_cost(const Mat<double>& cost) {
    const int n = cost.rows;
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<int> match(n + 1, 0);   // column -> row (1-based, 0 = free)
    std::vector<int> way(n + 1, 0);
    for (int i = 1; i <= n; ++i) {
        match[0] = i;
        int j0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            int i0 = match[j0], j1 = 0;
            double delta = inf;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) { minv[j] = cur; way[j] = j0; }
                if (minv[j] < delta) { delta = minv[j]; j1 = j; }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) { u[match[j]] += delta; v[j] -= delta; }
                else minv[j] -= delta;
            }
            j0 = j1;
        } while (match[j0] != 0);
        do {
            int j1 = way[j0];
            match[j0] = match[j1];
            j0 = j1;
        } while (j0);
    }
    std::vector<int> row_to_col(n, -1);
    for (int j = 1; j <= n; ++j)
        if (match[j] >= 1) row_to_col[match[j] - 1] = j - 1;
    return row_to_col;
}

} // namespace

Mat<int64_t> contingency_table(const std::vector<int>& pred, const std::vector<int>& truth) {
    check_labels(pred, truth);
    int kp = *std::max_element(pred.begin(), pred.end()) + 1;
    int kt = *std::max_element(truth.begin(), truth.end()) + 1;
    Mat<int64_t> table(kp, kt, 0);
    for (size_t i = 0; i < pred.size(); ++i) ++table(pred[i], truth[i]);
    return table;
}

std::pair<double, std::vector<int>> accuracy(const std::vector<int>& pred,
                                             const std::vector<int>& truth) {
    Mat<int64_t> table = contingency_table(pred, truth);
    int kp = table.rows, kt = table.cols;
    int s = std::max(kp, kt);
    // Maximize matched mass == minimize negated counts on the padded square.
    Mat<double> cost(s, s, 0.0);
    for (int i = 0; i < kp; ++i)
        for (int j = 0; j < kt; ++j) cost(i, j) = -static_cast<double>(table(i, j));
    std::vector<int> assign = hungarian_min_cost(cost);

    int64_t matched = 0;
    std::vector<int> mapping(kp, -1);
    for (int i = 0; i < kp; ++i) {
        int j = assign[i];
        if (j < kt) {
            mapping[i] = j;
            matched += table(i, j);
        }
    }
    double acc = static_cast<double>(matched) / static_cast<double>(pred.size());
    return {acc, mapping};
}

double nmi(const std::vector<int>& pred, const std::vector<int>& truth) {
    Mat<int64_t> table = contingency_table(pred, truth);
    const double n = static_cast<double>(pred.size());
    int kp = table.rows, kt = table.cols;

    std::vector<int64_t> row_sum(kp, 0), col_sum(kt, 0);
    std::vector<int> row_nz(kp, 0), col_nz(kt, 0);
    for (int i = 0; i < kp; ++i)
        for (int j = 0; j < kt; ++j) {
            int64_t c = table(i, j);
            if (!c) continue;
            row_sum[i] += c;
            col_sum[j] += c;
            ++row_nz[i];
            ++col_nz[j];
        }

    // Identical up to relabeling: a one-to-one correspondence between
    // occupied rows and columns.
    bool identical = true;
    for (int i = 0; i < kp && identical; ++i)
        if (row_sum[i] && row_nz[i] != 1) identical = false;
    for (int j = 0; j < kt && identical; ++j)
        if (col_sum[j] && col_nz[j] != 1) identical = false;
    if (identical) return 1.0;

    auto entropy = [n](const std::vector<int64_t>& sums) {
        double h = 0.0;
        for (int64_t s : sums)
            if (s) {
                double p = s / n;
                h -= p * std::log(p);
            }
        return h;
    };
    double hp = entropy(row_sum), ht = entropy(col_sum);
    if (hp == 0.0 || ht == 0.0) return 0.0;  // constant partition, but not identical

    double mi = 0.0;
    for (int i = 0; i < kp; ++i)
        for (int j = 0; j < kt; ++j) {
            int64_t c = table(i, j);
            if (!c) continue;
            double pij = c / n;
            mi += pij * std::log(pij * n * n / (static_cast<double>(row_sum[i]) * col_sum[j]));
        }
    return mi / std::sqrt(hp * ht);
}

MetricsReport evaluate(const std::vector<int>& pred, const std::vector<int>& truth) {
    MetricsReport rep;
    rep.contingency = contingency_table(pred, truth);
    auto [acc, mapping] = accuracy(pred, truth);
    rep.acc = acc;
    rep.mapping = std::move(mapping);
    rep.nmi = nmi(pred, truth);
    return rep;
}

} // namespace vcc
