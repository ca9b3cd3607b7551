#include "vcc/loss.hpp"

#include <cmath>

#include "vcc/errors.hpp"

namespace vcc {

template <typename T>
double similarity(const T* h_i, const T* h_j, int d) {
    double s2 = 0.0;
    for (int k = 0; k < d; ++k) {
        double t = static_cast<double>(h_i[k]) - static_cast<double>(h_j[k]);
        s2 += t * t;
    }
    return std::exp(-std::sqrt(s2));
}

namespace {

enum class PairTerm { BoundSep, Contract, Expand };

// Shared kernel for the three pair losses. Mean reduction over pairs keeps
// the three terms on a comparable scale regardless of how many pairs a batch
// carries, which is what lets one learning rate serve all of them.
template <typename T>
double pair_loss(const Mat<T>& H, const std::vector<std::pair<int, int>>& pairs,
                 PairTerm term, const LossOpts& opts, Mat<T>* dH) {
    if (pairs.empty()) return 0.0;
    const int d = H.cols;
    const double eps = opts.clamp_eps;
    const double inv_n = 1.0 / static_cast<double>(pairs.size());

    double value = 0.0;
    for (const auto& [i, j] : pairs) {
        const T* hi = H.row(i);
        const T* hj = H.row(j);
        double s2 = 0.0;
        for (int k = 0; k < d; ++k) {
            double t = static_cast<double>(hi[k]) - static_cast<double>(hj[k]);
            s2 += t * t;
        }
        double dist = std::sqrt(s2);
        double s_raw = std::exp(-dist);
        double s = std::min(1.0 - eps, std::max(eps, s_raw));

        double g_s = 0.0;  // d(term)/ds at the clamped similarity
        switch (term) {
            case PairTerm::BoundSep:
                value += -(std::log(s) + std::log1p(-s));
                g_s = -1.0 / s + 1.0 / (1.0 - s);
                break;
            case PairTerm::Contract:
                value += -std::log(s);
                g_s = -1.0 / s;
                break;
            case PairTerm::Expand:
                value += -std::log1p(-s);
                g_s = 1.0 / (1.0 - s);
                break;
        }
        if (!dH) continue;
        // The clamp is flat outside (eps, 1-eps): no gradient there.
        if (s_raw <= eps || s_raw >= 1.0 - eps) continue;
        // ds/ddist = -s_raw; d(dist)/dh_i = (h_i - h_j)/dist.
        double g_d = g_s * (-s_raw) * inv_n;
        double denom = std::max(dist, opts.dist_floor);
        double scale = g_d / denom;
        T* gi = dH->row(i);
        T* gj = dH->row(j);
        for (int k = 0; k < d; ++k) {
            double diff = static_cast<double>(hi[k]) - static_cast<double>(hj[k]);
            gi[k] += static_cast<T>(scale * diff);
            gj[k] -= static_cast<T>(scale * diff);
        }
    }
    return value * inv_n;
}

} // namespace

template <typename T>
double loss_bps(const Mat<T>& H, const std::vector<std::pair<int, int>>& pairs,
                const LossOpts& opts, Mat<T>* dH) {
    return pair_loss(H, pairs, PairTerm::BoundSep, opts, dH);
}

template <typename T>
double loss_contraction(const Mat<T>& H, const std::vector<std::pair<int, int>>& pairs,
                        const LossOpts& opts, Mat<T>* dH) {
    return pair_loss(H, pairs, PairTerm::Contract, opts, dH);
}

template <typename T>
double loss_expansion(const Mat<T>& H, const std::vector<std::pair<int, int>>& pairs,
                      const LossOpts& opts, Mat<T>* dH) {
    return pair_loss(H, pairs, PairTerm::Expand, opts, dH);
}

template <typename T>
Mat<double> assignment_q(const Mat<T>& H, const Mat<T>& C) {
    if (C.rows < 2) throw ArgumentError("need at least 2 cluster centers");
    if (C.cols != H.cols) throw ShapeError("embedding/center dimension mismatch");
    Mat<double> Q(H.rows, C.rows);
    for (int i = 0; i < H.rows; ++i) {
        const T* h = H.row(i);
        double* q = Q.row(i);
        double sum = 0.0;
        for (int k = 0; k < C.rows; ++k) {
            const T* c = C.row(k);
            double s2 = 0.0;
            for (int t = 0; t < H.cols; ++t) {
                double diff = static_cast<double>(h[t]) - static_cast<double>(c[t]);
                s2 += diff * diff;
            }
            q[k] = 1.0 / (1.0 + s2);
            sum += q[k];
        }
        for (int k = 0; k < C.rows; ++k) q[k] /= sum;
    }
    return Q;
}

Mat<double> target_p(const Mat<double>& Q_full) {
    const int n = Q_full.rows, K = Q_full.cols;
    std::vector<double> col(K, 0.0);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < K; ++k) col[k] += Q_full(i, k);
    for (int k = 0; k < K; ++k)
        if (col[k] < 1e-12)
            throw DegenerateColumnError("cluster " + std::to_string(k) +
                                        " has vanished (column sum " + std::to_string(col[k]) + ")");
    Mat<double> P(n, K);
    for (int i = 0; i < n; ++i) {
        double row_sum = 0.0;
        for (int k = 0; k < K; ++k) {
            double v = Q_full(i, k) * Q_full(i, k) / col[k];
            P(i, k) = v;
            row_sum += v;
        }
        for (int k = 0; k < K; ++k) P(i, k) /= row_sum;
    }
    return P;
}

template <typename T>
double loss_clu(const Mat<T>& H, const Mat<T>& C, const Mat<double>& P_rows,
                double weight, Mat<T>* dH, Mat<T>* dC) {
    const int B = H.rows, K = C.rows, d = H.cols;
    if (P_rows.rows != B || P_rows.cols != K) throw ShapeError("target rows do not match batch");

    // Unnormalized kernel q = 1/(1+dist^2) and normalized Q per row.
    std::vector<double> q(K), Qrow(K);
    double value = 0.0;
    const double scale = weight / static_cast<double>(B);
    for (int i = 0; i < B; ++i) {
        const T* h = H.row(i);
        const double* p = P_rows.row(i);
        double sum = 0.0;
        for (int k = 0; k < K; ++k) {
            double s2 = 0.0;
            const T* c = C.row(k);
            for (int t = 0; t < d; ++t) {
                double diff = static_cast<double>(h[t]) - static_cast<double>(c[t]);
                s2 += diff * diff;
            }
            q[k] = 1.0 / (1.0 + s2);
            sum += q[k];
        }
        for (int k = 0; k < K; ++k) Qrow[k] = q[k] / sum;

        for (int k = 0; k < K; ++k) {
            if (p[k] > 0.0)
                value += p[k] * (std::log(std::max(p[k], 1e-12)) -
                                 std::log(std::max(Qrow[k], 1e-12)));
            if (!dH) continue;
            // d KL / dh_i = (2/B) sum_k q_ik (P_ik - Q_ik)(h_i - c_k);
            // centers get the mirrored term.
            double coef = 2.0 * scale * q[k] * (p[k] - Qrow[k]);
            if (coef == 0.0) continue;
            T* gh = dH->row(i);
            T* gc = dC ? dC->row(k) : nullptr;
            const T* c = C.row(k);
            for (int t = 0; t < d; ++t) {
                double diff = static_cast<double>(h[t]) - static_cast<double>(c[t]);
                gh[t] += static_cast<T>(coef * diff);
                if (gc) gc[t] -= static_cast<T>(coef * diff);
            }
        }
    }
    return value / static_cast<double>(B);
}

template <typename T>
LossBreakdown combined_loss(const Mat<T>& H, const Mat<T>* C, const EdgeBatch& batch,
                            const Mat<double>* P_rows, double beta, const LossOpts& opts,
                            bool enable_contraction, bool enable_expansion,
                            Mat<T>* dH, Mat<T>* dC) {
    LossBreakdown out;
    out.beta = beta;
    out.l_bps = loss_bps(H, batch.neg, opts, dH);
    if (enable_contraction) out.l_c = loss_contraction(H, batch.pos, opts, dH);
    if (enable_expansion) out.l_e = loss_expansion(H, batch.disc, opts, dH);
    if (C && P_rows)
        out.l_clu = loss_clu(H, *C, *P_rows, beta, beta > 0.0 ? dH : nullptr,
                             beta > 0.0 ? dC : nullptr);
    out.total = out.l_bps + out.l_c + out.l_e + beta * out.l_clu;
    return out;
}

#define VCC_INSTANTIATE_LOSS(T)                                                              \
    template double similarity<T>(const T*, const T*, int);                                  \
    template double loss_bps<T>(const Mat<T>&, const std::vector<std::pair<int, int>>&,     \
                                const LossOpts&, Mat<T>*);                                   \
    template double loss_contraction<T>(const Mat<T>&, const std::vector<std::pair<int, int>>&, \
                                        const LossOpts&, Mat<T>*);                           \
    template double loss_expansion<T>(const Mat<T>&, const std::vector<std::pair<int, int>>&, \
                                      const LossOpts&, Mat<T>*);                             \
    template Mat<double> assignment_q<T>(const Mat<T>&, const Mat<T>&);                      \
    template double loss_clu<T>(const Mat<T>&, const Mat<T>&, const Mat<double>&, double,    \
                                Mat<T>*, Mat<T>*);                                           \
    template LossBreakdown combined_loss<T>(const Mat<T>&, const Mat<T>*, const EdgeBatch&,  \
                                            const Mat<double>*, double, const LossOpts&,     \
                                            bool, bool, Mat<T>*, Mat<T>*);

VCC_INSTANTIATE_LOSS(float)
VCC_INSTANTIATE_LOSS(double)
#undef VCC_INSTANTIATE_LOSS

} // namespace vcc
