#ifndef VCC_LOSS_HPP
#define VCC_LOSS_HPP

#include <utility>
#include <vector>

#include "vcc/matrix.hpp"
#include "vcc/sampling.hpp"

namespace vcc {

// Guards around the exp/log similarity path: similarities are clamped to
// [clamp_eps, 1-clamp_eps] before any logarithm (a clamped pair contributes
// zero gradient), and pair distances are floored in the gradient denominator
// to sidestep the norm's singularity at coincident points.
struct LossOpts {
    double clamp_eps = 1e-4;
    double dist_floor = 1e-7;
};

// Per-epoch loss record. Component values are per-pair (resp. per-row)
// means; `total` always equals l_bps + l_c + l_e + beta*l_clu.
struct LossBreakdown {
    double l_bps = 0.0;
    double l_c = 0.0;
    double l_e = 0.0;
    double l_clu = 0.0;
    double beta = 0.0;
    double total = 0.0;
};

// Row similarity: exp(-||h_i - h_j||). Raw (unclamped) value.
template <typename T>
double similarity(const T* h_i, const T* h_j, int d);

// The three sampled-pair losses. Each returns its mean value over the pairs
// and *accumulates* d(value)/dH into dH (same shape as H) when non-null.
//   boundary-separation: -log s - log(1-s)   (weak graph edges)
//   contraction:         -log s              (strong graph edges)
//   expansion:           -log(1-s)           (disconnected pairs)
template <typename T>
double loss_bps(const Mat<T>& H, const std::vector<std::pair<int, int>>& pairs,
                const LossOpts& opts, Mat<T>* dH);
template <typename T>
double loss_contraction(const Mat<T>& H, const std::vector<std::pair<int, int>>& pairs,
                        const LossOpts& opts, Mat<T>* dH);
template <typename T>
double loss_expansion(const Mat<T>& H, const std::vector<std::pair<int, int>>& pairs,
                      const LossOpts& opts, Mat<T>* dH);

// Student-t (1 d.o.f.) soft assignments of rows of H to centers, row
// normalized. Throws ArgumentError when there are fewer than 2 centers.
template <typename T>
Mat<double> assignment_q(const Mat<T>& H, const Mat<T>& C);

// Self-training target: squares Q and renormalizes by column frequency, then
// by row. Needs the full-dataset Q (column sums span all N rows). Throws
// DegenerateColumnError when a cluster column has all-but-vanished.
Mat<double> target_p(const Mat<double>& Q_full);

// KL(P||Q) averaged over rows, P constant. Accumulates gradients w.r.t. both
// embeddings and centers, scaled by `weight` (the schedule multiplier).
template <typename T>
double loss_clu(const Mat<T>& H, const Mat<T>& C, const Mat<double>& P_rows,
                double weight, Mat<T>* dH, Mat<T>* dC);

// Full objective over one batch (pairs index rows of H). Ablation flags drop
// a term entirely. P_rows/C may be null while the schedule weight beta is 0.
template <typename T>
LossBreakdown combined_loss(const Mat<T>& H, const Mat<T>* C, const EdgeBatch& batch,
                            const Mat<double>* P_rows, double beta, const LossOpts& opts,
                            bool enable_contraction, bool enable_expansion,
                            Mat<T>* dH, Mat<T>* dC);

} // namespace vcc

#endif
