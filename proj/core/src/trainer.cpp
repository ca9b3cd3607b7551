#include "vcc/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <unordered_set>

#include "vcc/errors.hpp"
#include "vcc/graph.hpp"
#include "vcc/metrics.hpp"
#include "vcc/rng.hpp"
#include "vcc/sampling.hpp"

namespace vcc {

namespace {

void validate_config(const TrainConfig& cfg, const Dataset& data) {
    if (cfg.k_clusters < 2) throw ArgumentError("k_clusters must be >= 2");
    if (cfg.latent_dim < 1) throw ArgumentError("latent_dim must be >= 1");
    if (cfg.epochs < 1) throw ArgumentError("epochs must be >= 1");
    if (cfg.batch_size < 1) throw ArgumentError("batch_size must be >= 1");
    if (cfg.learning_rate <= 0) throw ArgumentError("learning_rate must be > 0");
    if (cfg.momentum < 0 || cfg.momentum >= 1) throw ArgumentError("momentum must be in [0,1)");
    if (cfg.weight_decay < 0) throw ArgumentError("weight_decay must be >= 0");
    if (cfg.gamma < 0) throw ArgumentError("gamma must be >= 0");
    if (cfg.n_neg < 0) throw ArgumentError("n_neg must be >= 0");
    if (cfg.center_init_epoch < 0) throw ArgumentError("center_init_epoch must be >= 0");
    if (cfg.clamp_eps <= 0 || cfg.clamp_eps >= 0.5)
        throw ArgumentError("clamp_eps must be in (0, 0.5)");
    if (cfg.multiplicity_cap < 1) throw ArgumentError("multiplicity_cap must be >= 1");
    for (int h : cfg.hidden_dims)
        if (h < 1) throw ArgumentError("hidden layer dimensions must be positive");
    if (data.n() <= cfg.m_neighbors)
        throw ArgumentError("need more samples than m_neighbors");
    if (data.n() < cfg.k_clusters)
        throw ArgumentError("need at least k_clusters samples");
}

std::vector<int> hard_assign(const Mat<double>& Q) {
    std::vector<int> out(Q.rows);
    for (int i = 0; i < Q.rows; ++i) {
        const double* q = Q.row(i);
        int best = 0;
        for (int k = 1; k < Q.cols; ++k)
            if (q[k] > q[best]) best = k;
        out[i] = best;
    }
    return out;
}

// Chunked inference over the full feature matrix (training-internal fast
// path; the chunk plan is fixed, so a given run always reduces identically).
template <typename T>
Mat<double> full_forward(const Encoder<T>& enc, const Mat<T>& X) {
    constexpr int kChunk = 512;
    Mat<double> H(X.rows, enc.out_dim());
    Mat<T> block;
    for (int r0 = 0; r0 < X.rows; r0 += kChunk) {
        int rows = std::min(kChunk, X.rows - r0);
        block.resize(rows, X.cols);
        std::memcpy(block.data(), X.row(r0), block.size() * sizeof(T));
        Mat<T> h = forward(enc, block);
        for (int r = 0; r < rows; ++r)
            for (int c = 0; c < h.cols; ++c)
                H(r0 + r, c) = static_cast<double>(h(r, c));
    }
    return H;
}

template <typename T>
double poison_sum(const T* p, size_t n) {
    double s = 0.0;
    for (size_t k = 0; k < n; ++k) s += static_cast<double>(p[k]);
    return s;
}

template <typename T>
void pack_centers(const Mat<T>& centers, const Mat<T>& c_vel, bool has, Checkpoint& ck) {
    ck.has_centers = has;
    if (has) {
        ck.centers = centers.template cast<double>();
        ck.c_vel = c_vel.template cast<double>();
    } else {
        ck.centers = Mat<double>();
        ck.c_vel = Mat<double>();
    }
}

} // namespace

template <typename T>
void pack_encoder(const Encoder<T>& enc, Checkpoint& ck) {
    ck.precision = std::is_same_v<T, float> ? Precision::F32 : Precision::F64;
    ck.layer_dims = enc.layer_dims;
    ck.weights.clear();
    ck.biases.clear();
    ck.w_vel.clear();
    ck.b_vel.clear();
    for (int l = 0; l < enc.layers(); ++l) {
        ck.weights.push_back(enc.weights[l].template cast<double>());
        ck.biases.emplace_back(enc.biases[l].begin(), enc.biases[l].end());
        ck.w_vel.push_back(enc.w_vel[l].template cast<double>());
        ck.b_vel.emplace_back(enc.b_vel[l].begin(), enc.b_vel[l].end());
    }
}

template <typename T>
Encoder<T> unpack_encoder(const Checkpoint& ck) {
    Encoder<T> enc;
    enc.layer_dims = ck.layer_dims;
    for (size_t l = 0; l + 1 < ck.layer_dims.size(); ++l) {
        enc.weights.push_back(ck.weights[l].cast<T>());
        enc.biases.emplace_back(ck.biases[l].begin(), ck.biases[l].end());
        enc.w_vel.push_back(ck.w_vel[l].cast<T>());
        enc.b_vel.emplace_back(ck.b_vel[l].begin(), ck.b_vel[l].end());
    }
    return enc;
}

Mat<double> init_centers(const Mat<double>& H, int k, uint64_t seed,
                         int lloyd_iters, std::vector<double>* objective_trace) {
    const int n = H.rows, d = H.cols;
    if (k < 1) throw ArgumentError("k must be >= 1");
    if (n < k) throw DegenerateError("fewer rows than clusters");

    // Fewer than k distinct points cannot seed k distinct centers.
    {
        std::unordered_set<std::string> distinct;
        for (int i = 0; i < n && static_cast<int>(distinct.size()) < k; ++i)
            distinct.emplace(reinterpret_cast<const char*>(H.row(i)), sizeof(double) * d);
        if (static_cast<int>(distinct.size()) < k)
            throw DegenerateError("fewer than k distinct points");
    }

    Rng rng(seed);
    Mat<double> centers(k, d);
    auto dist2_to = [&](int i, const double* c) {
        double s = 0.0;
        const double* h = H.row(i);
        for (int t = 0; t < d; ++t) {
            double diff = h[t] - c[t];
            s += diff * diff;
        }
        return s;
    };

    // k-means++ seeding: next center drawn proportionally to the squared
    // distance from the nearest already-chosen center.
    int first = static_cast<int>(rng.below(n));
    std::memcpy(centers.row(0), H.row(first), sizeof(double) * d);
    std::vector<double> d2(n);
    for (int i = 0; i < n; ++i) d2[i] = dist2_to(i, centers.row(0));
    for (int c = 1; c < k; ++c) {
        double sum = 0.0;
        for (int i = 0; i < n; ++i) sum += d2[i];
        double r = rng.uniform() * sum;
        int pick = n - 1;
        double acc = 0.0;
        for (int i = 0; i < n; ++i) {
            acc += d2[i];
            if (acc >= r && d2[i] > 0.0) { pick = i; break; }
        }
        std::memcpy(centers.row(c), H.row(pick), sizeof(double) * d);
        for (int i = 0; i < n; ++i) d2[i] = std::min(d2[i], dist2_to(i, centers.row(c)));
    }

    std::vector<int> assign(n, -1), prev(n, -2);
    auto objective = [&]() {
        double s = 0.0;
        for (int i = 0; i < n; ++i) {
            double best = dist2_to(i, centers.row(0));
            for (int c = 1; c < k; ++c) best = std::min(best, dist2_to(i, centers.row(c)));
            s += best;
        }
        return s;
    };
    if (objective_trace) {
        objective_trace->clear();
        objective_trace->push_back(objective());
    }

    std::vector<double> sums(static_cast<size_t>(k) * d);
    std::vector<int> counts(k);
    for (int it = 0; it < lloyd_iters; ++it) {
        for (int i = 0; i < n; ++i) {
            int best = 0;
            double bd = dist2_to(i, centers.row(0));
            for (int c = 1; c < k; ++c) {
                double dd = dist2_to(i, centers.row(c));
                if (dd < bd) { bd = dd; best = c; }
            }
            assign[i] = best;
        }
        if (assign == prev) break;
        prev = assign;
        std::fill(sums.begin(), sums.end(), 0.0);
        std::fill(counts.begin(), counts.end(), 0);
        for (int i = 0; i < n; ++i) {
            double* s = sums.data() + static_cast<size_t>(assign[i]) * d;
            const double* h = H.row(i);
            for (int t = 0; t < d; ++t) s[t] += h[t];
            ++counts[assign[i]];
        }
        for (int c = 0; c < k; ++c)
            if (counts[c] > 0)  // empty clusters keep their center
                for (int t = 0; t < d; ++t)
                    centers(c, t) = sums[static_cast<size_t>(c) * d + t] / counts[c];
        if (objective_trace) objective_trace->push_back(objective());
    }
    return centers;
}

template <typename T>
Mat<double> embed(const Encoder<T>& enc, const Dataset& data) {
    if (data.dim() != enc.in_dim())
        throw ShapeError("dataset has " + std::to_string(data.dim()) +
                         " columns, encoder expects " + std::to_string(enc.in_dim()));
    Mat<double> H(data.n(), enc.out_dim());
    Mat<T> xrow(1, data.dim());
    for (int i = 0; i < data.n(); ++i) {
        const double* src = data.features.row(i);
        for (int c = 0; c < data.dim(); ++c) xrow.a[c] = static_cast<T>(src[c]);
        Mat<T> h = forward(enc, xrow);
        for (int c = 0; c < h.cols; ++c) H(i, c) = static_cast<double>(h(0, c));
    }
    return H;
}

Mat<double> embed(const Checkpoint& state, const Dataset& data) {
    if (state.precision == Precision::F32) {
        Encoder<float> enc = unpack_encoder<float>(state);
        return embed(enc, data);
    }
    Encoder<double> enc = unpack_encoder<double>(state);
    return embed(enc, data);
}

namespace {

template <typename T>
RunResult fit_impl(const Dataset& data, const TrainConfig& cfg,
                   const Checkpoint* resume, const EpochCallback& on_epoch) {
    validate(data);
    validate_config(cfg, data);

    LatentGraph graph = build_latent_graph(data, cfg.m_neighbors, cfg.metric);
    EdgePools pools = build_pools(graph, cfg.multiplicity_cap);

    std::vector<int> dims;
    dims.push_back(data.dim());
    dims.insert(dims.end(), cfg.hidden_dims.begin(), cfg.hidden_dims.end());
    dims.push_back(cfg.latent_dim);

    Encoder<T> enc;
    Mat<T> centers, c_vel;
    bool has_centers = false;
    int epoch_start = 0;
    if (resume) {
        if (resume->layer_dims != dims)
            throw ShapeError("checkpoint layer dimensions do not match data/config");
        if (resume->precision != cfg.precision)
            throw ArgumentError("checkpoint precision does not match config");
        if (resume->epoch_next > cfg.epochs)
            throw ArgumentError("checkpoint is already past the requested epoch count");
        enc = unpack_encoder<T>(*resume);
        epoch_start = resume->epoch_next;
        if (resume->has_centers) {
            if (resume->centers.rows != cfg.k_clusters || resume->centers.cols != cfg.latent_dim)
                throw ShapeError("checkpoint centers do not match k/latent_dim");
            centers = resume->centers.cast<T>();
            c_vel = resume->c_vel.cast<T>();
            has_centers = true;
        }
    } else {
        enc = init_params<T>(dims, cfg.seed);
    }

    Mat<T> Xfull = data.features.cast<T>();
    OptimizerConfig opt{cfg.learning_rate, cfg.momentum, cfg.weight_decay};
    LossOpts lopts;
    lopts.clamp_eps = cfg.clamp_eps;

    RunResult res;
    Tape<T> tape;
    Grads<T> grads = make_grads(enc);
    Mat<T> Xb, Hb, dH, dC(cfg.k_clusters, cfg.latent_dim);
    Mat<double> P;
    Mat<double> Pb;
    EdgeBatch local;
    std::vector<int> mark(data.n(), -1);
    std::vector<int> verts;
    verts.reserve(data.n());

    for (int E = epoch_start; E < cfg.epochs; ++E) {
        // The clustering term is phased in linearly but held at zero until
        // centers exist.
        double beta = E < cfg.center_init_epoch ? 0.0 : cfg.gamma * E;
        bool clustering = E >= cfg.center_init_epoch;
        if (clustering) {
            Mat<double> Hfull = full_forward(enc, Xfull);
            if (!has_centers) {
                Mat<double> c0 = init_centers(Hfull, cfg.k_clusters,
                                              mix_seed(cfg.seed, kStreamCenters));
                centers = c0.cast<T>();
                c_vel = Mat<T>(cfg.k_clusters, cfg.latent_dim, T(0));
                has_centers = true;
            }
            Mat<double> Qfull = assignment_q<double>(Hfull, centers.template cast<double>());
            P = target_p(Qfull);  // frozen for this epoch
            if (data.has_labels()) {
                std::vector<int> pred = hard_assign(Qfull);
                auto [acc, mapping] = accuracy(pred, data.labels);
                (void)mapping;
                res.metric_history.push_back({E, acc, nmi(pred, data.labels)});
            }
        }

        auto batches = epoch_batches(pools, cfg.batch_size, cfg.n_neg,
                                     mix_seed(cfg.seed, kStreamEpoch, E));
        LossBreakdown esum;
        esum.beta = beta;
        for (const EdgeBatch& b : batches) {
            verts.clear();
            local.neg.clear();
            local.pos.clear();
            local.disc.clear();
            auto touch = [&](int v) {
                if (mark[v] < 0) {
                    mark[v] = static_cast<int>(verts.size());
                    verts.push_back(v);
                }
                return mark[v];
            };
            for (auto [i, j] : b.neg) local.neg.emplace_back(touch(i), touch(j));
            if (cfg.enable_contraction)
                for (auto [i, j] : b.pos) local.pos.emplace_back(touch(i), touch(j));
            if (cfg.enable_expansion)
                for (auto [i, j] : b.disc) local.disc.emplace_back(touch(i), touch(j));

            int B = static_cast<int>(verts.size());
            Xb.resize(B, data.dim());
            for (int r = 0; r < B; ++r)
                std::memcpy(Xb.row(r), Xfull.row(verts[r]), sizeof(T) * data.dim());
            if (clustering) {
                Pb.resize(B, cfg.k_clusters);
                for (int r = 0; r < B; ++r)
                    std::memcpy(Pb.row(r), P.row(verts[r]), sizeof(double) * cfg.k_clusters);
            }

            Hb = forward(enc, Xb, &tape);
            dH.resize(B, cfg.latent_dim);
            dH.fill(T(0));
            if (clustering) dC.fill(T(0));

            LossBreakdown lb = combined_loss<T>(
                Hb, clustering ? &centers : nullptr, local, clustering ? &Pb : nullptr,
                beta, lopts, cfg.enable_contraction, cfg.enable_expansion, &dH,
                clustering ? &dC : nullptr);

            backward(enc, tape, dH, grads);
            sgd_step(enc, grads, opt);
            if (clustering && beta > 0.0) {
                // Centers follow the same momentum rule, without weight
                // decay (shrinking them toward the origin means nothing).
                T lr = static_cast<T>(cfg.learning_rate);
                T mom = static_cast<T>(cfg.momentum);
                for (size_t t = 0; t < centers.size(); ++t) {
                    c_vel.a[t] = mom * c_vel.a[t] + dC.a[t];
                    centers.a[t] -= lr * c_vel.a[t];
                }
                if (!std::isfinite(poison_sum(centers.data(), centers.size())))
                    throw NonFiniteError("center update produced NaN/Inf");
            }

            esum.l_bps += lb.l_bps;
            esum.l_c += lb.l_c;
            esum.l_e += lb.l_e;
            esum.l_clu += lb.l_clu;
            for (int v : verts) mark[v] = -1;
        }
        // per-batch means averaged over the epoch, so the record keeps the
        // per-pair scale of the loss functions
        double nb = static_cast<double>(batches.size());
        esum.l_bps /= nb;
        esum.l_c /= nb;
        esum.l_e /= nb;
        esum.l_clu /= nb;
        esum.total = esum.l_bps + esum.l_c + esum.l_e + beta * esum.l_clu;
        res.loss_history.push_back(esum);

        if (on_epoch) {
            Checkpoint ck;
            pack_encoder(enc, ck);
            pack_centers(centers, c_vel, has_centers, ck);
            ck.epoch_next = E + 1;
            on_epoch(E, esum, ck);
        }
    }

    // Resumable state reflects only what training actually did; the post-hoc
    // centers below (for a run that never reached center_init_epoch) stay
    // out of it so a resumed run behaves like an uninterrupted one.
    pack_encoder(enc, res.checkpoint);
    pack_centers(centers, c_vel, has_centers, res.checkpoint);
    res.checkpoint.epoch_next = cfg.epochs;

    res.embeddings = embed(enc, data);
    Mat<double> centers_d = has_centers
        ? centers.template cast<double>()
        : init_centers(res.embeddings, cfg.k_clusters, mix_seed(cfg.seed, kStreamCenters));
    Mat<double> Qfinal = assignment_q<double>(res.embeddings, centers_d);
    res.assignments = hard_assign(Qfinal);
    res.centers = std::move(centers_d);
    return res;
}

} // namespace

RunResult fit(const Dataset& data, const TrainConfig& cfg,
              const Checkpoint* resume, const EpochCallback& on_epoch) {
    if (cfg.precision == Precision::F32) return fit_impl<float>(data, cfg, resume, on_epoch);
    return fit_impl<double>(data, cfg, resume, on_epoch);
}

template Mat<double> embed<float>(const Encoder<float>&, const Dataset&);
template Mat<double> embed<double>(const Encoder<double>&, const Dataset&);
template void pack_encoder<float>(const Encoder<float>&, Checkpoint&);
template void pack_encoder<double>(const Encoder<double>&, Checkpoint&);
template Encoder<float> unpack_encoder<float>(const Checkpoint&);
template Encoder<double> unpack_encoder<double>(const Checkpoint&);

} // namespace vcc
