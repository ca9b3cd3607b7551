#include "vcc/nn.hpp"

#include <cmath>
#include <cstring>

#include "vcc/errors.hpp"
#include "vcc/linalg.hpp"
#include "vcc/rng.hpp"

namespace vcc {

template <typename T>
Encoder<T> init_params(const std::vector<int>& layer_dims, uint64_t seed) {
    if (layer_dims.size() < 2)
        throw ArgumentError("encoder needs at least an input and an output dimension");
    for (int d : layer_dims)
        if (d < 1) throw ArgumentError("layer dimensions must be positive");

    Encoder<T> enc;
    enc.layer_dims = layer_dims;
    Rng rng(mix_seed(seed, kStreamInit));
    int L = static_cast<int>(layer_dims.size()) - 1;
    enc.weights.reserve(L);
    for (int l = 0; l < L; ++l) {
        int fin = layer_dims[l], fout = layer_dims[l + 1];
        double bound = std::sqrt(6.0 / (fin + fout));
        Mat<T> w(fin, fout);
        for (size_t k = 0; k < w.size(); ++k)
            w.a[k] = static_cast<T>(rng.uniform(-bound, bound));
        enc.weights.push_back(std::move(w));
        enc.biases.emplace_back(fout, T(0));
        enc.w_vel.emplace_back(fin, fout, T(0));
        enc.b_vel.emplace_back(fout, T(0));
    }
    return enc;
}

template <typename T>
Grads<T> make_grads(const Encoder<T>& enc) {
    Grads<T> g;
    for (int l = 0; l < enc.layers(); ++l) {
        g.dW.emplace_back(enc.weights[l].rows, enc.weights[l].cols, T(0));
        g.db.emplace_back(enc.biases[l].size(), T(0));
    }
    return g;
}

template <typename T>
Mat<T> forward(const Encoder<T>& enc, const Mat<T>& X, Tape<T>* tape) {
    if (X.cols != enc.in_dim())
        throw ShapeError("input has " + std::to_string(X.cols) + " columns, encoder expects " +
                         std::to_string(enc.in_dim()));
    const int L = enc.layers();
    const int B = X.rows;

    Tape<T> local;
    Tape<T>& t = tape ? *tape : local;
    t.acts.resize(L + 1);
    t.acts[0].resize(B, X.cols);
    std::memcpy(t.acts[0].data(), X.data(), X.size() * sizeof(T));

    for (int l = 0; l < L; ++l) {
        const Mat<T>& a = t.acts[l];
        Mat<T>& z = t.acts[l + 1];
        int out = enc.layer_dims[l + 1];
        z.resize(B, out);
        gemm<T>(false, false, B, out, enc.layer_dims[l],
                T(1), a.data(), enc.weights[l].data(), T(0), z.data());
        const T* bias = enc.biases[l].data();
        bool hidden = l + 1 < L;
        for (int r = 0; r < B; ++r) {
            T* zr = z.row(r);
            for (int c = 0; c < out; ++c) {
                zr[c] += bias[c];
                if (hidden && zr[c] < T(0)) zr[c] = T(0);
            }
        }
    }
    return t.acts[L];
}

template <typename T>
void backward(const Encoder<T>& enc, Tape<T>& tape, const Mat<T>& dL_dH,
              Grads<T>& grads, Mat<T>* dL_dX) {
    const int L = enc.layers();
    if (static_cast<int>(tape.acts.size()) != L + 1)
        throw ShapeError("tape does not match this encoder");
    const int B = tape.acts[0].rows;
    if (dL_dH.rows != B || dL_dH.cols != enc.out_dim())
        throw ShapeError("dL_dH shape mismatch");
    if (static_cast<int>(grads.dW.size()) != L)
        throw ShapeError("gradient buffers do not match this encoder");

    Mat<T>& cur = tape.scratch0;
    Mat<T>& prev = tape.scratch1;
    cur.resize(B, dL_dH.cols);
    std::memcpy(cur.data(), dL_dH.data(), dL_dH.size() * sizeof(T));

    for (int l = L - 1; l >= 0; --l) {
        int out = enc.layer_dims[l + 1], in = enc.layer_dims[l];
        // dW = acts[l]^T * delta;  db = column sums of delta.
        grads.dW[l].resize(in, out);
        gemm<T>(true, false, in, out, B,
                T(1), tape.acts[l].data(), cur.data(), T(0), grads.dW[l].data());
        grads.db[l].assign(out, T(0));
        T* db = grads.db[l].data();
        for (int r = 0; r < B; ++r) {
            const T* dr = cur.row(r);
            for (int c = 0; c < out; ++c) db[c] += dr[c];
        }
        if (l == 0 && !dL_dX) break;
        // delta_prev = delta * W^T, gated by the ReLU mask of acts[l]
        // (post-activation == 0 means the unit was clamped or exactly at the
        // kink; both get zero gradient).
        prev.resize(B, in);
        gemm<T>(false, true, B, in, out,
                T(1), cur.data(), enc.weights[l].data(), T(0), prev.data());
        if (l > 0) {
            const Mat<T>& act = tape.acts[l];
            for (size_t k = 0; k < prev.size(); ++k)
                if (act.a[k] <= T(0)) prev.a[k] = T(0);
        }
        std::swap(cur, prev);
    }
    if (dL_dX) {
        dL_dX->resize(B, enc.in_dim());
        std::memcpy(dL_dX->data(), cur.data(), cur.size() * sizeof(T));
    }
}

namespace {
// A non-finite value anywhere poisons the sum (Inf-Inf folds to NaN), so one
// reduction detects NaN/Inf without a per-element branch.
template <typename T>
double poison_sum(const T* p, size_t n) {
    double s = 0.0;
    for (size_t k = 0; k < n; ++k) s += static_cast<double>(p[k]);
    return s;
}
} // namespace

template <typename T>
void sgd_step(Encoder<T>& enc, const Grads<T>& grads, const OptimizerConfig& cfg) {
    const T lr = static_cast<T>(cfg.learning_rate);
    const T mom = static_cast<T>(cfg.momentum);
    const T wd = static_cast<T>(cfg.weight_decay);
    double check = 0.0;
    for (int l = 0; l < enc.layers(); ++l) {
        T* w = enc.weights[l].data();
        T* v = enc.w_vel[l].data();
        const T* g = grads.dW[l].data();
        size_t n = enc.weights[l].size();
        for (size_t k = 0; k < n; ++k) {
            v[k] = mom * v[k] + g[k] + wd * w[k];
            w[k] -= lr * v[k];
        }
        check += poison_sum(w, n);
        T* b = enc.biases[l].data();
        T* bv = enc.b_vel[l].data();
        const T* bg = grads.db[l].data();
        size_t nb = enc.biases[l].size();
        for (size_t k = 0; k < nb; ++k) {
            bv[k] = mom * bv[k] + bg[k] + wd * b[k];
            b[k] -= lr * bv[k];
        }
        check += poison_sum(b, nb);
    }
    if (!std::isfinite(check))
        throw NonFiniteError("parameter update produced NaN/Inf");
}

template Encoder<float> init_params<float>(const std::vector<int>&, uint64_t);
template Encoder<double> init_params<double>(const std::vector<int>&, uint64_t);
template Grads<float> make_grads<float>(const Encoder<float>&);
template Grads<double> make_grads<double>(const Encoder<double>&);
template Mat<float> forward<float>(const Encoder<float>&, const Mat<float>&, Tape<float>*);
template Mat<double> forward<double>(const Encoder<double>&, const Mat<double>&, Tape<double>*);
template void backward<float>(const Encoder<float>&, Tape<float>&, const Mat<float>&, Grads<float>&, Mat<float>*);
template void backward<double>(const Encoder<double>&, Tape<double>&, const Mat<double>&, Grads<double>&, Mat<double>*);
template void sgd_step<float>(Encoder<float>&, const Grads<float>&, const OptimizerConfig&);
template void sgd_step<double>(Encoder<double>&, const Grads<double>&, const OptimizerConfig&);

} // namespace vcc
