#ifndef VCC_NN_HPP
#define VCC_NN_HPP

#include <cstdint>
#include <vector>

#include "vcc/matrix.hpp"

namespace vcc {

// MLP encoder: affine+ReLU hidden layers, affine (linear) output layer.
// Instantiated for float (training default) and double (used by the
// finite-difference gradient tests, which need the extra precision).
template <typename T>
struct Encoder {
    std::vector<int> layer_dims;             // [in, hidden..., out]
    std::vector<Mat<T>> weights;             // weights[l]: dims[l] × dims[l+1]
    std::vector<std::vector<T>> biases;      // biases[l]: dims[l+1]
    std::vector<Mat<T>> w_vel;               // momentum buffers, zero-initialized
    std::vector<std::vector<T>> b_vel;

    int layers() const { return static_cast<int>(weights.size()); }
    int in_dim() const { return layer_dims.front(); }
    int out_dim() const { return layer_dims.back(); }
};

struct OptimizerConfig {
    double learning_rate = 0.01;
    double momentum = 0.9;
    double weight_decay = 0.0005;
};

// Activation record for backward: acts[0] is the input batch, acts[l] the
// post-activation output of layer l-1, acts.back() the final embeddings.
// scratch mats are reused across batches by backward().
template <typename T>
struct Tape {
    std::vector<Mat<T>> acts;
    Mat<T> scratch0, scratch1;
};

template <typename T>
struct Grads {
    std::vector<Mat<T>> dW;
    std::vector<std::vector<T>> db;
};

// Glorot-uniform weights (±sqrt(6/(fan_in+fan_out))), zero biases and
// momentum. Deterministic per seed.
template <typename T>
Encoder<T> init_params(const std::vector<int>& layer_dims, uint64_t seed);

template <typename T>
Grads<T> make_grads(const Encoder<T>& enc);

// Forward pass over a batch. When tape is non-null it records everything
// backward needs. Throws ShapeError when X has the wrong column count.
template <typename T>
Mat<T> forward(const Encoder<T>& enc, const Mat<T>& X, Tape<T>* tape = nullptr);

// Backpropagates dL/dH through the tape into parameter gradients
// (overwrites `grads`). ReLU passes zero gradient at pre-activation exactly
// 0. Optionally emits dL/dX. Throws ShapeError on a mismatched dL_dH.
template <typename T>
void backward(const Encoder<T>& enc, Tape<T>& tape, const Mat<T>& dL_dH,
              Grads<T>& grads, Mat<T>* dL_dX = nullptr);

// v <- momentum*v + grad + weight_decay*param;  param <- param - lr*v.
// Throws NonFiniteError if any parameter leaves the finite range.
template <typename T>
void sgd_step(Encoder<T>& enc, const Grads<T>& grads, const OptimizerConfig& cfg);

} // namespace vcc

#endif
