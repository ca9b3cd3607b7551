#include "vcc/linalg.hpp"

#include <Eigen/Core>

namespace vcc {

namespace {
template <typename T>
using EMat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename T>
using CMap = Eigen::Map<const EMat<T>>;
template <typename T>
using MMap = Eigen::Map<EMat<T>>;
} // namespace

template <typename T>
void gemm(bool trans_a, bool trans_b, int m, int n, int k,
          T alpha, const T* A, const T* B, T beta, T* C) {
    MMap<T> c(C, m, n);
    auto run = [&](const auto& a, const auto& b) {
        if (beta == T(0)) {
            if (alpha == T(1)) c.noalias() = a * b;
            else c.noalias() = alpha * (a * b);
        } else {
            if (beta != T(1)) c *= beta;
            if (alpha == T(1)) c.noalias() += a * b;
            else c.noalias() += alpha * (a * b);
        }
    };
    // Physical shapes: op(A) is m×k, op(B) is k×n.
    if (!trans_a && !trans_b) run(CMap<T>(A, m, k), CMap<T>(B, k, n));
    else if (trans_a && !trans_b) run(CMap<T>(A, k, m).transpose(), CMap<T>(B, k, n));
    else if (!trans_a && trans_b) run(CMap<T>(A, m, k), CMap<T>(B, n, k).transpose());
    else run(CMap<T>(A, k, m).transpose(), CMap<T>(B, n, k).transpose());
}

template void gemm<float>(bool, bool, int, int, int, float, const float*, const float*, float, float*);
template void gemm<double>(bool, bool, int, int, int, double, const double*, const double*, double, double*);

} // namespace vcc
