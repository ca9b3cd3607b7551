#ifndef VCC_LINALG_HPP
#define VCC_LINALG_HPP

namespace vcc {

// C = alpha * op(A) * op(B) + beta * C, all row-major contiguous.
// op is identity or transpose; m/n/k describe op(A) (m×k) and op(B) (k×n).
// Instantiated for float and double in the library.
template <typename T>
void gemm(bool trans_a, bool trans_b, int m, int n, int k,
          T alpha, const T* A, const T* B, T beta, T* C);

} // namespace vcc

#endif
