#ifndef VCC_MATRIX_HPP
#define VCC_MATRIX_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

namespace vcc {

// Dense row-major matrix. Deliberately minimal: contiguous storage plus
// indexing, so numeric kernels can work on raw pointers and tests can
// compare element-wise.
template <typename T>
struct Mat {
    int rows = 0;
    int cols = 0;
    std::vector<T> a;

    Mat() = default;
    Mat(int r, int c, T fill = T(0)) : rows(r), cols(c), a(static_cast<size_t>(r) * c, fill) {}

    T& operator()(int r, int c) { return a[static_cast<size_t>(r) * cols + c]; }
    const T& operator()(int r, int c) const { return a[static_cast<size_t>(r) * cols + c]; }

    T* row(int r) { return a.data() + static_cast<size_t>(r) * cols; }
    const T* row(int r) const { return a.data() + static_cast<size_t>(r) * cols; }

    T* data() { return a.data(); }
    const T* data() const { return a.data(); }
    size_t size() const { return a.size(); }
    bool empty() const { return a.empty(); }

    void fill(T v) { a.assign(a.size(), v); }

    // Keeps existing capacity where possible (hot loops reuse buffers).
    void resize(int r, int c) {
        rows = r;
        cols = c;
        a.resize(static_cast<size_t>(r) * c);
    }

    template <typename U>
    Mat<U> cast() const {
        Mat<U> out(rows, cols);
        for (size_t k = 0; k < a.size(); ++k) out.a[k] = static_cast<U>(a[k]);
        return out;
    }

    bool operator==(const Mat& o) const { return rows == o.rows && cols == o.cols && a == o.a; }
};

} // namespace vcc

#endif
