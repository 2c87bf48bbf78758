#ifndef FMCW_MATRIX_HPP
#define FMCW_MATRIX_HPP

#include <cstddef>
#include <vector>

namespace fmcw {

// Dense row-major matrix, just enough for frames and spectra.
template <typename T>
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<T> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, T fill = T{}) : rows(r), cols(c), data(r * c, fill) {}

    T& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    const T& operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

    bool same_shape(const Matrix& other) const { return rows == other.rows && cols == other.cols; }
    std::size_t size() const { return data.size(); }
};

}  // namespace fmcw

#endif
