#pragma once

#include <cstddef>
#include <vector>

namespace facefuse {

// Dense row-major grid of doubles. Doubles throughout; quantization to
// bytes happens only at the PGM file boundary.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;  // rows * cols, row-major

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0)
        : rows(r), cols(c), values(r * c, fill) {}

    double& operator()(std::size_t r, std::size_t c) { return values[r * cols + c]; }
    double operator()(std::size_t r, std::size_t c) const { return values[r * cols + c]; }

    std::size_t size() const { return values.size(); }
    bool same_dims(const Matrix& other) const {
        return rows == other.rows && cols == other.cols;
    }
};

// Intensity image; pixels are unit-range reals away from file boundaries.
using GrayImage = Matrix;

struct Dims {
    std::size_t rows = 0;
    std::size_t cols = 0;
    bool operator==(const Dims&) const = default;
};

inline Dims dims_of(const Matrix& m) { return {m.rows, m.cols}; }

}  // namespace facefuse
