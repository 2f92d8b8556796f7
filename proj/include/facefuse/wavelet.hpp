#pragma once

#include <span>
#include <string>
#include <vector>

#include "facefuse/matrix.hpp"

namespace facefuse {

enum class BoundaryMode { symmetric, periodic };

std::string to_string(BoundaryMode mode);
BoundaryMode boundary_mode_from_string(const std::string& name);

// Two-channel orthogonal filter bank. Decomposition filters lo_d/hi_d obey
// the quadrature-mirror relation hi_d[k] = (-1)^k lo_d[L-1-k]; the
// reconstruction filters are their reversals.
struct FilterBank {
    std::string name;
    std::vector<double> lo_d;
    std::vector<double> hi_d;
    std::vector<double> lo_r;
    std::vector<double> hi_r;

    std::size_t length() const { return lo_d.size(); }
};

// Output of one 2D analysis step: approximation plus the three detail
// orientations, all of identical dimensions.
struct SubbandQuad {
    Matrix ca;
    Matrix ch;
    Matrix cv;
    Matrix cd;
};

struct DetailTriple {
    Matrix ch;
    Matrix cv;
    Matrix cd;
};

// Multilevel 2D decomposition: level-J approximation plus per-level detail
// triples (level 1 first). input_dims records each level's input size so
// reconstruction can crop to exact lengths.
struct DecompositionPyramid {
    std::string wavelet_name;
    BoundaryMode mode = BoundaryMode::symmetric;
    int levels = 0;
    Matrix approximation;
    std::vector<DetailTriple> details;
    std::vector<Dims> input_dims;
};

/// Builds the named filter bank. Only "db2" (4-tap Daubechies, two
/// vanishing moments) is provided.
FilterBank make_filter_bank(const std::string& name);

/// Pads a signal on both sides. symmetric: half-point reflection with edge
/// repetition, requires pad <= length. periodic: cyclic wrap.
std::vector<double> extend_signal(std::span<const double> signal, BoundaryMode mode,
                                  std::size_t pad);

/// Coefficient count of one analysis output for an input of length n:
/// floor((n + L - 1)/2) under symmetric extension, ceil(n/2) under the
/// periodized transform.
std::size_t subband_length(std::size_t n, std::size_t filter_len, BoundaryMode mode);

struct AnalysisPair {
    std::vector<double> approx;
    std::vector<double> detail;
};

/// Single-level 1D analysis: extend by L-1, convolve with lo_d/hi_d, and
/// keep the even-indexed convolution samples starting at the first even
/// index >= L-1. Periodic mode periodizes (odd lengths repeat the last
/// sample), yielding ceil(n/2) coefficients and an orthonormal transform.
AnalysisPair analyze_1d(std::span<const double> signal, const FilterBank& bank,
                        BoundaryMode mode);

/// Single-level 1D synthesis: upsample by 2, convolve with lo_r/hi_r, sum,
/// and crop so that synthesize_1d(analyze_1d(x)) == x to ~1e-10.
std::vector<double> synthesize_1d(std::span<const double> approx,
                                  std::span<const double> detail, const FilterBank& bank,
                                  BoundaryMode mode, std::size_t target_len);

/// Separable 2D analysis: rows are filtered first (along each row), then
/// columns. ca = lo/lo; ch = row-lowpass, column-highpass, so a horizontal
/// edge concentrates in ch; cv is its mirror; cd = hi/hi.
SubbandQuad dwt2_step(const Matrix& x, const FilterBank& bank, BoundaryMode mode);

/// Exact left-inverse of dwt2_step for the recorded input dimensions.
Matrix idwt2_step(const SubbandQuad& quad, const FilterBank& bank, BoundaryMode mode,
                  Dims target_dims);

/// Iterates dwt2_step on successive approximations for `levels` levels.
/// Throws LevelCapacityError naming the first level whose input is too
/// small (either dimension < 2, or < L-1 under symmetric extension).
DecompositionPyramid decompose(const Matrix& image, const FilterBank& bank,
                               BoundaryMode mode, int levels);

/// Inverts decompose; result differs from the original by <= ~1e-8.
Matrix reconstruct(const DecompositionPyramid& pyramid, const FilterBank& bank);

/// Copy of the pyramid with the approximation subband zeroed; discards the
/// low-frequency (illumination) content, details untouched.
DecompositionPyramid zero_approximation(DecompositionPyramid pyramid);

}  // namespace facefuse
