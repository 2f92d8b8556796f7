#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace facefuse {

// PCA eigenspace fitted over vectorized images. basis holds k orthonormal
// direction vectors of length `dimension`; eigenvalues use the 1/N
// (population) covariance convention and are sorted nonincreasing.
struct EigenModel {
    std::size_t dimension = 0;
    std::size_t k = 0;
    std::vector<double> mean;
    std::vector<std::vector<double>> basis;
    std::vector<double> eigenvalues;
};

/// Fits the eigenspace of N samples via the NxN Gram-matrix reduction
/// (eigendecompose (1/N) A^T A for centered sample columns A, then map the
/// eigenvectors through A and normalize). Directions with (numerically)
/// zero eigenvalue are excluded, so the fitted k may be smaller than
/// requested. Requires N >= 2 and 1 <= k <= min(N-1, d); throws DataError
/// naming the rank when the centered samples have rank 0.
EigenModel fit_eigenspace(const std::vector<std::vector<double>>& samples, std::size_t k);

/// Fits at full rank, then keeps the smallest k whose cumulative
/// eigenvalue fraction reaches `variance_fraction`.
EigenModel fit_eigenspace_by_variance(const std::vector<std::vector<double>>& samples,
                                      double variance_fraction);

/// Keeps the leading k directions of a fitted model.
EigenModel truncate_model(EigenModel model, std::size_t k);

/// basis^T (x - mean): reduced coordinates of x.
std::vector<double> project(const EigenModel& model, std::span<const double> x);

/// mean + basis * y: least-squares reconstruction in the affine span.
std::vector<double> backproject(const EigenModel& model, std::span<const double> y);

}  // namespace facefuse
