#include "facefuse/eigenspace.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "facefuse/errors.hpp"

namespace facefuse {

namespace {

// Cyclic symmetric Jacobi; stops when the off-diagonal Frobenius mass
// drops below 1e-12 or after 100 sweeps. Plenty for the Gram matrices
// seen here (N up to a few hundred).
struct JacobiResult {
    std::vector<double> eigenvalues;           // unsorted
    std::vector<std::vector<double>> vectors;  // vectors[i] = i-th eigenvector
};

JacobiResult jacobi_symmetric(std::vector<std::vector<double>> a) {
    const std::size_t n = a.size();
    std::vector<std::vector<double>> v(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) v[i][i] = 1.0;

    auto off_norm = [&]() {
        double acc = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) acc += a[p][q] * a[p][q];
        return std::sqrt(2.0 * acc);
    };

    for (int sweep = 0; sweep < 100 && off_norm() >= 1e-12; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a[p][q];
                if (apq == 0.0) continue;
                const double tau = (a[q][q] - a[p][p]) / (2.0 * apq);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                                 (std::fabs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                for (std::size_t i = 0; i < n; ++i) {
                    const double aip = a[i][p];
                    const double aiq = a[i][q];
                    a[i][p] = c * aip - s * aiq;
                    a[i][q] = s * aip + c * aiq;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const double api = a[p][i];
                    const double aqi = a[q][i];
                    a[p][i] = c * api - s * aqi;
                    a[q][i] = s * api + c * aqi;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const double vip = v[i][p];
                    const double viq = v[i][q];
                    v[i][p] = c * vip - s * viq;
                    v[i][q] = s * vip + c * viq;
                }
            }
        }
    }

    JacobiResult out;
    out.eigenvalues.resize(n);
    out.vectors.assign(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        out.eigenvalues[i] = a[i][i];
        for (std::size_t j = 0; j < n; ++j) out.vectors[i][j] = v[j][i];
    }
    return out;
}

void flip_to_canonical_sign(std::vector<double>& vec) {
    std::size_t arg = 0;
    double best = 0.0;
    for (std::size_t i = 0; i < vec.size(); ++i) {
        const double mag = std::fabs(vec[i]);
        if (mag > best) {
            best = mag;
            arg = i;
        }
    }
    if (vec[arg] < 0.0) {
        for (double& x : vec) x = -x;
    }
}

}  // namespace

EigenModel fit_eigenspace(const std::vector<std::vector<double>>& samples, std::size_t k) {
    const std::size_t n = samples.size();
    if (n < 2) throw std::invalid_argument("fit_eigenspace: need at least 2 samples");
    const std::size_t d = samples[0].size();
    if (d == 0) throw std::invalid_argument("fit_eigenspace: zero-dimensional samples");
    for (const auto& s : samples) {
        if (s.size() != d) {
            throw DimensionError("fit_eigenspace: samples differ in length");
        }
    }
    const std::size_t k_max = std::min(n - 1, d);
    if (k < 1 || k > k_max) {
        std::ostringstream msg;
        msg << "fit_eigenspace: k=" << k << " out of range [1," << k_max << "]";
        throw std::invalid_argument(msg.str());
    }

    EigenModel model;
    model.dimension = d;
    model.mean.assign(d, 0.0);
    for (const auto& s : samples) {
        for (std::size_t j = 0; j < d; ++j) model.mean[j] += s[j];
    }
    for (double& m : model.mean) m /= static_cast<double>(n);

    std::vector<std::vector<double>> centered(n, std::vector<double>(d));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < d; ++j) centered[i][j] = samples[i][j] - model.mean[j];
    }

    // Gram matrix (1/N) A^T A shares its nonzero spectrum with the d x d
    // covariance (1/N) A A^T
    std::vector<std::vector<double>> gram(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            const double dot = std::inner_product(centered[i].begin(), centered[i].end(),
                                                  centered[j].begin(), 0.0);
            gram[i][j] = gram[j][i] = dot / static_cast<double>(n);
        }
    }

    JacobiResult eig = jacobi_symmetric(std::move(gram));
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return eig.eigenvalues[a] > eig.eigenvalues[b];
    });

    const double lead = std::max(eig.eigenvalues[order[0]], 0.0);
    const double tol = lead * 1e-12;
    std::size_t rank = 0;
    while (rank < n && eig.eigenvalues[order[rank]] > tol) ++rank;
    rank = std::min(rank, k_max);
    if (rank == 0) {
        throw DataError("fit_eigenspace: training samples have rank 0 (all identical)");
    }

    const std::size_t keep = std::min(k, rank);
    model.k = keep;
    model.eigenvalues.reserve(keep);
    model.basis.reserve(keep);
    for (std::size_t r = 0; r < keep; ++r) {
        const std::size_t idx = order[r];
        model.eigenvalues.push_back(std::max(eig.eigenvalues[idx], 0.0));

        // map the Gram eigenvector through the centered samples
        std::vector<double> direction(d, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const double u = eig.vectors[idx][i];
            if (u == 0.0) continue;
            for (std::size_t j = 0; j < d; ++j) direction[j] += u * centered[i][j];
        }
        const double norm = std::sqrt(std::inner_product(direction.begin(), direction.end(),
                                                         direction.begin(), 0.0));
        for (double& x : direction) x /= norm;
        flip_to_canonical_sign(direction);
        model.basis.push_back(std::move(direction));
    }
    return model;
}

EigenModel fit_eigenspace_by_variance(const std::vector<std::vector<double>>& samples,
                                      double variance_fraction) {
    if (!(variance_fraction > 0.0 && variance_fraction <= 1.0)) {
        throw std::invalid_argument("fit_eigenspace_by_variance: fraction must be in (0,1]");
    }
    const std::size_t n = samples.size();
    if (n < 2) throw std::invalid_argument("fit_eigenspace: need at least 2 samples");
    const std::size_t k_max = std::min(n - 1, samples[0].size());
    EigenModel full = fit_eigenspace(samples, k_max);

    const double total =
        std::accumulate(full.eigenvalues.begin(), full.eigenvalues.end(), 0.0);
    double running = 0.0;
    std::size_t k = full.k;
    for (std::size_t i = 0; i < full.k; ++i) {
        running += full.eigenvalues[i];
        if (running >= variance_fraction * total) {
            k = i + 1;
            break;
        }
    }
    return truncate_model(std::move(full), k);
}

EigenModel truncate_model(EigenModel model, std::size_t k) {
    if (k < 1 || k > model.k) {
        throw std::invalid_argument("truncate_model: k out of range");
    }
    model.k = k;
    model.basis.resize(k);
    model.eigenvalues.resize(k);
    return model;
}

std::vector<double> project(const EigenModel& model, std::span<const double> x) {
    if (x.size() != model.dimension) {
        std::ostringstream msg;
        msg << "project: vector length " << x.size() << " != model dimension "
            << model.dimension;
        throw DimensionError(msg.str());
    }
    std::vector<double> y(model.k, 0.0);
    for (std::size_t i = 0; i < model.k; ++i) {
        double acc = 0.0;
        const std::vector<double>& b = model.basis[i];
        for (std::size_t j = 0; j < model.dimension; ++j) {
            acc += b[j] * (x[j] - model.mean[j]);
        }
        y[i] = acc;
    }
    return y;
}

std::vector<double> backproject(const EigenModel& model, std::span<const double> y) {
    if (y.size() != model.k) {
        std::ostringstream msg;
        msg << "backproject: vector length " << y.size() << " != model k " << model.k;
        throw DimensionError(msg.str());
    }
    std::vector<double> x = model.mean;
    for (std::size_t i = 0; i < model.k; ++i) {
        const double yi = y[i];
        if (yi == 0.0) continue;
        const std::vector<double>& b = model.basis[i];
        for (std::size_t j = 0; j < model.dimension; ++j) x[j] += yi * b[j];
    }
    return x;
}

}  // namespace facefuse
