#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "facefuse/matrix.hpp"

namespace facefuse {

// Fully connected feed-forward network, logistic sigmoid on every layer.
// weights[l] maps layer l activations (layer_sizes[l]) to layer l+1
// (layer_sizes[l+1]); row-major, one row per output unit.
struct MlpNetwork {
    std::vector<std::size_t> layer_sizes;
    std::vector<Matrix> weights;
    std::vector<std::vector<double>> biases;
    std::uint32_t rng_seed = 0;
};

struct TrainConfig {
    double learning_rate = 0.1;
    double momentum = 0.9;      // in [0,1)
    std::size_t max_epochs = 2000;
    double target_mse = 1e-3;
    std::uint32_t shuffle_seed = 0;
};

struct TrainReport {
    std::size_t epochs_run = 0;
    double final_mse = 0.0;
    std::vector<double> mse_history;  // one entry per epoch run
};

struct LabeledSample {
    std::vector<double> features;
    std::vector<double> target;  // one-hot
};

// Activations per layer; front() is the input, back() the network output.
struct ForwardTrace {
    std::vector<std::vector<double>> activations;

    const std::vector<double>& output() const { return activations.back(); }
};

// Gradients of the per-sample loss 0.5*||output - target||^2.
struct Gradients {
    std::vector<Matrix> weights;
    std::vector<std::vector<double>> biases;
    double sample_error = 0.0;  // the loss value itself
};

/// Weights drawn uniformly from [-r, r] with r = 1/sqrt(fan_in), biases
/// zero; fully determined by the seed.
MlpNetwork init_network(const std::vector<std::size_t>& layer_sizes, std::uint32_t seed);

ForwardTrace forward(const MlpNetwork& net, std::span<const double> x);

/// Exact backpropagated gradients for one sample.
Gradients compute_gradients(const MlpNetwork& net, std::span<const double> x,
                            std::span<const double> target);

/// Online backprop with momentum: samples visited in a freshly shuffled
/// order each epoch; each parameter moves by v(t) = -lr*grad + momentum*
/// v(t-1), v(0) = 0. Stops at max_epochs or once the epoch MSE (mean of
/// the per-sample losses) reaches target_mse. Throws DivergenceError
/// naming the epoch if parameters go non-finite.
TrainReport train(MlpNetwork& net, const std::vector<LabeledSample>& samples,
                  const TrainConfig& cfg);

/// Argmax of the forward output (ties to the lowest index) plus the raw
/// score vector.
std::pair<std::size_t, std::vector<double>> classify(const MlpNetwork& net,
                                                     std::span<const double> x);

}  // namespace facefuse
