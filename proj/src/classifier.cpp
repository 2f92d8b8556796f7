#include "facefuse/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include "facefuse/errors.hpp"

namespace facefuse {

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

void check_input_size(const MlpNetwork& net, std::size_t got) {
    if (got != net.layer_sizes.front()) {
        std::ostringstream msg;
        msg << "input length " << got << " != network input size " << net.layer_sizes.front();
        throw DimensionError(msg.str());
    }
}

}  // namespace

MlpNetwork init_network(const std::vector<std::size_t>& layer_sizes, std::uint32_t seed) {
    if (layer_sizes.size() < 2) {
        throw std::invalid_argument("init_network: need at least input and output layers");
    }
    for (std::size_t s : layer_sizes) {
        if (s == 0) throw std::invalid_argument("init_network: zero-width layer");
    }
    MlpNetwork net;
    net.layer_sizes = layer_sizes;
    net.rng_seed = seed;
    std::mt19937 rng(seed);
    for (std::size_t l = 0; l + 1 < layer_sizes.size(); ++l) {
        const std::size_t fan_in = layer_sizes[l];
        const std::size_t fan_out = layer_sizes[l + 1];
        const double r = 1.0 / std::sqrt(static_cast<double>(fan_in));
        std::uniform_real_distribution<double> dist(-r, r);
        Matrix w(fan_out, fan_in);
        for (double& x : w.values) x = dist(rng);
        net.weights.push_back(std::move(w));
        net.biases.emplace_back(fan_out, 0.0);
    }
    return net;
}

ForwardTrace forward(const MlpNetwork& net, std::span<const double> x) {
    check_input_size(net, x.size());
    ForwardTrace trace;
    trace.activations.reserve(net.layer_sizes.size());
    trace.activations.emplace_back(x.begin(), x.end());
    for (std::size_t l = 0; l < net.weights.size(); ++l) {
        const Matrix& w = net.weights[l];
        const std::vector<double>& prev = trace.activations.back();
        std::vector<double> next(w.rows);
        for (std::size_t i = 0; i < w.rows; ++i) {
            double z = net.biases[l][i];
            const double* row = &w.values[i * w.cols];
            for (std::size_t j = 0; j < w.cols; ++j) z += row[j] * prev[j];
            next[i] = sigmoid(z);
        }
        trace.activations.push_back(std::move(next));
    }
    return trace;
}

Gradients compute_gradients(const MlpNetwork& net, std::span<const double> x,
                            std::span<const double> target) {
    if (target.size() != net.layer_sizes.back()) {
        std::ostringstream msg;
        msg << "target length " << target.size() << " != network output size "
            << net.layer_sizes.back();
        throw DimensionError(msg.str());
    }
    const ForwardTrace trace = forward(net, x);
    const std::size_t layers = net.weights.size();

    Gradients grads;
    grads.weights.reserve(layers);
    grads.biases.reserve(layers);
    for (std::size_t l = 0; l < layers; ++l) {
        grads.weights.emplace_back(net.weights[l].rows, net.weights[l].cols);
        grads.biases.emplace_back(net.weights[l].rows, 0.0);
    }

    const std::vector<double>& out = trace.output();
    std::vector<double> delta(out.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double err = out[i] - target[i];
        grads.sample_error += 0.5 * err * err;
        delta[i] = err * out[i] * (1.0 - out[i]);  // dloss/dz via sigmoid'
    }

    for (std::size_t l = layers; l-- > 0;) {
        const std::vector<double>& prev = trace.activations[l];
        Matrix& gw = grads.weights[l];
        for (std::size_t i = 0; i < gw.rows; ++i) {
            const double di = delta[i];
            grads.biases[l][i] = di;
            double* row = &gw.values[i * gw.cols];
            for (std::size_t j = 0; j < gw.cols; ++j) row[j] = di * prev[j];
        }
        if (l == 0) break;
        const Matrix& w = net.weights[l];
        std::vector<double> next_delta(w.cols, 0.0);
        for (std::size_t j = 0; j < w.cols; ++j) {
            double acc = 0.0;
            for (std::size_t i = 0; i < w.rows; ++i) acc += w.values[i * w.cols + j] * delta[i];
            next_delta[j] = acc * prev[j] * (1.0 - prev[j]);
        }
        delta = std::move(next_delta);
    }
    return grads;
}

TrainReport train(MlpNetwork& net, const std::vector<LabeledSample>& samples,
                  const TrainConfig& cfg) {
    if (samples.empty()) throw std::invalid_argument("train: no samples");
    if (!(cfg.learning_rate > 0.0)) {
        throw std::invalid_argument("train: learning_rate must be positive");
    }
    if (!(cfg.momentum >= 0.0 && cfg.momentum < 1.0)) {
        throw std::invalid_argument("train: momentum must be in [0,1)");
    }
    if (cfg.max_epochs == 0) throw std::invalid_argument("train: max_epochs must be >= 1");
    for (const LabeledSample& s : samples) {
        check_input_size(net, s.features.size());
        if (s.target.size() != net.layer_sizes.back()) {
            throw DimensionError("train: target length != network output size");
        }
    }

    const std::size_t layers = net.weights.size();
    std::vector<Matrix> vel_w;
    std::vector<std::vector<double>> vel_b;
    for (std::size_t l = 0; l < layers; ++l) {
        vel_w.emplace_back(net.weights[l].rows, net.weights[l].cols);
        vel_b.emplace_back(net.weights[l].rows, 0.0);
    }

    std::mt19937 rng(cfg.shuffle_seed);
    std::vector<std::size_t> order(samples.size());
    std::iota(order.begin(), order.end(), 0);

    TrainReport report;
    for (std::size_t epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        double epoch_loss = 0.0;
        for (std::size_t idx : order) {
            const LabeledSample& s = samples[idx];
            Gradients g = compute_gradients(net, s.features, s.target);
            epoch_loss += g.sample_error;
            for (std::size_t l = 0; l < layers; ++l) {
                Matrix& w = net.weights[l];
                Matrix& vw = vel_w[l];
                const Matrix& gw = g.weights[l];
                for (std::size_t i = 0; i < w.values.size(); ++i) {
                    vw.values[i] = -cfg.learning_rate * gw.values[i] +
                                   cfg.momentum * vw.values[i];
                    w.values[i] += vw.values[i];
                }
                std::vector<double>& b = net.biases[l];
                std::vector<double>& vb = vel_b[l];
                const std::vector<double>& gb = g.biases[l];
                for (std::size_t i = 0; i < b.size(); ++i) {
                    vb[i] = -cfg.learning_rate * gb[i] + cfg.momentum * vb[i];
                    b[i] += vb[i];
                }
            }
        }

        for (std::size_t l = 0; l < layers; ++l) {
            for (double wv : net.weights[l].values) {
                if (!std::isfinite(wv)) {
                    std::ostringstream msg;
                    msg << "training diverged at epoch " << epoch
                        << ": non-finite weight detected";
                    throw DivergenceError(epoch, msg.str());
                }
            }
            for (double bv : net.biases[l]) {
                if (!std::isfinite(bv)) {
                    std::ostringstream msg;
                    msg << "training diverged at epoch " << epoch
                        << ": non-finite bias detected";
                    throw DivergenceError(epoch, msg.str());
                }
            }
        }

        const double mse = epoch_loss / static_cast<double>(samples.size());
        report.mse_history.push_back(mse);
        report.epochs_run = epoch;
        report.final_mse = mse;
        if (mse <= cfg.target_mse) break;
    }
    return report;
}

std::pair<std::size_t, std::vector<double>> classify(const MlpNetwork& net,
                                                     std::span<const double> x) {
    ForwardTrace trace = forward(net, x);
    std::vector<double> scores = trace.output();
    std::size_t best = 0;
    for (std::size_t i = 1; i < scores.size(); ++i) {
        if (scores[i] > scores[best]) best = i;  // ties keep the lowest index
    }
    return {best, std::move(scores)};
}

}  // namespace facefuse
