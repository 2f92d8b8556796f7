#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "facefuse/classifier.hpp"
#include "facefuse/dataset.hpp"
#include "facefuse/eigenspace.hpp"
#include "facefuse/fusion.hpp"
#include "facefuse/wavelet.hpp"

namespace facefuse {

// Everything a full train/test run needs. The defaults mirror the standard
// protocol: level-5 db2 fusion, 10 train + 10 test per class.
struct ExperimentConfig {
    int levels = 5;
    BoundaryMode mode = BoundaryMode::symmetric;
    FusionRule rule = FusionRule::average();
    bool zero_approximation = false;
    std::size_t train_per_class = 10;
    std::size_t test_per_class = 10;
    std::optional<std::size_t> pca_k;  // empty: retain by variance fraction
    double pca_variance = 0.95;
    std::size_t hidden_units = 0;  // 0: max(8, 2 * class count)
    TrainConfig training;
    std::uint32_t split_seed = 0;
    std::uint32_t init_seed = 1;
};

struct ClassReport {
    int class_label = 0;
    std::size_t n_train = 0;
    std::size_t n_test = 0;
    double recognition_rate = 0.0;
};

struct ExperimentReport {
    std::vector<ClassReport> per_class;
    std::size_t total_correct = 0;
    std::size_t total_tested = 0;
    double overall_rate = 0.0;
    std::vector<std::vector<std::size_t>> confusion;  // [true class][predicted]
    ExperimentConfig config;
    std::size_t pca_k_effective = 0;
    std::size_t hidden_units_effective = 0;
    std::size_t train_epochs_run = 0;
    double train_final_mse = 0.0;
};

// Trained pipeline state: enough to classify new pairs identically.
struct ModelDocument {
    static constexpr int kFormatVersion = 1;

    int levels = 5;
    BoundaryMode mode = BoundaryMode::symmetric;
    FusionRule rule = FusionRule::average();
    bool zero_approximation = false;
    Dims image_dims;
    EigenModel eigenspace;
    MlpNetwork network;
    TrainConfig training;  // echo of the settings used
};

struct ClassSplit {
    std::vector<std::size_t> train_indices;
    std::vector<std::size_t> test_indices;
};

/// Seeded per-class shuffle; the first train_per_class indices train, the
/// next test_per_class test. Throws DataError when a class is too small.
std::vector<ClassSplit> split_dataset(const PairedDataset& dataset,
                                      std::size_t train_per_class,
                                      std::size_t test_per_class, std::uint32_t seed);

/// Full protocol: fuse every selected pair, fit the eigenspace on the
/// training fused vectors only, project, train the MLP on training
/// projections, evaluate on the held-out projections.
std::pair<ModelDocument, ExperimentReport> run_experiment(const PairedDataset& dataset,
                                                          const ExperimentConfig& config);

/// Classifies every pair of the dataset with a trained model.
ExperimentReport evaluate_model(const ModelDocument& model, const PairedDataset& dataset);

/// Fuse -> vectorize -> project -> classify one pair.
std::pair<std::size_t, std::vector<double>> classify_pair(const ModelDocument& model,
                                                          const ImagePair& pair);

}  // namespace facefuse
