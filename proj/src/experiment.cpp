#include "facefuse/experiment.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include "facefuse/errors.hpp"

namespace facefuse {

std::vector<ClassSplit> split_dataset(const PairedDataset& dataset,
                                      std::size_t train_per_class,
                                      std::size_t test_per_class, std::uint32_t seed) {
    if (train_per_class == 0 || test_per_class == 0) {
        throw std::invalid_argument("split_dataset: train and test counts must be >= 1");
    }
    std::mt19937 rng(seed);
    std::vector<ClassSplit> splits;
    splits.reserve(dataset.classes.size());
    for (const ClassSamples& cls : dataset.classes) {
        const std::size_t need = train_per_class + test_per_class;
        if (cls.pairs.size() < need) {
            std::ostringstream msg;
            msg << "class " << cls.label << " has " << cls.pairs.size()
                << " pairs but the split needs " << need;
            throw DataError(msg.str());
        }
        std::vector<std::size_t> order(cls.pairs.size());
        std::iota(order.begin(), order.end(), 0);
        std::shuffle(order.begin(), order.end(), rng);

        ClassSplit split;
        split.train_indices.assign(order.begin(),
                                   order.begin() + static_cast<std::ptrdiff_t>(train_per_class));
        split.test_indices.assign(order.begin() + static_cast<std::ptrdiff_t>(train_per_class),
                                  order.begin() + static_cast<std::ptrdiff_t>(need));
        splits.push_back(std::move(split));
    }
    return splits;
}

namespace {

std::vector<double> fuse_and_vectorize(const ImagePair& pair, const FilterBank& bank,
                                       const ExperimentConfig& cfg) {
    return vectorize(fuse_images(pair.visual, pair.thermal, bank, cfg.mode, cfg.levels,
                                 cfg.rule, cfg.zero_approximation));
}

std::vector<double> one_hot(std::size_t label, std::size_t n_classes) {
    std::vector<double> t(n_classes, 0.0);
    t[label] = 1.0;
    return t;
}

ExperimentReport tally(const std::vector<std::vector<std::size_t>>& confusion,
                       const std::vector<std::size_t>& n_train_per_class,
                       const std::vector<std::size_t>& n_test_per_class,
                       const std::vector<int>& labels) {
    ExperimentReport report;
    report.confusion = confusion;
    for (std::size_t c = 0; c < confusion.size(); ++c) {
        ClassReport row;
        row.class_label = labels[c];
        row.n_train = n_train_per_class[c];
        row.n_test = n_test_per_class[c];
        const std::size_t correct = confusion[c][c];
        row.recognition_rate =
            row.n_test == 0 ? 0.0
                            : static_cast<double>(correct) / static_cast<double>(row.n_test);
        report.total_correct += correct;
        report.total_tested += row.n_test;
        report.per_class.push_back(row);
    }
    report.overall_rate = report.total_tested == 0
                              ? 0.0
                              : static_cast<double>(report.total_correct) /
                                    static_cast<double>(report.total_tested);
    return report;
}

}  // namespace

std::pair<ModelDocument, ExperimentReport> run_experiment(const PairedDataset& dataset,
                                                          const ExperimentConfig& config) {
    const std::size_t n_classes = dataset.classes.size();
    if (n_classes < 2) {
        throw DataError("run_experiment: need at least 2 classes");
    }
    const std::vector<ClassSplit> splits =
        split_dataset(dataset, config.train_per_class, config.test_per_class,
                      config.split_seed);

    const FilterBank bank = make_filter_bank("db2");

    std::vector<std::vector<double>> train_vectors;
    std::vector<std::size_t> train_labels;
    std::vector<std::vector<double>> test_vectors;
    std::vector<std::size_t> test_labels;
    for (std::size_t c = 0; c < n_classes; ++c) {
        const ClassSamples& cls = dataset.classes[c];
        for (std::size_t idx : splits[c].train_indices) {
            train_vectors.push_back(fuse_and_vectorize(cls.pairs[idx], bank, config));
            train_labels.push_back(c);
        }
        for (std::size_t idx : splits[c].test_indices) {
            test_vectors.push_back(fuse_and_vectorize(cls.pairs[idx], bank, config));
            test_labels.push_back(c);
        }
    }

    // eigenspace fitted on training fused vectors only
    EigenModel eigen = config.pca_k.has_value()
                           ? fit_eigenspace(train_vectors, *config.pca_k)
                           : fit_eigenspace_by_variance(train_vectors, config.pca_variance);

    std::vector<LabeledSample> train_samples;
    train_samples.reserve(train_vectors.size());
    for (std::size_t i = 0; i < train_vectors.size(); ++i) {
        train_samples.push_back(
            {project(eigen, train_vectors[i]), one_hot(train_labels[i], n_classes)});
    }

    const std::size_t hidden =
        config.hidden_units > 0 ? config.hidden_units
                                : std::max<std::size_t>(8, 2 * n_classes);
    MlpNetwork net = init_network({eigen.k, hidden, n_classes}, config.init_seed);
    const TrainReport train_report = train(net, train_samples, config.training);

    std::vector<std::vector<std::size_t>> confusion(n_classes,
                                                    std::vector<std::size_t>(n_classes, 0));
    for (std::size_t i = 0; i < test_vectors.size(); ++i) {
        const auto [pred, scores] = classify(net, project(eigen, test_vectors[i]));
        confusion[test_labels[i]][pred] += 1;
    }

    std::vector<std::size_t> n_train(n_classes, config.train_per_class);
    std::vector<std::size_t> n_test(n_classes, config.test_per_class);
    std::vector<int> labels(n_classes);
    for (std::size_t c = 0; c < n_classes; ++c) labels[c] = dataset.classes[c].label;

    ExperimentReport report = tally(confusion, n_train, n_test, labels);
    report.config = config;
    report.pca_k_effective = eigen.k;
    report.hidden_units_effective = hidden;
    report.train_epochs_run = train_report.epochs_run;
    report.train_final_mse = train_report.final_mse;

    ModelDocument doc;
    doc.levels = config.levels;
    doc.mode = config.mode;
    doc.rule = config.rule;
    doc.zero_approximation = config.zero_approximation;
    doc.image_dims = dataset.image_dims;
    doc.eigenspace = std::move(eigen);
    doc.network = std::move(net);
    doc.training = config.training;
    return {std::move(doc), std::move(report)};
}

std::pair<std::size_t, std::vector<double>> classify_pair(const ModelDocument& model,
                                                          const ImagePair& pair) {
    const FilterBank bank = make_filter_bank("db2");
    const GrayImage fused = fuse_images(pair.visual, pair.thermal, bank, model.mode,
                                        model.levels, model.rule, model.zero_approximation);
    return classify(model.network, project(model.eigenspace, vectorize(fused)));
}

ExperimentReport evaluate_model(const ModelDocument& model, const PairedDataset& dataset) {
    if (dataset.image_dims != model.image_dims) {
        std::ostringstream msg;
        msg << "dataset images are " << dataset.image_dims.rows << "x"
            << dataset.image_dims.cols << " but the model expects " << model.image_dims.rows
            << "x" << model.image_dims.cols;
        throw DimensionError(msg.str());
    }
    const std::size_t n_outputs = model.network.layer_sizes.back();
    if (dataset.classes.size() > n_outputs) {
        std::ostringstream msg;
        msg << "dataset has " << dataset.classes.size() << " classes but the model only covers "
            << n_outputs;
        throw DataError(msg.str());
    }

    std::vector<std::vector<std::size_t>> confusion(n_outputs,
                                                    std::vector<std::size_t>(n_outputs, 0));
    std::vector<std::size_t> n_train(n_outputs, 0);
    std::vector<std::size_t> n_test(n_outputs, 0);
    std::vector<int> labels(n_outputs);
    std::iota(labels.begin(), labels.end(), 0);

    for (const ClassSamples& cls : dataset.classes) {
        const std::size_t c = static_cast<std::size_t>(cls.label);
        n_test[c] = cls.pairs.size();
        for (const ImagePair& pair : cls.pairs) {
            const auto [pred, scores] = classify_pair(model, pair);
            confusion[c][pred] += 1;
        }
    }

    ExperimentReport report = tally(confusion, n_train, n_test, labels);
    report.config.levels = model.levels;
    report.config.mode = model.mode;
    report.config.rule = model.rule;
    report.config.zero_approximation = model.zero_approximation;
    report.config.train_per_class = 0;
    report.config.test_per_class = 0;
    report.config.pca_k = model.eigenspace.k;
    report.config.training = model.training;
    report.pca_k_effective = model.eigenspace.k;
    report.hidden_units_effective =
        model.network.layer_sizes.size() > 2 ? model.network.layer_sizes[1] : 0;
    return report;
}

}  // namespace facefuse
