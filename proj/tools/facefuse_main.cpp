// Command-line front end: decompose / fuse / train / evaluate / synth.
#include <cstdint>
#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "facefuse/dataset.hpp"
#include "facefuse/errors.hpp"
#include "facefuse/experiment.hpp"
#include "facefuse/fusion.hpp"
#include "facefuse/image.hpp"
#include "facefuse/serialization.hpp"
#include "facefuse/wavelet.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitDivergence = 3;

facefuse::Dims parse_dims(const std::string& text) {
    const std::size_t x = text.find('x');
    if (x == std::string::npos || x == 0 || x + 1 == text.size()) {
        throw std::invalid_argument("bad --dims '" + text + "' (expected <rows>x<cols>)");
    }
    try {
        return {std::stoul(text.substr(0, x)), std::stoul(text.substr(x + 1))};
    } catch (const std::exception&) {
        throw std::invalid_argument("bad --dims '" + text + "' (expected <rows>x<cols>)");
    }
}

void print_warnings(const facefuse::PairedDataset& ds) {
    for (const std::string& w : ds.warnings) {
        std::cerr << "warning: " << w << "\n";
    }
}

void print_report_table(const facefuse::ExperimentReport& report) {
    std::printf("%-12s %10s %10s %18s\n", "class", "n_train", "n_test", "recognition rate");
    for (const facefuse::ClassReport& row : report.per_class) {
        std::printf("class-%-6d %10zu %10zu %17.1f%%\n", row.class_label + 1, row.n_train,
                    row.n_test, 100.0 * row.recognition_rate);
    }
    std::printf("overall: %.1f%% (%zu/%zu)\n", 100.0 * report.overall_rate,
                report.total_correct, report.total_tested);
}

struct TrainFlags {
    std::string dataset;
    std::size_t train_per_class = 10;
    std::size_t test_per_class = 10;
    int levels = 5;
    std::string mode = "sym";
    std::string rule = "average";
    bool zero_ca = false;
    std::optional<std::size_t> pca_k;
    double pca_var = 0.95;
    std::size_t hidden = 0;
    double lr = 0.1;
    double momentum = 0.9;
    std::size_t epochs = 2000;
    double target_mse = 1e-3;
    std::uint32_t seed = 0;
    std::string model_out;
    std::string report_out;
};

int run(int argc, char** argv) {
    CLI::App app{"Visual/thermal face-recognition pipeline: db2 wavelet fusion, "
                 "PCA eigenspace, MLP classifier"};
    app.require_subcommand(1);

    // decompose
    auto* decompose_cmd = app.add_subcommand("decompose", "Decompose a PGM image into a "
                                                          "multilevel wavelet pyramid file");
    std::string dec_input, dec_wavelet = "db2", dec_mode = "sym", dec_out;
    int dec_levels = 5;
    decompose_cmd->add_option("--input", dec_input, "input PGM image")->required();
    decompose_cmd->add_option("--wavelet", dec_wavelet, "wavelet name (db2)");
    decompose_cmd->add_option("--levels", dec_levels, "decomposition depth");
    decompose_cmd->add_option("--mode", dec_mode, "boundary mode: sym|per");
    decompose_cmd->add_option("--out", dec_out, "output pyramid file")->required();

    // fuse
    auto* fuse_cmd = app.add_subcommand("fuse", "Fuse a visual/thermal PGM pair into one image");
    std::string fuse_vis, fuse_thm, fuse_rule = "average", fuse_mode = "sym", fuse_out;
    int fuse_levels = 5;
    bool fuse_zero_ca = false;
    fuse_cmd->add_option("--visual", fuse_vis, "visual PGM image")->required();
    fuse_cmd->add_option("--thermal", fuse_thm, "thermal PGM image")->required();
    fuse_cmd->add_option("--levels", fuse_levels, "decomposition depth");
    fuse_cmd->add_option("--rule", fuse_rule, "average|maxabs|weighted:<w>");
    fuse_cmd->add_option("--mode", fuse_mode, "boundary mode: sym|per");
    fuse_cmd->add_flag("--zero-ca", fuse_zero_ca, "zero the fused approximation subband");
    fuse_cmd->add_option("--out", fuse_out, "output PGM image")->required();

    // train
    auto* train_cmd = app.add_subcommand("train", "Train on a paired dataset and emit a "
                                                  "model plus a per-class report");
    TrainFlags tf;
    train_cmd->add_option("--dataset", tf.dataset, "dataset root directory")->required();
    train_cmd->add_option("--train-per-class", tf.train_per_class, "training pairs per class");
    train_cmd->add_option("--test-per-class", tf.test_per_class, "held-out pairs per class");
    train_cmd->add_option("--levels", tf.levels, "decomposition depth");
    train_cmd->add_option("--mode", tf.mode, "boundary mode: sym|per");
    train_cmd->add_option("--rule", tf.rule, "fusion rule");
    train_cmd->add_flag("--zero-ca", tf.zero_ca, "zero the fused approximation subband");
    auto* opt_k = train_cmd->add_option("--pca-k", tf.pca_k, "retained eigenspace dimension");
    train_cmd->add_option("--pca-var", tf.pca_var, "eigenvalue fraction to retain")
        ->excludes(opt_k);
    train_cmd->add_option("--hidden", tf.hidden, "hidden units (0 = auto)");
    train_cmd->add_option("--lr", tf.lr, "learning rate");
    train_cmd->add_option("--momentum", tf.momentum, "momentum constant");
    train_cmd->add_option("--epochs", tf.epochs, "maximum training epochs");
    train_cmd->add_option("--target-mse", tf.target_mse, "early-stop epoch MSE");
    train_cmd->add_option("--seed", tf.seed, "master seed (split/init/shuffle derive from it)");
    train_cmd->add_option("--model-out", tf.model_out, "output model file")->required();
    train_cmd->add_option("--report-out", tf.report_out, "output report file")->required();

    // evaluate
    auto* eval_cmd = app.add_subcommand("evaluate", "Classify every pair of a dataset with a "
                                                    "trained model");
    std::string eval_model, eval_dataset, eval_report;
    eval_cmd->add_option("--model", eval_model, "model file")->required();
    eval_cmd->add_option("--dataset", eval_dataset, "dataset root directory")->required();
    eval_cmd->add_option("--report-out", eval_report, "output report file")->required();

    // synth
    auto* synth_cmd = app.add_subcommand("synth", "Generate a deterministic synthetic "
                                                  "visual/thermal dataset");
    std::size_t sy_classes = 10, sy_pairs = 20;
    std::string sy_dims = "64x64", sy_out;
    double sy_noise = 0.01, sy_spread = 0.2;
    std::uint32_t sy_seed = 7;
    synth_cmd->add_option("--classes", sy_classes, "number of classes");
    synth_cmd->add_option("--pairs", sy_pairs, "pairs per class");
    synth_cmd->add_option("--dims", sy_dims, "image size <rows>x<cols>");
    synth_cmd->add_option("--noise", sy_noise, "pixel noise sigma");
    synth_cmd->add_option("--spread", sy_spread, "visual illumination gain spread");
    synth_cmd->add_option("--seed", sy_seed, "generator seed");
    synth_cmd->add_option("--out", sy_out, "output dataset directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    if (decompose_cmd->parsed()) {
        const facefuse::GrayImage img = facefuse::load_image(dec_input);
        const facefuse::FilterBank bank = facefuse::make_filter_bank(dec_wavelet);
        const facefuse::BoundaryMode mode = facefuse::boundary_mode_from_string(dec_mode);
        facefuse::save_pyramid(facefuse::decompose(img, bank, mode, dec_levels), dec_out);
        std::cout << "wrote pyramid '" << dec_out << "' (levels=" << dec_levels << ", mode="
                  << facefuse::to_string(mode) << ")\n";
    } else if (fuse_cmd->parsed()) {
        const facefuse::GrayImage vis = facefuse::load_image(fuse_vis);
        const facefuse::GrayImage thm = facefuse::load_image(fuse_thm);
        const facefuse::FilterBank bank = facefuse::make_filter_bank("db2");
        const facefuse::GrayImage fused = facefuse::fuse_images(
            vis, thm, bank, facefuse::boundary_mode_from_string(fuse_mode), fuse_levels,
            facefuse::fusion_rule_from_string(fuse_rule), fuse_zero_ca);
        facefuse::save_image(fuse_zero_ca ? facefuse::to_unit_range(fused) : fused, fuse_out);
        std::cout << "wrote fused image '" << fuse_out << "'\n";
    } else if (train_cmd->parsed()) {
        const facefuse::PairedDataset ds = facefuse::scan_dataset(tf.dataset);
        print_warnings(ds);

        facefuse::ExperimentConfig cfg;
        cfg.levels = tf.levels;
        cfg.mode = facefuse::boundary_mode_from_string(tf.mode);
        cfg.rule = facefuse::fusion_rule_from_string(tf.rule);
        cfg.zero_approximation = tf.zero_ca;
        cfg.train_per_class = tf.train_per_class;
        cfg.test_per_class = tf.test_per_class;
        cfg.pca_k = tf.pca_k;
        cfg.pca_variance = tf.pca_var;
        cfg.hidden_units = tf.hidden;
        cfg.training.learning_rate = tf.lr;
        cfg.training.momentum = tf.momentum;
        cfg.training.max_epochs = tf.epochs;
        cfg.training.target_mse = tf.target_mse;
        cfg.split_seed = tf.seed;
        cfg.init_seed = tf.seed + 1;
        cfg.training.shuffle_seed = tf.seed + 2;

        const auto [model, report] = facefuse::run_experiment(ds, cfg);
        facefuse::save_model(model, tf.model_out);
        facefuse::save_report(report, tf.report_out);
        print_report_table(report);
        std::cout << "model -> " << tf.model_out << "\nreport -> " << tf.report_out << "\n";
    } else if (eval_cmd->parsed()) {
        const facefuse::ModelDocument model = facefuse::load_model(eval_model);
        const facefuse::PairedDataset ds = facefuse::scan_dataset(eval_dataset);
        print_warnings(ds);
        const facefuse::ExperimentReport report = facefuse::evaluate_model(model, ds);
        facefuse::save_report(report, eval_report);
        print_report_table(report);
        std::cout << "report -> " << eval_report << "\n";
    } else if (synth_cmd->parsed()) {
        const facefuse::PairedDataset ds = facefuse::generate_synthetic_dataset(
            sy_classes, sy_pairs, parse_dims(sy_dims), sy_noise, sy_spread, sy_seed);
        facefuse::write_dataset(ds, sy_out);
        std::cout << "wrote " << ds.classes.size() << " classes x "
                  << ds.classes.front().pairs.size() << " pairs to '" << sy_out << "'\n";
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const facefuse::DivergenceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDivergence;
    } catch (const facefuse::DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
}
