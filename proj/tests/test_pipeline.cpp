#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <string>

#include <json.hpp>

#include "facefuse/dataset.hpp"
#include "facefuse/errors.hpp"
#include "facefuse/experiment.hpp"
#include "facefuse/serialization.hpp"

using namespace facefuse;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "facefuse_test" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

void write_pgm(const fs::path& p, std::size_t rows, std::size_t cols, unsigned char fill) {
    GrayImage img(rows, cols, fill / 255.0);
    save_image(img, p);
}

// small dataset the level-3 pipeline can digest quickly
PairedDataset quick_synth(std::uint32_t seed = 7) {
    return generate_synthetic_dataset(4, 6, {32, 32}, 0.01, 0.2, seed);
}

ExperimentConfig quick_config() {
    ExperimentConfig cfg;
    cfg.levels = 3;
    cfg.train_per_class = 3;
    cfg.test_per_class = 3;
    cfg.training.max_epochs = 300;
    cfg.split_seed = 1;
    cfg.init_seed = 2;
    cfg.training.shuffle_seed = 3;
    return cfg;
}

}  // namespace

TEST_SUITE("pipeline") {

TEST_CASE("scan pairs files and counts classes") {
    const fs::path root = fresh_dir("scan_ok");
    for (int c : {0, 1}) {
        const fs::path dir = root / ("class_" + std::to_string(c));
        fs::create_directories(dir);
        for (const char* id : {"a", "b"}) {
            write_pgm(dir / (std::string(id) + "_vis.pgm"), 8, 8, 100);
            write_pgm(dir / (std::string(id) + "_thm.pgm"), 8, 8, 200);
        }
    }
    const PairedDataset ds = scan_dataset(root);
    REQUIRE(ds.classes.size() == 2);
    CHECK(ds.classes[0].pairs.size() == 2);
    CHECK(ds.classes[1].pairs.size() == 2);
    CHECK(ds.image_dims == Dims{8, 8});
    CHECK(ds.warnings.empty());
}

TEST_CASE("unpaired files are warnings, not failures") {
    const fs::path root = fresh_dir("scan_unpaired");
    const fs::path dir = root / "class_0";
    fs::create_directories(dir);
    write_pgm(dir / "a_vis.pgm", 8, 8, 10);
    write_pgm(dir / "a_thm.pgm", 8, 8, 20);
    write_pgm(dir / "b_vis.pgm", 8, 8, 30);  // no thermal partner
    const PairedDataset ds = scan_dataset(root);
    CHECK(ds.classes[0].pairs.size() == 1);
    REQUIRE(ds.warnings.size() == 1);
    CHECK(ds.warnings[0].find("b_vis") != std::string::npos);
}

TEST_CASE("empty roots are rejected") {
    const fs::path root = fresh_dir("scan_empty");
    CHECK_THROWS_AS(scan_dataset(root), DataError);
    CHECK_THROWS_AS(scan_dataset(root / "missing"), DataError);
}

TEST_CASE("class directories are relabeled contiguously") {
    const fs::path root = fresh_dir("scan_relabel");
    for (int c : {3, 7}) {
        const fs::path dir = root / ("class_" + std::to_string(c));
        fs::create_directories(dir);
        write_pgm(dir / "x_vis.pgm", 8, 8, 100);
        write_pgm(dir / "x_thm.pgm", 8, 8, 100);
    }
    const PairedDataset ds = scan_dataset(root);
    REQUIRE(ds.classes.size() == 2);
    CHECK(ds.classes[0].label == 0);
    CHECK(ds.classes[1].label == 1);
    CHECK(ds.classes[0].pairs[0].sample_id == "class_3/x");
    CHECK(ds.classes[1].pairs[0].sample_id == "class_7/x");
}

TEST_CASE("mismatched dims under strict pairing fail") {
    const fs::path root = fresh_dir("scan_mismatch");
    const fs::path dir = root / "class_0";
    fs::create_directories(dir);
    write_pgm(dir / "a_vis.pgm", 8, 8, 100);
    write_pgm(dir / "a_thm.pgm", 8, 6, 100);
    CHECK_THROWS_AS(scan_dataset(root), DimensionError);
}

TEST_CASE("synthetic generation is deterministic") {
    const PairedDataset a = generate_synthetic_dataset(3, 4, {16, 16}, 0.05, 0.1, 11);
    const PairedDataset b = generate_synthetic_dataset(3, 4, {16, 16}, 0.05, 0.1, 11);
    REQUIRE(a.classes.size() == 3);
    REQUIRE(a.classes[0].pairs.size() == 4);
    for (std::size_t c = 0; c < 3; ++c) {
        for (std::size_t s = 0; s < 4; ++s) {
            CHECK(a.classes[c].pairs[s].visual.values == b.classes[c].pairs[s].visual.values);
            CHECK(a.classes[c].pairs[s].thermal.values ==
                  b.classes[c].pairs[s].thermal.values);
        }
    }
    const PairedDataset c = generate_synthetic_dataset(3, 4, {16, 16}, 0.05, 0.1, 12);
    CHECK(a.classes[0].pairs[0].visual.values != c.classes[0].pairs[0].visual.values);
}

TEST_CASE("degenerate generator collapses within-class variation") {
    const PairedDataset ds = generate_synthetic_dataset(2, 3, {16, 16}, 0.0, 0.0, 13);
    for (const ClassSamples& cls : ds.classes) {
        for (std::size_t s = 1; s < cls.pairs.size(); ++s) {
            CHECK(cls.pairs[s].visual.values == cls.pairs[0].visual.values);
            CHECK(cls.pairs[s].thermal.values == cls.pairs[0].thermal.values);
        }
    }
    // distinct classes still differ
    CHECK(ds.classes[0].pairs[0].visual.values != ds.classes[1].pairs[0].visual.values);
}

TEST_CASE("generator validates its parameters") {
    CHECK_THROWS_AS(generate_synthetic_dataset(0, 4, {16, 16}, 0.0, 0.0, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(generate_synthetic_dataset(2, 4, {8, 16}, 0.0, 0.0, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(generate_synthetic_dataset(2, 4, {16, 16}, -0.1, 0.0, 1),
                    std::invalid_argument);
}

TEST_CASE("write then scan round trips the dataset") {
    const PairedDataset ds = generate_synthetic_dataset(2, 3, {16, 16}, 0.02, 0.1, 14);
    const fs::path root = fresh_dir("write_scan");
    write_dataset(ds, root);
    const PairedDataset back = scan_dataset(root);
    REQUIRE(back.classes.size() == ds.classes.size());
    CHECK(back.image_dims == ds.image_dims);
    for (std::size_t c = 0; c < ds.classes.size(); ++c) {
        REQUIRE(back.classes[c].pairs.size() == ds.classes[c].pairs.size());
        for (std::size_t s = 0; s < ds.classes[c].pairs.size(); ++s) {
            CHECK(back.classes[c].pairs[s].sample_id == ds.classes[c].pairs[s].sample_id);
            for (std::size_t i = 0; i < ds.image_dims.rows * ds.image_dims.cols; ++i) {
                CHECK(std::abs(back.classes[c].pairs[s].visual.values[i] -
                               ds.classes[c].pairs[s].visual.values[i]) <= 1.0 / 255.0);
            }
        }
    }
}

TEST_CASE("split is seeded, disjoint, and exhaustive per class") {
    const PairedDataset ds = quick_synth();
    const auto splits = split_dataset(ds, 3, 3, 42);
    const auto again = split_dataset(ds, 3, 3, 42);
    REQUIRE(splits.size() == ds.classes.size());
    for (std::size_t c = 0; c < splits.size(); ++c) {
        CHECK(splits[c].train_indices == again[c].train_indices);
        CHECK(splits[c].test_indices == again[c].test_indices);
        std::set<std::string> train_ids, test_ids;
        for (std::size_t i : splits[c].train_indices) {
            train_ids.insert(ds.classes[c].pairs[i].sample_id);
        }
        for (std::size_t i : splits[c].test_indices) {
            test_ids.insert(ds.classes[c].pairs[i].sample_id);
        }
        CHECK(train_ids.size() == 3);
        CHECK(test_ids.size() == 3);
        for (const std::string& id : test_ids) CHECK(train_ids.count(id) == 0);
    }
    CHECK_THROWS_AS(split_dataset(ds, 0, 3, 42), std::invalid_argument);
    CHECK_THROWS_AS(split_dataset(ds, 3, 0, 42), std::invalid_argument);
    CHECK_THROWS_AS(split_dataset(ds, 5, 5, 42), DataError);  // only 6 per class
}

TEST_CASE("experiment report arithmetic is exact") {
    const PairedDataset ds = quick_synth();
    const ExperimentConfig cfg = quick_config();
    const auto [model, report] = run_experiment(ds, cfg);

    REQUIRE(report.per_class.size() == 4);
    std::size_t total_correct = 0, total_tested = 0;
    for (std::size_t c = 0; c < report.per_class.size(); ++c) {
        const ClassReport& row = report.per_class[c];
        CHECK(row.n_train == 3);
        CHECK(row.n_test == 3);
        CHECK(row.recognition_rate >= 0.0);
        CHECK(row.recognition_rate <= 1.0);
        std::size_t row_sum = 0;
        for (std::size_t p = 0; p < report.confusion[c].size(); ++p) {
            row_sum += report.confusion[c][p];
        }
        CHECK(row_sum == row.n_test);  // confusion rows cover every test sample
        const std::size_t correct = report.confusion[c][c];
        CHECK(row.recognition_rate ==
              static_cast<double>(correct) / static_cast<double>(row.n_test));
        total_correct += correct;
        total_tested += row.n_test;
    }
    CHECK(report.total_correct == total_correct);
    CHECK(report.total_tested == total_tested);
    CHECK(report.overall_rate ==
          static_cast<double>(total_correct) / static_cast<double>(total_tested));

    // overall equals the test-count weighted mean of per-class rates
    double weighted = 0.0;
    for (const ClassReport& row : report.per_class) {
        weighted += row.recognition_rate * static_cast<double>(row.n_test);
    }
    CHECK(report.overall_rate ==
          doctest::Approx(weighted / static_cast<double>(total_tested)).epsilon(1e-15));
}

TEST_CASE("experiments are deterministic end to end") {
    const PairedDataset ds = quick_synth();
    const ExperimentConfig cfg = quick_config();
    const auto [model_a, report_a] = run_experiment(ds, cfg);
    const auto [model_b, report_b] = run_experiment(ds, cfg);
    CHECK(report_to_string(report_a) == report_to_string(report_b));
    for (std::size_t l = 0; l < model_a.network.weights.size(); ++l) {
        CHECK(model_a.network.weights[l].values == model_b.network.weights[l].values);
    }
    CHECK(model_a.eigenspace.mean == model_b.eigenspace.mean);
}

TEST_CASE("experiment gates on split feasibility") {
    const PairedDataset ds = quick_synth();
    ExperimentConfig cfg = quick_config();
    cfg.test_per_class = 0;
    CHECK_THROWS_AS(run_experiment(ds, cfg), std::invalid_argument);
    cfg.test_per_class = 10;  // only 6 pairs per class
    CHECK_THROWS_AS(run_experiment(ds, cfg), DataError);
}

TEST_CASE("model documents round trip through disk") {
    const PairedDataset ds = quick_synth();
    const ExperimentConfig cfg = quick_config();
    const auto [model, report] = run_experiment(ds, cfg);

    const fs::path path = fresh_dir("model_io") / "model.json";
    save_model(model, path);
    const ModelDocument loaded = load_model(path);

    CHECK(loaded.levels == model.levels);
    CHECK(loaded.mode == model.mode);
    CHECK(loaded.image_dims == model.image_dims);
    CHECK(loaded.eigenspace.mean == model.eigenspace.mean);  // bit-identical

    // identical classifications (and scores) on random vectors
    std::mt19937 rng(77);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> x(model.eigenspace.dimension);
        for (double& v : x) v = dist(rng);
        const auto [ca, sa] = classify(model.network, project(model.eigenspace, x));
        const auto [cb, sb] = classify(loaded.network, project(loaded.eigenspace, x));
        CHECK(ca == cb);
        CHECK(sa == sb);
    }
}

TEST_CASE("model loader rejects bad documents") {
    const PairedDataset ds = quick_synth();
    const auto [model, report] = run_experiment(ds, quick_config());
    const fs::path dir = fresh_dir("model_bad");
    const fs::path good = dir / "good.json";
    save_model(model, good);

    std::ifstream in(good);
    nlohmann::json doc;
    in >> doc;

    SUBCASE("missing eigenspace section") {
        doc.erase("eigenspace");
        const fs::path bad = dir / "noeigen.json";
        std::ofstream(bad) << doc.dump(2);
        CHECK_THROWS_WITH_AS(load_model(bad), doctest::Contains("eigenspace"), SchemaError);
    }
    SUBCASE("wrong version is named in the error") {
        doc["version"] = 99;
        const fs::path bad = dir / "version.json";
        std::ofstream(bad) << doc.dump(2);
        try {
            load_model(bad);
            FAIL("expected SchemaError");
        } catch (const SchemaError& e) {
            const std::string what = e.what();
            CHECK(what.find("99") != std::string::npos);
            CHECK(what.find("1") != std::string::npos);
        }
    }
    SUBCASE("wrong format tag") {
        doc["format"] = "facefuse-report";
        const fs::path bad = dir / "format.json";
        std::ofstream(bad) << doc.dump(2);
        CHECK_THROWS_AS(load_model(bad), SchemaError);
    }
    SUBCASE("inconsistent layer sizes") {
        doc["network"]["layer_sizes"][0] = 999;
        const fs::path bad = dir / "layers.json";
        std::ofstream(bad) << doc.dump(2);
        CHECK_THROWS_AS(load_model(bad), SchemaError);
    }
}

TEST_CASE("evaluate_model scores a whole dataset") {
    const PairedDataset ds = quick_synth();
    const auto [model, train_report] = run_experiment(ds, quick_config());
    const ExperimentReport report = evaluate_model(model, ds);
    CHECK(report.total_tested == ds.total_pairs());
    for (const ClassReport& row : report.per_class) {
        CHECK(row.n_train == 0);
        CHECK(row.n_test == 6);
    }
    // training pairs are included here, so the rate should be solid
    CHECK(report.overall_rate >= 0.5);

    const PairedDataset wrong_dims = generate_synthetic_dataset(2, 2, {16, 16}, 0.0, 0.0, 3);
    CHECK_THROWS_AS(evaluate_model(model, wrong_dims), DimensionError);
}

TEST_CASE("report files parse as structured documents") {
    const PairedDataset ds = quick_synth();
    const auto [model, report] = run_experiment(ds, quick_config());
    const fs::path path = fresh_dir("report_io") / "report.json";
    save_report(report, path);

    std::ifstream in(path);
    nlohmann::json doc;
    in >> doc;
    CHECK(doc["format"] == "facefuse-report");
    REQUIRE(doc["classes"].size() == 4);
    CHECK(doc["classes"][0].contains("n_train"));
    CHECK(doc["classes"][0].contains("n_test"));
    CHECK(doc["classes"][0].contains("recognition_rate"));
    CHECK(doc.contains("overall_rate"));
    CHECK(doc.contains("confusion"));
    CHECK(doc["config"]["fusion_rule"] == "average");
}

}  // TEST_SUITE
