#include "facefuse/serialization.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "facefuse/errors.hpp"

namespace facefuse {

namespace {

using nlohmann::json;

constexpr int kPyramidVersion = 1;
constexpr const char* kPyramidFormat = "facefuse-pyramid";
constexpr const char* kModelFormat = "facefuse-model";
constexpr const char* kReportFormat = "facefuse-report";

json matrix_to_json(const Matrix& m) {
    return json{{"rows", m.rows}, {"cols", m.cols}, {"values", m.values}};
}

Matrix matrix_from_json(const json& j, const std::string& where) {
    if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("values")) {
        throw SchemaError("document section '" + where + "' is not a matrix object");
    }
    Matrix m(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>());
    const auto values = j.at("values").get<std::vector<double>>();
    if (values.size() != m.rows * m.cols) {
        throw SchemaError("matrix '" + where + "' value count does not match its dimensions");
    }
    m.values = values;
    return m;
}

void write_document(const json& doc, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw DataError("cannot write document '" + path.string() + "'");
    }
    out << doc.dump(2) << "\n";
    if (!out) {
        throw DataError("failed writing document '" + path.string() + "'");
    }
}

json read_document(const std::filesystem::path& path, const char* expect_format) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot open document '" + path.string() + "'");
    }
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw SchemaError("document '" + path.string() + "' is not valid JSON: " + e.what());
    }
    if (!doc.is_object() || doc.value("format", std::string{}) != expect_format) {
        throw SchemaError("document '" + path.string() + "' is not a " +
                          std::string(expect_format) + " file");
    }
    return doc;
}

void check_version(const json& doc, int expected, const std::string& what) {
    const int got = doc.value("version", -1);
    if (got != expected) {
        std::ostringstream msg;
        msg << what << " version " << got << " is unsupported (this build reads version "
            << expected << ")";
        throw SchemaError(msg.str());
    }
}

const json& require(const json& doc, const char* key) {
    if (!doc.contains(key)) {
        throw SchemaError(std::string("document is missing required section '") + key + "'");
    }
    return doc.at(key);
}

template <typename T>
T field(const json& obj, const char* key) {
    try {
        return require(obj, key).get<T>();
    } catch (const json::exception&) {
        throw SchemaError(std::string("document field '") + key + "' has the wrong type");
    }
}

}  // namespace

void save_pyramid(const DecompositionPyramid& pyramid, const std::filesystem::path& path) {
    json details = json::array();
    for (const DetailTriple& det : pyramid.details) {
        details.push_back(json{{"ch", matrix_to_json(det.ch)},
                               {"cv", matrix_to_json(det.cv)},
                               {"cd", matrix_to_json(det.cd)}});
    }
    json dims = json::array();
    for (const Dims& d : pyramid.input_dims) dims.push_back(json::array({d.rows, d.cols}));

    const json doc{{"format", kPyramidFormat},
                   {"version", kPyramidVersion},
                   {"wavelet", pyramid.wavelet_name},
                   {"boundary_mode", to_string(pyramid.mode)},
                   {"levels", pyramid.levels},
                   {"level_input_dims", dims},
                   {"approximation", matrix_to_json(pyramid.approximation)},
                   {"details", details}};
    write_document(doc, path);
}

DecompositionPyramid load_pyramid(const std::filesystem::path& path) {
    const json doc = read_document(path, kPyramidFormat);
    check_version(doc, kPyramidVersion, "pyramid document");

    DecompositionPyramid pyr;
    pyr.wavelet_name = field<std::string>(doc, "wavelet");
    pyr.mode = boundary_mode_from_string(field<std::string>(doc, "boundary_mode"));
    pyr.levels = field<int>(doc, "levels");
    for (const json& d : require(doc, "level_input_dims")) {
        if (!d.is_array() || d.size() != 2) {
            throw SchemaError("pyramid level_input_dims entries must be [rows, cols]");
        }
        pyr.input_dims.push_back({d[0].get<std::size_t>(), d[1].get<std::size_t>()});
    }
    pyr.approximation = matrix_from_json(require(doc, "approximation"), "approximation");
    for (const json& det : require(doc, "details")) {
        pyr.details.push_back({matrix_from_json(require(det, "ch"), "details.ch"),
                               matrix_from_json(require(det, "cv"), "details.cv"),
                               matrix_from_json(require(det, "cd"), "details.cd")});
    }
    if (pyr.levels < 1 || pyr.details.size() != static_cast<std::size_t>(pyr.levels) ||
        pyr.input_dims.size() != static_cast<std::size_t>(pyr.levels)) {
        throw SchemaError("pyramid document levels do not match its detail/dims sections");
    }
    return pyr;
}

namespace {

json train_config_to_json(const TrainConfig& cfg) {
    return json{{"learning_rate", cfg.learning_rate},
                {"momentum", cfg.momentum},
                {"max_epochs", cfg.max_epochs},
                {"target_mse", cfg.target_mse},
                {"shuffle_seed", cfg.shuffle_seed}};
}

TrainConfig train_config_from_json(const json& j) {
    TrainConfig cfg;
    cfg.learning_rate = field<double>(j, "learning_rate");
    cfg.momentum = field<double>(j, "momentum");
    cfg.max_epochs = field<std::size_t>(j, "max_epochs");
    cfg.target_mse = field<double>(j, "target_mse");
    cfg.shuffle_seed = field<std::uint32_t>(j, "shuffle_seed");
    return cfg;
}

}  // namespace

void save_model(const ModelDocument& model, const std::filesystem::path& path) {
    json weights = json::array();
    for (const Matrix& w : model.network.weights) weights.push_back(matrix_to_json(w));

    const json doc{
        {"format", kModelFormat},
        {"version", ModelDocument::kFormatVersion},
        {"pipeline",
         json{{"levels", model.levels},
              {"boundary_mode", to_string(model.mode)},
              {"fusion_rule", to_string(model.rule)},
              {"zero_approximation", model.zero_approximation},
              {"image_rows", model.image_dims.rows},
              {"image_cols", model.image_dims.cols}}},
        {"eigenspace",
         json{{"dimension", model.eigenspace.dimension},
              {"k", model.eigenspace.k},
              {"mean", model.eigenspace.mean},
              {"eigenvalues", model.eigenspace.eigenvalues},
              {"basis", model.eigenspace.basis}}},
        {"network",
         json{{"layer_sizes", model.network.layer_sizes},
              {"activation", "logistic_sigmoid"},
              {"weights", weights},
              {"biases", model.network.biases},
              {"rng_seed", model.network.rng_seed}}},
        {"training", train_config_to_json(model.training)}};
    write_document(doc, path);
}

ModelDocument load_model(const std::filesystem::path& path) {
    const json doc = read_document(path, kModelFormat);
    check_version(doc, ModelDocument::kFormatVersion, "model document");

    ModelDocument model;
    const json& pipeline = require(doc, "pipeline");
    model.levels = field<int>(pipeline, "levels");
    model.mode = boundary_mode_from_string(field<std::string>(pipeline, "boundary_mode"));
    model.rule = fusion_rule_from_string(field<std::string>(pipeline, "fusion_rule"));
    model.zero_approximation = field<bool>(pipeline, "zero_approximation");
    model.image_dims = {field<std::size_t>(pipeline, "image_rows"),
                        field<std::size_t>(pipeline, "image_cols")};

    const json& eigen = require(doc, "eigenspace");
    model.eigenspace.dimension = field<std::size_t>(eigen, "dimension");
    model.eigenspace.k = field<std::size_t>(eigen, "k");
    model.eigenspace.mean = field<std::vector<double>>(eigen, "mean");
    model.eigenspace.eigenvalues = field<std::vector<double>>(eigen, "eigenvalues");
    model.eigenspace.basis = field<std::vector<std::vector<double>>>(eigen, "basis");
    if (model.eigenspace.mean.size() != model.eigenspace.dimension ||
        model.eigenspace.basis.size() != model.eigenspace.k ||
        model.eigenspace.eigenvalues.size() != model.eigenspace.k) {
        throw SchemaError("model eigenspace section is internally inconsistent");
    }
    for (const auto& b : model.eigenspace.basis) {
        if (b.size() != model.eigenspace.dimension) {
            throw SchemaError("model eigenspace basis vector has the wrong length");
        }
    }

    const json& network = require(doc, "network");
    model.network.layer_sizes = field<std::vector<std::size_t>>(network, "layer_sizes");
    if (field<std::string>(network, "activation") != "logistic_sigmoid") {
        throw SchemaError("model network activation is not logistic_sigmoid");
    }
    for (const json& w : require(network, "weights")) {
        model.network.weights.push_back(matrix_from_json(w, "network.weights"));
    }
    model.network.biases = field<std::vector<std::vector<double>>>(network, "biases");
    model.network.rng_seed = field<std::uint32_t>(network, "rng_seed");
    const std::size_t layers = model.network.layer_sizes.size();
    if (layers < 2 || model.network.weights.size() != layers - 1 ||
        model.network.biases.size() != layers - 1) {
        throw SchemaError("model network section is internally inconsistent");
    }
    for (std::size_t l = 0; l + 1 < layers; ++l) {
        if (model.network.weights[l].rows != model.network.layer_sizes[l + 1] ||
            model.network.weights[l].cols != model.network.layer_sizes[l] ||
            model.network.biases[l].size() != model.network.layer_sizes[l + 1]) {
            throw SchemaError("model network weight dimensions do not match layer_sizes");
        }
    }
    if (model.eigenspace.k != model.network.layer_sizes.front()) {
        throw SchemaError("model eigenspace k does not match the network input size");
    }

    model.training = train_config_from_json(require(doc, "training"));
    return model;
}

namespace {

json config_to_json(const ExperimentConfig& cfg) {
    json j{{"levels", cfg.levels},
           {"boundary_mode", to_string(cfg.mode)},
           {"fusion_rule", to_string(cfg.rule)},
           {"zero_approximation", cfg.zero_approximation},
           {"train_per_class", cfg.train_per_class},
           {"test_per_class", cfg.test_per_class},
           {"pca_variance", cfg.pca_variance},
           {"hidden_units", cfg.hidden_units},
           {"split_seed", cfg.split_seed},
           {"init_seed", cfg.init_seed},
           {"training", train_config_to_json(cfg.training)}};
    if (cfg.pca_k.has_value()) {
        j["pca_k"] = *cfg.pca_k;
    } else {
        j["pca_k"] = nullptr;
    }
    return j;
}

}  // namespace

std::string report_to_string(const ExperimentReport& report) {
    json classes = json::array();
    for (const ClassReport& row : report.per_class) {
        classes.push_back(json{{"class", row.class_label},
                               {"n_train", row.n_train},
                               {"n_test", row.n_test},
                               {"recognition_rate", row.recognition_rate}});
    }
    const json doc{{"format", kReportFormat},
                   {"version", 1},
                   {"config", config_to_json(report.config)},
                   {"pca_k_effective", report.pca_k_effective},
                   {"hidden_units_effective", report.hidden_units_effective},
                   {"train_epochs_run", report.train_epochs_run},
                   {"train_final_mse", report.train_final_mse},
                   {"classes", classes},
                   {"overall_rate", report.overall_rate},
                   {"total_correct", report.total_correct},
                   {"total_tested", report.total_tested},
                   {"confusion", report.confusion}};
    return doc.dump(2) + "\n";
}

void save_report(const ExperimentReport& report, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw DataError("cannot write report '" + path.string() + "'");
    }
    out << report_to_string(report);
    if (!out) {
        throw DataError("failed writing report '" + path.string() + "'");
    }
}

}  // namespace facefuse
