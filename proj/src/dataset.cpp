#include "facefuse/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include "facefuse/errors.hpp"

namespace facefuse {

std::size_t PairedDataset::total_pairs() const {
    std::size_t total = 0;
    for (const ClassSamples& c : classes) total += c.pairs.size();
    return total;
}

namespace {

constexpr const char* kVisSuffix = "_vis.pgm";
constexpr const char* kThmSuffix = "_thm.pgm";

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() &&
           s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

PairedDataset scan_dataset(const std::filesystem::path& root) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(root)) {
        throw DataError("dataset root '" + root.string() + "' is not a directory");
    }

    // class_<n> directories in ascending numeric order
    std::map<long, fs::path> class_dirs;
    for (const auto& entry : fs::directory_iterator(root)) {
        if (!entry.is_directory()) continue;
        const std::string name = entry.path().filename().string();
        if (name.rfind("class_", 0) != 0) continue;
        const std::string digits = name.substr(6);
        if (digits.empty() ||
            digits.find_first_not_of("0123456789") != std::string::npos) {
            continue;
        }
        class_dirs.emplace(std::stol(digits), entry.path());
    }
    if (class_dirs.empty()) {
        throw DataError("dataset root '" + root.string() + "' contains no class_<n> directories");
    }

    PairedDataset ds;
    int next_label = 0;
    for (const auto& [number, dir] : class_dirs) {
        std::map<std::string, fs::path> vis, thm;
        for (const auto& entry : fs::directory_iterator(dir)) {
            if (!entry.is_regular_file()) continue;
            const std::string name = entry.path().filename().string();
            if (ends_with(name, kVisSuffix)) {
                vis.emplace(name.substr(0, name.size() - 8), entry.path());
            } else if (ends_with(name, kThmSuffix)) {
                thm.emplace(name.substr(0, name.size() - 8), entry.path());
            }
        }

        ClassSamples cls;
        cls.label = next_label;
        for (const auto& [id, vis_path] : vis) {
            auto it = thm.find(id);
            if (it == thm.end()) {
                ds.warnings.push_back("unpaired visual file '" + vis_path.string() +
                                      "' (no matching " + id + kThmSuffix + ")");
                continue;
            }
            ImagePair pair;
            pair.visual = load_image(vis_path);
            pair.thermal = load_image(it->second);
            pair.class_label = cls.label;
            pair.sample_id = "class_" + std::to_string(number) + "/" + id;
            auto [v, t] = conform_pair(pair.visual, pair.thermal, ConformPolicy::strict);
            pair.visual = std::move(v);
            pair.thermal = std::move(t);

            const Dims d = dims_of(pair.visual);
            if (ds.image_dims == Dims{}) {
                ds.image_dims = d;
            } else if (d != ds.image_dims) {
                std::ostringstream msg;
                msg << "image '" << vis_path.string() << "' is " << d.rows << "x" << d.cols
                    << " but the dataset is " << ds.image_dims.rows << "x"
                    << ds.image_dims.cols;
                throw DimensionError(msg.str());
            }
            cls.pairs.push_back(std::move(pair));
        }
        for (const auto& [id, thm_path] : thm) {
            if (!vis.count(id)) {
                ds.warnings.push_back("unpaired thermal file '" + thm_path.string() +
                                      "' (no matching " + id + kVisSuffix + ")");
            }
        }
        if (!cls.pairs.empty()) {
            ds.classes.push_back(std::move(cls));
            ++next_label;
        } else {
            ds.warnings.push_back("class directory '" + dir.string() +
                                  "' has no complete pairs; skipped");
        }
    }
    if (ds.classes.empty()) {
        throw DataError("dataset root '" + root.string() + "' contains no complete pairs");
    }
    return ds;
}

namespace {

// Smooth per-class pattern: one distinguishing low-frequency cosine mode
// chosen from an enumeration of lattice points (distinct per class), plus
// two seeded random texture modes. Distinct Fourier modes keep class
// templates near-orthogonal.
GrayImage make_template(Dims dims, std::size_t mode_index, std::mt19937& rng) {
    static constexpr std::pair<int, int> kModes[] = {
        {1, 0}, {0, 1}, {1, 1}, {2, 0}, {0, 2}, {2, 1}, {1, 2}, {2, 2},
        {3, 0}, {0, 3}, {3, 1}, {1, 3}, {3, 2}, {2, 3}, {3, 3}, {4, 1},
        {1, 4}, {4, 2}, {2, 4}, {4, 3},
    };
    constexpr std::size_t n_modes = sizeof(kModes) / sizeof(kModes[0]);

    struct Mode {
        double fr, fc, amplitude, phase;
    };
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    std::uniform_real_distribution<double> main_amp(0.12, 0.18);
    std::uniform_real_distribution<double> texture_amp(0.03, 0.06);
    std::uniform_int_distribution<int> texture_freq(1, 3);

    std::vector<Mode> modes;
    const auto [mr, mc] = kModes[mode_index % n_modes];
    modes.push_back({static_cast<double>(mr), static_cast<double>(mc), main_amp(rng),
                     phase(rng)});
    for (int i = 0; i < 2; ++i) {
        modes.push_back({static_cast<double>(texture_freq(rng)),
                         static_cast<double>(texture_freq(rng)), texture_amp(rng),
                         phase(rng)});
    }

    GrayImage img(dims.rows, dims.cols, 0.5);
    for (std::size_t r = 0; r < dims.rows; ++r) {
        for (std::size_t c = 0; c < dims.cols; ++c) {
            double v = 0.5;
            for (const Mode& m : modes) {
                v += m.amplitude *
                     std::cos(2.0 * std::numbers::pi *
                                  (m.fr * static_cast<double>(r) / static_cast<double>(dims.rows) +
                                   m.fc * static_cast<double>(c) / static_cast<double>(dims.cols)) +
                              m.phase);
            }
            img(r, c) = std::clamp(v, 0.02, 0.98);
        }
    }
    return img;
}

}  // namespace

PairedDataset generate_synthetic_dataset(std::size_t n_classes, std::size_t pairs_per_class,
                                         Dims dims, double noise_sigma,
                                         double illumination_spread, std::uint32_t seed) {
    if (n_classes == 0 || pairs_per_class == 0) {
        throw std::invalid_argument("generate_synthetic_dataset: counts must be positive");
    }
    if (dims.rows < 16 || dims.cols < 16) {
        throw std::invalid_argument("generate_synthetic_dataset: dims must be at least 16x16");
    }
    if (noise_sigma < 0.0 || illumination_spread < 0.0 || illumination_spread >= 1.0) {
        throw std::invalid_argument(
            "generate_synthetic_dataset: noise_sigma >= 0 and spread in [0,1) required");
    }

    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> gain(1.0 - illumination_spread,
                                                1.0 + illumination_spread);
    std::normal_distribution<double> noise(0.0, noise_sigma > 0.0 ? noise_sigma : 1.0);

    PairedDataset ds;
    ds.image_dims = dims;
    for (std::size_t c = 0; c < n_classes; ++c) {
        // thermal template offset into a different region of the mode table
        const GrayImage vis_template = make_template(dims, c, rng);
        const GrayImage thm_template = make_template(dims, c + n_classes, rng);

        ClassSamples cls;
        cls.label = static_cast<int>(c);
        for (std::size_t s = 0; s < pairs_per_class; ++s) {
            ImagePair pair;
            pair.class_label = cls.label;
            std::ostringstream id;
            id << "s" << (s < 10 ? "0" : "") << s;
            pair.sample_id = "class_" + std::to_string(c) + "/" + id.str();

            const double g = gain(rng);
            pair.visual = GrayImage(dims.rows, dims.cols);
            for (std::size_t i = 0; i < pair.visual.size(); ++i) {
                pair.visual.values[i] =
                    std::clamp(vis_template.values[i] * g + (noise_sigma > 0.0 ? noise(rng) : 0.0),
                               0.0, 1.0);
            }
            pair.thermal = GrayImage(dims.rows, dims.cols);
            for (std::size_t i = 0; i < pair.thermal.size(); ++i) {
                pair.thermal.values[i] =
                    std::clamp(thm_template.values[i] + (noise_sigma > 0.0 ? noise(rng) : 0.0),
                               0.0, 1.0);
            }
            cls.pairs.push_back(std::move(pair));
        }
        ds.classes.push_back(std::move(cls));
    }
    return ds;
}

void write_dataset(const PairedDataset& dataset, const std::filesystem::path& root) {
    namespace fs = std::filesystem;
    fs::create_directories(root);
    for (const ClassSamples& cls : dataset.classes) {
        const fs::path dir = root / ("class_" + std::to_string(cls.label));
        fs::create_directories(dir);
        for (const ImagePair& pair : cls.pairs) {
            // sample_id is "class_<n>/<id>"
            const std::string id = pair.sample_id.substr(pair.sample_id.find('/') + 1);
            save_image(pair.visual, dir / (id + kVisSuffix));
            save_image(pair.thermal, dir / (id + kThmSuffix));
        }
    }
}

}  // namespace facefuse
