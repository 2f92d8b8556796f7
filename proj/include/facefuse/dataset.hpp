#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "facefuse/image.hpp"
#include "facefuse/matrix.hpp"

namespace facefuse {

struct ClassSamples {
    int label = 0;
    std::vector<ImagePair> pairs;
};

// Visual/thermal pairs grouped by class; labels contiguous from 0 and all
// images share image_dims.
struct PairedDataset {
    std::vector<ClassSamples> classes;
    Dims image_dims;
    std::vector<std::string> warnings;  // unpaired files, skipped entries

    std::size_t total_pairs() const;
};

/// Reads a dataset laid out as root/class_<n>/<id>_vis.pgm plus the
/// matching <id>_thm.pgm. Pairs are matched by <id>; unpaired files are
/// listed in warnings. Class directories are relabeled contiguously from 0
/// in ascending numeric order. All images must share dimensions.
PairedDataset scan_dataset(const std::filesystem::path& root);

/// Deterministic synthetic stand-in for a real thermal/visible corpus.
/// Each class owns two fixed smooth low-frequency templates; visual
/// samples scale theirs by a random gain in [1-spread, 1+spread] plus
/// Gaussian noise, thermal samples add noise only (gain-free).
PairedDataset generate_synthetic_dataset(std::size_t n_classes, std::size_t pairs_per_class,
                                         Dims dims, double noise_sigma,
                                         double illumination_spread, std::uint32_t seed);

/// Writes the dataset in the layout scan_dataset reads.
void write_dataset(const PairedDataset& dataset, const std::filesystem::path& root);

}  // namespace facefuse
