#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "facefuse/matrix.hpp"

namespace facefuse {

// Visual/thermal sample pair sharing one class label.
struct ImagePair {
    GrayImage visual;
    GrayImage thermal;
    int class_label = 0;
    std::string sample_id;
};

enum class ConformPolicy { strict, center_crop };

/// Reads a PGM image (ASCII P2 or binary P5, maxval <= 65535) and scales
/// pixels to [0,1] by dividing by maxval. Header comments (# lines) after
/// the magic are skipped. Throws ImageIoError naming the byte offset or
/// missing field on malformed input.
GrayImage load_image(const std::filesystem::path& path);

/// Writes a binary P5 file with maxval 255; each pixel is written as
/// round(clamp(p,0,1)*255), so a load/save round trip moves in-range
/// pixels by at most 1/255.
void save_image(const GrayImage& image, const std::filesystem::path& path);

/// Brings two images to identical dimensions. strict: error unless equal.
/// center_crop: both cropped to the elementwise-minimum dims about the
/// center, keeping the upper-left half on odd remainders.
std::pair<GrayImage, GrayImage> conform_pair(const GrayImage& a, const GrayImage& b,
                                             ConformPolicy policy);

/// Row-major flattening; exact inverse of devectorize for matching dims.
std::vector<double> vectorize(const GrayImage& image);
GrayImage devectorize(const std::vector<double>& vec, std::size_t rows, std::size_t cols);

/// Affine min-max rescale into [0,1]; a flat image maps to 0.5.
GrayImage to_unit_range(const GrayImage& image);

}  // namespace facefuse
