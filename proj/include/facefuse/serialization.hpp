#pragma once

#include <filesystem>
#include <string>

#include "facefuse/experiment.hpp"
#include "facefuse/wavelet.hpp"

namespace facefuse {

// All documents are JSON with alphabetically ordered keys and full
// round-trip decimal precision for every coefficient, so identical inputs
// always serialize to identical bytes. Each document carries a "format"
// tag and integer "version"; loaders reject unknown values with a
// SchemaError naming both versions.

void save_pyramid(const DecompositionPyramid& pyramid, const std::filesystem::path& path);
DecompositionPyramid load_pyramid(const std::filesystem::path& path);

void save_model(const ModelDocument& model, const std::filesystem::path& path);
ModelDocument load_model(const std::filesystem::path& path);

void save_report(const ExperimentReport& report, const std::filesystem::path& path);
std::string report_to_string(const ExperimentReport& report);

}  // namespace facefuse
