#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace facefuse {

// Data-dependent failures (bad files, mismatched shapes, infeasible
// datasets). The CLI maps these to exit code 2.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class ImageIoErrc {
    missing_file,
    unsupported_format,
    malformed_header,
    truncated_data,
    invalid_sample,
    unwritable_path,
};

// PGM read/write failure; message names the offending byte offset or
// header field, `code()` distinguishes the failure kinds.
class ImageIoError : public DataError {
public:
    ImageIoError(ImageIoErrc code, const std::string& what)
        : DataError(what), code_(code) {}
    ImageIoErrc code() const { return code_; }

private:
    ImageIoErrc code_;
};

class DimensionError : public DataError {
public:
    using DataError::DataError;
};

// Requested decomposition depth exceeds what the image size supports.
class LevelCapacityError : public DataError {
public:
    LevelCapacityError(int failing_level, const std::string& what)
        : DataError(what), failing_level_(failing_level) {}
    int failing_level() const { return failing_level_; }

private:
    int failing_level_;
};

// Structured document (pyramid, model, report) violates its schema.
class SchemaError : public DataError {
public:
    using DataError::DataError;
};

// Non-finite parameters appeared during training. CLI exit code 3.
class DivergenceError : public std::runtime_error {
public:
    DivergenceError(std::size_t epoch, const std::string& what)
        : std::runtime_error(what), epoch_(epoch) {}
    std::size_t epoch() const { return epoch_; }

private:
    std::size_t epoch_;
};

}  // namespace facefuse
