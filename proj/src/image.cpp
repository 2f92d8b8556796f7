#include "facefuse/image.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <sstream>

#include "facefuse/errors.hpp"

namespace facefuse {

namespace {

struct Cursor {
    const std::string& bytes;
    std::size_t pos = 0;

    bool eof() const { return pos >= bytes.size(); }
    char peek() const { return bytes[pos]; }
};

bool is_pgm_space(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

// Skips whitespace and '#' comments (comment runs to end of line).
void skip_separators(Cursor& cur) {
    while (!cur.eof()) {
        if (is_pgm_space(cur.peek())) {
            ++cur.pos;
        } else if (cur.peek() == '#') {
            while (!cur.eof() && cur.peek() != '\n') ++cur.pos;
        } else {
            break;
        }
    }
}

// Reads a nonnegative decimal header field, or throws naming it.
std::uint64_t read_header_field(Cursor& cur, const char* field) {
    skip_separators(cur);
    if (cur.eof() || !std::isdigit(static_cast<unsigned char>(cur.peek()))) {
        std::ostringstream msg;
        msg << "malformed PGM header: missing field '" << field << "' at byte offset "
            << cur.pos;
        throw ImageIoError(ImageIoErrc::malformed_header, msg.str());
    }
    std::uint64_t value = 0;
    while (!cur.eof() && std::isdigit(static_cast<unsigned char>(cur.peek()))) {
        value = value * 10 + static_cast<std::uint64_t>(cur.peek() - '0');
        if (value > 10'000'000) break;  // header fields never get this large
        ++cur.pos;
    }
    return value;
}

}  // namespace

GrayImage load_image(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ImageIoError(ImageIoErrc::missing_file,
                           "cannot open image file '" + path.string() + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string bytes = buf.str();
    Cursor cur{bytes};

    if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '2' && bytes[1] != '5')) {
        const std::string magic = bytes.substr(0, std::min<std::size_t>(2, bytes.size()));
        throw ImageIoError(ImageIoErrc::unsupported_format,
                           "unsupported PGM magic '" + magic + "' (expected P2 or P5)");
    }
    const bool binary = bytes[1] == '5';
    cur.pos = 2;

    const std::uint64_t width = read_header_field(cur, "width");
    const std::uint64_t height = read_header_field(cur, "height");
    const std::uint64_t maxval = read_header_field(cur, "maxval");
    if (width == 0 || height == 0) {
        throw ImageIoError(ImageIoErrc::malformed_header,
                           "malformed PGM header: zero width or height");
    }
    if (maxval == 0 || maxval > 65535) {
        std::ostringstream msg;
        msg << "malformed PGM header: field 'maxval' is " << maxval
            << " (must be in [1,65535])";
        throw ImageIoError(ImageIoErrc::malformed_header, msg.str());
    }

    GrayImage img(static_cast<std::size_t>(height), static_cast<std::size_t>(width));
    const double scale = 1.0 / static_cast<double>(maxval);
    const std::size_t n = img.size();

    if (binary) {
        // exactly one whitespace byte separates maxval from the raster
        if (cur.eof() || !is_pgm_space(cur.peek())) {
            std::ostringstream msg;
            msg << "malformed PGM header: expected whitespace before raster at byte offset "
                << cur.pos;
            throw ImageIoError(ImageIoErrc::malformed_header, msg.str());
        }
        ++cur.pos;
        const std::size_t bytes_per_sample = maxval > 255 ? 2 : 1;
        const std::size_t need = n * bytes_per_sample;
        if (bytes.size() - cur.pos < need) {
            std::ostringstream msg;
            msg << "truncated PGM raster: expected " << need << " bytes, found "
                << (bytes.size() - cur.pos) << " (raster starts at byte offset " << cur.pos
                << ")";
            throw ImageIoError(ImageIoErrc::truncated_data, msg.str());
        }
        for (std::size_t i = 0; i < n; ++i) {
            std::uint32_t raw;
            if (bytes_per_sample == 1) {
                raw = static_cast<std::uint8_t>(bytes[cur.pos + i]);
            } else {
                raw = (static_cast<std::uint32_t>(static_cast<std::uint8_t>(
                           bytes[cur.pos + 2 * i]))
                       << 8) |
                      static_cast<std::uint8_t>(bytes[cur.pos + 2 * i + 1]);
            }
            if (raw > maxval) {
                std::ostringstream msg;
                msg << "PGM sample " << raw << " exceeds maxval " << maxval
                    << " at byte offset " << (cur.pos + i * bytes_per_sample);
                throw ImageIoError(ImageIoErrc::invalid_sample, msg.str());
            }
            img.values[i] = raw * scale;
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            skip_separators(cur);
            if (cur.eof() || !std::isdigit(static_cast<unsigned char>(cur.peek()))) {
                std::ostringstream msg;
                msg << "truncated PGM raster: expected " << n << " samples, found " << i
                    << " (at byte offset " << cur.pos << ")";
                throw ImageIoError(ImageIoErrc::truncated_data, msg.str());
            }
            const std::size_t sample_offset = cur.pos;
            std::uint64_t raw = 0;
            while (!cur.eof() && std::isdigit(static_cast<unsigned char>(cur.peek()))) {
                raw = raw * 10 + static_cast<std::uint64_t>(cur.peek() - '0');
                ++cur.pos;
            }
            if (raw > maxval) {
                std::ostringstream msg;
                msg << "PGM sample " << raw << " exceeds maxval " << maxval
                    << " at byte offset " << sample_offset;
                throw ImageIoError(ImageIoErrc::invalid_sample, msg.str());
            }
            img.values[i] = static_cast<double>(raw) * scale;
        }
    }
    return img;
}

void save_image(const GrayImage& image, const std::filesystem::path& path) {
    if (image.rows == 0 || image.cols == 0) {
        throw std::invalid_argument("save_image: empty image");
    }
    for (double p : image.values) {
        if (!std::isfinite(p)) {
            throw std::invalid_argument("save_image: image contains non-finite pixels");
        }
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ImageIoError(ImageIoErrc::unwritable_path,
                           "cannot write image file '" + path.string() + "'");
    }
    out << "P5\n" << image.cols << " " << image.rows << "\n255\n";
    std::string raster(image.size(), '\0');
    for (std::size_t i = 0; i < image.size(); ++i) {
        const double clamped = std::clamp(image.values[i], 0.0, 1.0);
        raster[i] = static_cast<char>(
            static_cast<unsigned char>(std::lround(clamped * 255.0)));
    }
    out.write(raster.data(), static_cast<std::streamsize>(raster.size()));
    if (!out) {
        throw ImageIoError(ImageIoErrc::unwritable_path,
                           "failed writing image file '" + path.string() + "'");
    }
}

namespace {

GrayImage crop_center(const GrayImage& img, std::size_t rows, std::size_t cols) {
    // upper-left bias: floor the leading margin on odd remainders
    const std::size_t r0 = (img.rows - rows) / 2;
    const std::size_t c0 = (img.cols - cols) / 2;
    GrayImage out(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            out(r, c) = img(r0 + r, c0 + c);
        }
    }
    return out;
}

}  // namespace

std::pair<GrayImage, GrayImage> conform_pair(const GrayImage& a, const GrayImage& b,
                                             ConformPolicy policy) {
    if (policy == ConformPolicy::strict) {
        if (!a.same_dims(b)) {
            std::ostringstream msg;
            msg << "dimension mismatch: " << a.rows << "x" << a.cols << " vs " << b.rows
                << "x" << b.cols;
            throw DimensionError(msg.str());
        }
        return {a, b};
    }
    const std::size_t rows = std::min(a.rows, b.rows);
    const std::size_t cols = std::min(a.cols, b.cols);
    return {crop_center(a, rows, cols), crop_center(b, rows, cols)};
}

std::vector<double> vectorize(const GrayImage& image) { return image.values; }

GrayImage devectorize(const std::vector<double>& vec, std::size_t rows, std::size_t cols) {
    if (vec.size() != rows * cols) {
        std::ostringstream msg;
        msg << "devectorize: vector length " << vec.size() << " != " << rows << "x" << cols;
        throw DimensionError(msg.str());
    }
    GrayImage img(rows, cols);
    img.values = vec;
    return img;
}

GrayImage to_unit_range(const GrayImage& image) {
    const auto [lo_it, hi_it] = std::minmax_element(image.values.begin(), image.values.end());
    const double lo = *lo_it, hi = *hi_it;
    GrayImage out(image.rows, image.cols);
    if (hi - lo <= 0.0) {
        std::fill(out.values.begin(), out.values.end(), 0.5);
        return out;
    }
    const double inv = 1.0 / (hi - lo);
    for (std::size_t i = 0; i < image.size(); ++i) {
        out.values[i] = (image.values[i] - lo) * inv;
    }
    return out;
}

}  // namespace facefuse
