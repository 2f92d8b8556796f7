#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "facefuse/errors.hpp"
#include "facefuse/image.hpp"

using namespace facefuse;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "facefuse_test";
    fs::create_directories(dir);
    return dir / name;
}

fs::path write_bytes(const std::string& name, const std::string& bytes) {
    const fs::path p = temp_file(name);
    std::ofstream out(p, std::ios::binary);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    return p;
}

GrayImage random_image(std::size_t rows, std::size_t cols, std::uint32_t seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    GrayImage img(rows, cols);
    for (double& p : img.values) p = dist(rng);
    return img;
}

}  // namespace

TEST_SUITE("imagery") {

TEST_CASE("P2 single pixel normalizes by maxval") {
    const fs::path p = write_bytes("one.pgm", "P2\n1 1\n255\n255\n");
    const GrayImage img = load_image(p);
    CHECK(img.rows == 1);
    CHECK(img.cols == 1);
    CHECK(img.values[0] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("P5 bytes scale to unit range") {
    std::string data = "P5\n2 2\n255\n";
    data += '\x00';
    data += '\xff';
    data += '\x00';
    data += '\xff';
    const GrayImage img = load_image(write_bytes("quad.pgm", data));
    CHECK(img.values == std::vector<double>{0.0, 1.0, 0.0, 1.0});
}

TEST_CASE("P5 sixteen-bit samples are big-endian") {
    std::string data = "P5\n1 1\n65535\n";
    data += '\x80';
    data += '\x00';
    const GrayImage img = load_image(write_bytes("deep.pgm", data));
    CHECK(img.values[0] == doctest::Approx(32768.0 / 65535.0).epsilon(1e-12));
}

TEST_CASE("header comments are skipped") {
    const fs::path p = write_bytes("comment.pgm", "P2\n# a comment\n2 1 # inline\n255\n7 9\n");
    const GrayImage img = load_image(p);
    CHECK(img.cols == 2);
    CHECK(img.values[0] == doctest::Approx(7.0 / 255.0));
}

TEST_CASE("unsupported magic is rejected") {
    const fs::path p = write_bytes("p7.pgm", "P7\n1 1\n255\n0\n");
    try {
        load_image(p);
        FAIL("expected ImageIoError");
    } catch (const ImageIoError& e) {
        CHECK(e.code() == ImageIoErrc::unsupported_format);
        CHECK(std::string(e.what()).find("P7") != std::string::npos);
    }
}

TEST_CASE("missing file is a distinct error") {
    try {
        load_image(temp_file("does_not_exist.pgm"));
        FAIL("expected ImageIoError");
    } catch (const ImageIoError& e) {
        CHECK(e.code() == ImageIoErrc::missing_file);
    }
}

TEST_CASE("malformed header names the missing field") {
    const fs::path p = write_bytes("nomax.pgm", "P2\n2 2\n");
    try {
        load_image(p);
        FAIL("expected ImageIoError");
    } catch (const ImageIoError& e) {
        CHECK(e.code() == ImageIoErrc::malformed_header);
        CHECK(std::string(e.what()).find("maxval") != std::string::npos);
    }
}

TEST_CASE("truncated raster names the byte offset") {
    std::string data = "P5\n2 2\n255\n";
    data += '\x01';  // 1 of 4 bytes
    try {
        load_image(write_bytes("short.pgm", data));
        FAIL("expected ImageIoError");
    } catch (const ImageIoError& e) {
        CHECK(e.code() == ImageIoErrc::truncated_data);
        CHECK(std::string(e.what()).find("byte offset") != std::string::npos);
    }
}

TEST_CASE("ascii sample above maxval is rejected") {
    const fs::path p = write_bytes("overflow.pgm", "P2\n1 1\n255\n300\n");
    try {
        load_image(p);
        FAIL("expected ImageIoError");
    } catch (const ImageIoError& e) {
        CHECK(e.code() == ImageIoErrc::invalid_sample);
    }
}

TEST_CASE("save clamps and scales to bytes") {
    GrayImage img(1, 1);

    SUBCASE("full intensity becomes byte 255") {
        img.values[0] = 1.0;
        const fs::path p = temp_file("white.pgm");
        save_image(img, p);
        std::ifstream in(p, std::ios::binary);
        std::string bytes((std::istreambuf_iterator<char>(in)),
                          std::istreambuf_iterator<char>());
        CHECK(static_cast<unsigned char>(bytes.back()) == 255);
    }
    SUBCASE("negative pixel clamps to byte 0") {
        img.values[0] = -0.3;
        const fs::path p = temp_file("black.pgm");
        save_image(img, p);
        std::ifstream in(p, std::ios::binary);
        std::string bytes((std::istreambuf_iterator<char>(in)),
                          std::istreambuf_iterator<char>());
        CHECK(static_cast<unsigned char>(bytes.back()) == 0);
    }
}

TEST_CASE("save/load round trip stays within one quantization step") {
    const GrayImage img = random_image(8, 8, 42);
    const fs::path p = temp_file("roundtrip.pgm");
    save_image(img, p);
    const GrayImage back = load_image(p);
    REQUIRE(back.same_dims(img));
    for (std::size_t i = 0; i < img.size(); ++i) {
        CHECK(std::abs(back.values[i] - img.values[i]) <= 1.0 / 255.0);
    }
}

TEST_CASE("unwritable path raises") {
    GrayImage img(1, 1, 0.5);
    CHECK_THROWS_AS(save_image(img, "/nonexistent_dir_xyz/out.pgm"), ImageIoError);
}

TEST_CASE("conform strict keeps equal images, rejects unequal") {
    const GrayImage a = random_image(4, 4, 1);
    const GrayImage b = random_image(4, 4, 2);
    const auto [ca, cb] = conform_pair(a, b, ConformPolicy::strict);
    CHECK(ca.values == a.values);
    CHECK(cb.values == b.values);

    const GrayImage wide = random_image(4, 6, 3);
    CHECK_THROWS_AS(conform_pair(wide, b, ConformPolicy::strict), DimensionError);
}

TEST_CASE("center crop trims symmetrically") {
    GrayImage wide(4, 6);
    for (std::size_t i = 0; i < wide.size(); ++i) wide.values[i] = static_cast<double>(i);
    const GrayImage square = random_image(4, 4, 4);
    const auto [cw, cs] = conform_pair(wide, square, ConformPolicy::center_crop);
    CHECK(cw.rows == 4);
    CHECK(cw.cols == 4);
    CHECK(cs.values == square.values);
    // wider image loses columns 0 and 5
    for (std::size_t r = 0; r < 4; ++r) {
        for (std::size_t c = 0; c < 4; ++c) {
            CHECK(cw(r, c) == wide(r, c + 1));
        }
    }
}

TEST_CASE("center crop upper-left bias on odd remainders") {
    GrayImage tall(5, 3);
    for (std::size_t i = 0; i < tall.size(); ++i) tall.values[i] = static_cast<double>(i);
    const GrayImage small = random_image(4, 3, 5);
    const auto [ct, cs] = conform_pair(tall, small, ConformPolicy::center_crop);
    CHECK(ct.rows == 4);
    // rows 0..3 kept, row 4 dropped
    CHECK(ct(0, 0) == tall(0, 0));
    CHECK(ct(3, 2) == tall(3, 2));
}

TEST_CASE("vectorize layout and inverse") {
    GrayImage img(2, 2);
    img.values = {1.5, 2.5, 3.5, 4.5};
    CHECK(vectorize(img) == std::vector<double>{1.5, 2.5, 3.5, 4.5});

    CHECK_THROWS_AS(devectorize({1.0, 2.0, 3.0}, 2, 2), DimensionError);

    const GrayImage orig = random_image(3, 5, 6);
    const GrayImage back = devectorize(vectorize(orig), 3, 5);
    CHECK(back.values == orig.values);  // bit-identical
    CHECK(back.rows == orig.rows);
    CHECK(back.cols == orig.cols);
}

TEST_CASE("to_unit_range rescales and handles flat images") {
    GrayImage img(1, 3);
    img.values = {-1.0, 0.0, 3.0};
    const GrayImage scaled = to_unit_range(img);
    CHECK(scaled.values[0] == 0.0);
    CHECK(scaled.values[2] == 1.0);
    CHECK(scaled.values[1] == doctest::Approx(0.25));

    const GrayImage flat = to_unit_range(GrayImage(2, 2, 0.7));
    for (double p : flat.values) CHECK(p == 0.5);
}

}  // TEST_SUITE
