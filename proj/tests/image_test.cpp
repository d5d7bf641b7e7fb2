#include "weft/image.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <random>

namespace {

using namespace weft;

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

TEST(Png, Rgb8RoundTrip) {
    const int w = 17, h = 9;
    std::vector<std::uint8_t> rgb(static_cast<size_t>(w) * h * 3);
    std::mt19937 rng(1);
    for (auto& b : rgb) b = static_cast<std::uint8_t>(rng());
    const auto path = temp_path("weft_rgb8.png");
    write_png_rgb8(path, w, h, rgb.data());
    const auto back = read_png_rgb8(path);
    EXPECT_EQ(back.width, w);
    EXPECT_EQ(back.height, h);
    EXPECT_EQ(back.rgb, rgb);
    std::remove(path.c_str());
}

TEST(Png, Gray16RoundTrip) {
    const int w = 8, h = 5;
    std::vector<std::uint16_t> gray(static_cast<size_t>(w) * h);
    std::mt19937 rng(2);
    for (auto& g : gray) g = static_cast<std::uint16_t>(rng());
    gray[0] = 0;
    gray[1] = 65535;
    const auto path = temp_path("weft_gray16.png");
    write_png_gray16(path, w, h, gray.data());
    const auto back = read_png_gray16(path);
    EXPECT_EQ(back.gray, gray);
    std::remove(path.c_str());
}

TEST(Png, IndexedRoundTrip) {
    const int w = 12, h = 7;
    std::vector<std::uint8_t> idx(static_cast<size_t>(w) * h);
    std::mt19937 rng(3);
    for (auto& b : idx) b = static_cast<std::uint8_t>(rng() % 64);
    Palette pal(64);
    for (size_t i = 0; i < pal.size(); ++i)
        pal[i] = {static_cast<std::uint8_t>(i), static_cast<std::uint8_t>(i * 3),
                  static_cast<std::uint8_t>(255 - i)};
    const auto path = temp_path("weft_indexed.png");
    write_png_indexed(path, w, h, idx.data(), pal);
    const auto back = read_png_indexed(path);
    EXPECT_EQ(back.indices, idx);
    ASSERT_GE(back.palette.size(), pal.size());
    for (size_t i = 0; i < pal.size(); ++i) EXPECT_EQ(back.palette[i], pal[i]);
    std::remove(path.c_str());
}

TEST(Png, FlexibleReaderHandlesGrayAndRgb) {
    const auto path = temp_path("weft_flex.png");
    std::vector<std::uint8_t> rgb = {0, 128, 255, 10, 20, 30};
    write_png_rgb8(path, 2, 1, rgb.data());
    const auto dec = read_png_any_rgb(path);
    EXPECT_EQ(dec.width, 2);
    EXPECT_EQ(dec.bit_depth, 8);
    EXPECT_NEAR(dec.rgb[0], 0.0f, 1e-6f);
    EXPECT_NEAR(dec.rgb[2], 1.0f, 1e-6f);

    std::vector<std::uint16_t> gray = {0, 65535, 32768, 1000, 2000, 3000};
    write_png_gray16(path, 3, 2, gray.data());
    const auto dec16 = read_png_any_rgb(path);
    EXPECT_EQ(dec16.bit_depth, 16);
    EXPECT_EQ(dec16.width, 3);
    EXPECT_NEAR(dec16.rgb[0], 0.0f, 1e-7f);
    EXPECT_NEAR(dec16.rgb[3], 1.0f, 1e-7f);  // gray expanded to rgb
    EXPECT_NEAR(dec16.rgb[4], 1.0f, 1e-7f);
    std::remove(path.c_str());
}

TEST(Png, ReaderRejectsGarbage) {
    const auto path = temp_path("weft_not_a_png.png");
    {
        std::ofstream out(path);
        out << "this is not a png";
    }
    EXPECT_THROW(read_png_rgb8(path), FormatError);
    EXPECT_THROW(read_png_any_rgb(path), FormatError);
    std::remove(path.c_str());
    EXPECT_THROW(read_png_rgb8(path), IoError);  // now missing entirely
}

TEST(Pfm, BitwiseRoundTrip) {
    const int w = 33, h = 21;
    std::vector<float> data(static_cast<size_t>(w) * h);
    std::mt19937 rng(4);
    std::uniform_real_distribution<float> u(-10.0f, 10.0f);
    for (auto& f : data) f = u(rng);
    data[5] = 0.0f;
    data[6] = -0.0f;
    const auto path = temp_path("weft_height.pfm");
    write_pfm_gray(path, w, h, data.data());
    const auto back = read_pfm_gray(path);
    EXPECT_EQ(back.width, w);
    EXPECT_EQ(back.height, h);
    ASSERT_EQ(back.data.size(), data.size());
    for (size_t i = 0; i < data.size(); ++i) {
        EXPECT_EQ(std::memcmp(&back.data[i], &data[i], sizeof(float)), 0) << i;
    }
    std::remove(path.c_str());
}

TEST(Pfm, RejectsWrongMagic) {
    const auto path = temp_path("weft_bad.pfm");
    {
        std::ofstream out(path);
        out << "PF\n2 2\n-1.0\n";  // color PFM, not grayscale
    }
    EXPECT_THROW(read_pfm_gray(path), FormatError);
    std::remove(path.c_str());
}

TEST(Crc32, StableAndSensitive) {
    const auto path = temp_path("weft_crc.bin");
    {
        std::ofstream out(path, std::ios::binary);
        out << "abc123";
    }
    const auto a = crc32_of_file(path);
    EXPECT_EQ(a, crc32_of_file(path));
    {
        std::ofstream out(path, std::ios::binary);
        out << "abc124";
    }
    EXPECT_NE(a, crc32_of_file(path));
    std::remove(path.c_str());
}

}  // namespace
