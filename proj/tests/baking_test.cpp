#include "weft/baking.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

namespace {

using namespace weft;

YarnParams flat_strand() {
    YarnParams p;
    p.max_inclination = 0.6;
    p.arc_radius = 1.0;
    p.ply_orbit = 0.0;
    p.ply_radius = 0.3;
    p.twist_rate = 0.0;
    p.ply_count = 1;
    p.width = 0.9;
    return p;
}

FabricScene test_scene(double k_sliding = 0.0, double flyaway = 0.0, int repeat = 2,
                       std::uint64_t seed = 42) {
    IrregularitySpec irr;
    irr.k_sliding = k_sliding;
    irr.flyaway_intensity = flyaway;
    PatternSpec spec;
    spec.family = WeaveFamily::twill;
    YarnParams plied = flat_strand();
    plied.ply_orbit = 0.12;
    plied.ply_radius = 0.18;
    plied.twist_rate = 5.0;
    plied.ply_count = 2;
    return make_scene(generate_pattern(spec), plied, flat_strand(), irr, repeat, seed);
}

std::string temp_dir(const std::string& name) {
    auto p = std::filesystem::temp_directory_path() / name;
    std::filesystem::remove_all(p);
    return p.string();
}

TEST(BakeMaps, CellCenterNormalsEncodeToFlat) {
    // repeat 2 over a 2x2 draft at res 4: every pixel center is a cell
    // center, where u = v = 0 and the normal is straight up.
    IrregularitySpec irr;
    const auto scene = make_scene(generate_pattern({.family = WeaveFamily::plain}), flat_strand(),
                                  flat_strand(), irr, 2, 1);
    const auto maps = bake_maps(scene, 4);
    for (size_t px = 0; px < 16; ++px) {
        EXPECT_EQ(encode_snorm8(maps.normal[px * 3 + 0]), 128);
        EXPECT_EQ(encode_snorm8(maps.normal[px * 3 + 1]), 128);
        EXPECT_EQ(encode_snorm8(maps.normal[px * 3 + 2]), 255);
        EXPECT_FLOAT_EQ(maps.height[px],
                        static_cast<float>(scene.warp.arc_radius + scene.warp.ply_radius));
        EXPECT_TRUE(maps.coverage[px] & 1);
    }
}

TEST(BakeMaps, PeriodicAcrossRepeatTiles) {
    const auto scene = test_scene(0.25, 0.4);
    const auto maps = bake_maps(scene, 64);
    const int res = maps.resolution, step = res / scene.repeat;
    for (int y = 0; y < res; ++y) {
        for (int x = 0; x < res; ++x) {
            const size_t a = static_cast<size_t>(y) * res + x;
            const size_t b = static_cast<size_t>(y) * res + (x + step) % res;
            const size_t c = (static_cast<size_t>((y + step) % res)) * res + x;
            for (int ch = 0; ch < 3; ++ch) {
                EXPECT_EQ(maps.normal[a * 3 + ch], maps.normal[b * 3 + ch]);
                EXPECT_EQ(maps.normal[a * 3 + ch], maps.normal[c * 3 + ch]);
                EXPECT_EQ(maps.orientation[a * 3 + ch], maps.orientation[b * 3 + ch]);
            }
            EXPECT_EQ(maps.height[a], maps.height[b]);
            EXPECT_EQ(maps.height[a], maps.height[c]);
            EXPECT_EQ(maps.coverage[a], maps.coverage[b]);
            EXPECT_EQ(maps.coverage[a], maps.coverage[c]);
        }
    }
}

TEST(BakeMaps, ThreadCountDoesNotChangeResult) {
    const auto scene = test_scene(0.3, 0.5);
    BakeOptions one;
    one.threads = 1;
    BakeOptions eight;
    eight.threads = 8;
    const auto a = bake_maps(scene, 64, one);
    const auto b = bake_maps(scene, 64, eight);
    EXPECT_EQ(a.normal, b.normal);
    EXPECT_EQ(a.orientation, b.orientation);
    EXPECT_EQ(a.height, b.height);
    EXPECT_EQ(a.coverage, b.coverage);
    EXPECT_EQ(a.height_min, b.height_min);
    EXPECT_EQ(a.height_max, b.height_max);
    EXPECT_EQ(a.scene_hash, b.scene_hash);
}

TEST(BakeMaps, ResolutionValidation) {
    const auto scene = test_scene();
    EXPECT_THROW(bake_maps(scene, 3), ResolutionError);   // not a power of two, below repeat
    EXPECT_THROW(bake_maps(scene, 6), ResolutionError);   // not a power of two
    EXPECT_NO_THROW(bake_maps(scene, 8));
}

TEST(SceneHash, SensitiveToEveryParameter) {
    const auto base = scene_hash(test_scene());
    EXPECT_EQ(base, scene_hash(test_scene()));

    auto s1 = test_scene();
    s1.warp.ply_radius += 1e-9;
    EXPECT_NE(base, scene_hash(s1));

    auto s2 = test_scene();
    s2.weft.width = 0.8;
    EXPECT_NE(base, scene_hash(s2));

    EXPECT_NE(base, scene_hash(test_scene(0.1)));
    EXPECT_NE(base, scene_hash(test_scene(0.0, 0.2)));
    EXPECT_NE(base, scene_hash(test_scene(0.0, 0.0, 1)));
    EXPECT_NE(base, scene_hash(test_scene(0.0, 0.0, 2, 43)));

    auto s3 = test_scene();
    s3.draft.at(0, 0) ^= 1;
    EXPECT_NE(base, scene_hash(s3));
}

TEST(WriteReadMaps, RoundTrip) {
    const auto dir = temp_dir("weft_maps_roundtrip");
    const auto scene = test_scene(0.2, 0.3);
    const auto maps = bake_maps(scene, 32);
    const auto manifest = write_maps(maps, dir);
    EXPECT_EQ(manifest.files.size(), 6u);
    for (const auto& e : manifest.files)
        EXPECT_TRUE(std::filesystem::exists(std::filesystem::path(dir) / e.path)) << e.path;

    const auto back = read_maps(dir);
    EXPECT_EQ(back.resolution, maps.resolution);
    EXPECT_EQ(back.seed, maps.seed);
    EXPECT_EQ(back.scene_hash, maps.scene_hash);
    EXPECT_DOUBLE_EQ(back.height_min, maps.height_min);
    EXPECT_DOUBLE_EQ(back.height_max, maps.height_max);
    // PFM heights are bitwise exact.
    EXPECT_EQ(back.height, maps.height);
    EXPECT_EQ(back.coverage, maps.coverage);
    // 8-bit normals within one quantization step.
    for (size_t i = 0; i < maps.normal.size(); ++i) {
        EXPECT_NEAR(back.normal[i], maps.normal[i], 1.01 / 255.0 * 2.0);
        EXPECT_NEAR(back.orientation[i], maps.orientation[i], 1.01 / 255.0 * 2.0);
    }
    std::filesystem::remove_all(dir);
}

TEST(WriteReadMaps, HeightEndpointsHitSixteenBitRange) {
    const auto dir = temp_dir("weft_maps_endpoints");
    const auto scene = test_scene();
    const auto maps = bake_maps(scene, 16);
    write_maps(maps, dir);
    const auto png = read_png_gray16((std::filesystem::path(dir) / kHeightPngFile).string());
    std::uint16_t lo = 65535, hi = 0;
    for (auto g : png.gray) {
        lo = std::min(lo, g);
        hi = std::max(hi, g);
    }
    EXPECT_EQ(lo, 0);
    EXPECT_EQ(hi, 65535);
    std::filesystem::remove_all(dir);
}

TEST(WriteReadMaps, CorruptSidecarRejected) {
    const auto dir = temp_dir("weft_maps_corrupt");
    write_maps(bake_maps(test_scene(), 16), dir);
    {
        std::ofstream out(std::filesystem::path(dir) / kSidecarFile);
        out << "{ not json";
    }
    EXPECT_THROW(read_maps(dir), FormatError);
    std::filesystem::remove_all(dir);
    EXPECT_THROW(read_maps(dir), FormatError);  // missing entirely
}

TEST(WriteReadMaps, VersionMismatchRejected) {
    const auto dir = temp_dir("weft_maps_version");
    write_maps(bake_maps(test_scene(), 16), dir);
    const auto sidecar_path = (std::filesystem::path(dir) / kSidecarFile).string();
    nlohmann::json sidecar;
    {
        std::ifstream in(sidecar_path);
        in >> sidecar;
    }
    sidecar["encoding_version"] = 999;
    {
        std::ofstream out(sidecar_path);
        out << sidecar.dump();
    }
    // Refresh the manifest checksum so the version check itself fires.
    nlohmann::json manifest;
    const auto manifest_path = (std::filesystem::path(dir) / kManifestFile).string();
    {
        std::ifstream in(manifest_path);
        in >> manifest;
    }
    for (auto& e : manifest["files"]) {
        if (e["path"] == kSidecarFile) {
            char hex[9];
            std::snprintf(hex, sizeof(hex), "%08x", crc32_of_file(sidecar_path));
            e["crc32"] = hex;
        }
    }
    {
        std::ofstream out(manifest_path);
        out << manifest.dump();
    }
    EXPECT_THROW(read_maps(dir), FormatError);
    std::filesystem::remove_all(dir);
}

}  // namespace
