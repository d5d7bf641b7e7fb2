#pragma once

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <thread>
#include <vector>

#include "weft/image.hpp"
#include "weft/scene.hpp"

namespace weft {

struct ResolutionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr int kMapEncodingVersion = 1;

// Baked tileable raster maps in the shared surface frame, one query per
// pixel center. Heights stay in float; the 16-bit PNG encoding normalizes by
// the (height_min, height_max) recorded in the sidecar.
struct MapSet {
    int resolution = 0;
    std::vector<float> normal;       // 3 channels per pixel
    std::vector<float> orientation;  // 3 channels per pixel
    std::vector<float> height;       // 1 channel per pixel
    std::vector<std::uint8_t> coverage;  // packed flags, see coverage_index
    double height_min = 0.0;
    double height_max = 0.0;
    std::uint64_t scene_hash = 0;
    std::uint64_t seed = 0;
};

// Coverage/ID byte: bit 0 covered, bit 1 warp, bit 2 lower layer,
// bits 3..6 ply index.
inline std::uint8_t coverage_index(const SurfaceSample& s) {
    std::uint8_t b = 0;
    if (s.covered) b |= 1;
    if (s.kind == YarnKind::warp) b |= 2;
    if (s.lower_layer) b |= 4;
    if (s.covered && s.ply > 0) b |= static_cast<std::uint8_t>((s.ply & 0xF) << 3);
    return b;
}

namespace detail {

struct HashStream {
    std::uint64_t h = kFnvBasis;
    void add(std::uint64_t v) { h = fnv1a(h, &v, sizeof(v)); }
    void add(double v) { add(std::bit_cast<std::uint64_t>(v)); }
    void add(int v) { add(static_cast<std::uint64_t>(v)); }
    void add_bytes(const void* p, size_t n) { h = fnv1a(h, p, n); }
};

inline void hash_yarn(HashStream& hs, const YarnParams& p) {
    hs.add(p.max_inclination);
    hs.add(p.arc_radius);
    hs.add(p.ply_orbit);
    hs.add(p.ply_radius);
    hs.add(p.twist_rate);
    hs.add(p.fiber_twist);
    hs.add(p.ply_count);
    hs.add(static_cast<int>(p.phases.size()));
    for (double ph : p.phases) hs.add(ph);
    hs.add(p.width);
}

}  // namespace detail

inline std::uint64_t scene_hash(const FabricScene& scene) {
    detail::HashStream hs;
    hs.add_bytes("weft.scene.v1", 13);
    hs.add(scene.draft.rows);
    hs.add(scene.draft.cols);
    hs.add_bytes(scene.draft.cells.data(), scene.draft.cells.size());
    detail::hash_yarn(hs, scene.warp);
    detail::hash_yarn(hs, scene.weft);
    for (const SlidingParams* sp : {&scene.warp_slide, &scene.weft_slide}) {
        hs.add(sp->strength);
        hs.add(sp->frequency);
        hs.add(sp->noise.seed);
    }
    hs.add(scene.flyaway.density_threshold);
    hs.add(scene.flyaway.vertical_scale);
    hs.add(scene.flyaway.intensity);
    hs.add(scene.flyaway.frequency);
    hs.add(scene.flyaway.position_noise.seed);
    hs.add(scene.flyaway.vertical_noise.seed);
    hs.add(scene.repeat);
    hs.add(scene.seed);
    hs.add(scene.floor_height);
    return hs.h;
}

struct BakeOptions {
    int threads = 0;           // 0 = hardware concurrency
    bool supersample = false;  // 4x rotated-grid average; widens the tiling
                               // tolerance from 1 LSB to 2 LSB
};

namespace detail {

template <typename Fn>
inline void parallel_rows(int rows, int threads, Fn&& fn) {
    if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads < 1) threads = 1;
    if (threads == 1) {
        for (int y = 0; y < rows; ++y) fn(y);
        return;
    }
    std::atomic<int> next{0};
    auto worker = [&] {
        for (int y = next.fetch_add(1); y < rows; y = next.fetch_add(1)) fn(y);
    };
    std::vector<std::thread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

}  // namespace detail

inline MapSet bake_maps(const FabricScene& scene, int resolution, const BakeOptions& opts = {}) {
    const int min_res = scene.repeat * std::max(scene.draft.rows, scene.draft.cols);
    if (resolution < min_res)
        throw ResolutionError("resolution " + std::to_string(resolution) +
                              " is below the repeat size " + std::to_string(min_res));
    if (resolution <= 0 || (resolution & (resolution - 1)) != 0)
        throw ResolutionError("resolution must be a power of two");
    if (resolution % scene.repeat != 0)
        throw ResolutionError("repeat count must divide the resolution for tileable output");

    MapSet m;
    m.resolution = resolution;
    const size_t px_count = static_cast<size_t>(resolution) * resolution;
    m.normal.resize(px_count * 3);
    m.orientation.resize(px_count * 3);
    m.height.resize(px_count);
    m.coverage.resize(px_count);
    m.seed = scene.seed;
    m.scene_hash = scene_hash(scene);

    const double inv = 1.0 / resolution;
    detail::parallel_rows(resolution, opts.threads, [&](int py) {
        for (int px = 0; px < resolution; ++px) {
            const size_t idx = static_cast<size_t>(py) * resolution + px;
            Vec3 n{}, t{};
            double h = 0.0;
            SurfaceSample center = query_point((px + 0.5) * inv, (py + 0.5) * inv, scene);
            if (opts.supersample) {
                for (double dy : {0.25, 0.75}) {
                    for (double dx : {0.25, 0.75}) {
                        const auto s = query_point((px + dx) * inv, (py + dy) * inv, scene);
                        n = n + s.normal * 0.25;
                        t = t + s.orientation * 0.25;
                        h += s.height * 0.25;
                    }
                }
            } else {
                n = center.normal;
                t = center.orientation;
                h = center.height;
            }
            m.normal[idx * 3 + 0] = static_cast<float>(n.x);
            m.normal[idx * 3 + 1] = static_cast<float>(n.y);
            m.normal[idx * 3 + 2] = static_cast<float>(n.z);
            m.orientation[idx * 3 + 0] = static_cast<float>(t.x);
            m.orientation[idx * 3 + 1] = static_cast<float>(t.y);
            m.orientation[idx * 3 + 2] = static_cast<float>(t.z);
            m.height[idx] = static_cast<float>(h);
            m.coverage[idx] = coverage_index(center);
        }
    });

    const auto [lo, hi] = std::minmax_element(m.height.begin(), m.height.end());
    m.height_min = *lo;
    m.height_max = *hi;
    return m;
}

inline std::uint8_t encode_snorm8(float v) {
    const float e = (v * 0.5f + 0.5f) * 255.0f;
    const int r = static_cast<int>(std::lround(e));
    return static_cast<std::uint8_t>(std::clamp(r, 0, 255));
}

inline float decode_snorm8(std::uint8_t b) { return static_cast<float>(b) / 255.0f * 2.0f - 1.0f; }

// Deterministic palette: index 0 black, others hashed to distinct colors.
inline Palette coverage_palette() {
    Palette pal(128);
    pal[0] = {0, 0, 0};
    for (size_t i = 1; i < pal.size(); ++i) {
        const std::uint64_t h = detail::splitmix64(0xC0FFEEull + i);
        pal[i] = {static_cast<std::uint8_t>(64 + (h & 0xBF)),
                  static_cast<std::uint8_t>(64 + ((h >> 8) & 0xBF)),
                  static_cast<std::uint8_t>(64 + ((h >> 16) & 0xBF))};
    }
    return pal;
}

struct ManifestEntry {
    std::string path;  // relative to the output directory
    std::uint32_t crc32 = 0;
};

struct Manifest {
    std::vector<ManifestEntry> files;
};

inline const char* kNormalMapFile = "normal.png";
inline const char* kOrientationMapFile = "orientation.png";
inline const char* kHeightPngFile = "height.png";
inline const char* kHeightPfmFile = "height.pfm";
inline const char* kCoverageMapFile = "coverage.png";
inline const char* kSidecarFile = "sidecar.json";
inline const char* kManifestFile = "manifest.json";

inline Manifest write_maps(const MapSet& m, const std::string& directory) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(directory, ec);
    if (ec) throw IoError("cannot create output directory " + directory);
    const auto join = [&](const char* name) { return (fs::path(directory) / name).string(); };

    const int res = m.resolution;
    const size_t px_count = static_cast<size_t>(res) * res;

    std::vector<std::uint8_t> rgb(px_count * 3);
    for (size_t i = 0; i < px_count * 3; ++i) rgb[i] = encode_snorm8(m.normal[i]);
    write_png_rgb8(join(kNormalMapFile), res, res, rgb.data());
    for (size_t i = 0; i < px_count * 3; ++i) rgb[i] = encode_snorm8(m.orientation[i]);
    write_png_rgb8(join(kOrientationMapFile), res, res, rgb.data());

    std::vector<std::uint16_t> gray(px_count, 0);
    const double span = m.height_max - m.height_min;
    if (span > 0.0) {
        for (size_t i = 0; i < px_count; ++i) {
            const double x = (m.height[i] - m.height_min) / span;
            gray[i] = static_cast<std::uint16_t>(
                std::clamp<long>(std::lround(x * 65535.0), 0, 65535));
        }
    }
    write_png_gray16(join(kHeightPngFile), res, res, gray.data());
    write_pfm_gray(join(kHeightPfmFile), res, res, m.height.data());
    write_png_indexed(join(kCoverageMapFile), res, res, m.coverage.data(), coverage_palette());

    char hash_hex[17];
    std::snprintf(hash_hex, sizeof(hash_hex), "%016llx",
                  static_cast<unsigned long long>(m.scene_hash));
    nlohmann::json sidecar = {
        {"encoding_version", kMapEncodingVersion},
        {"resolution", res},
        {"height_min", m.height_min},
        {"height_max", m.height_max},
        {"seed", m.seed},
        {"scene_hash", hash_hex},
    };
    {
        std::ofstream out(join(kSidecarFile));
        if (!out) throw IoError("cannot write sidecar");
        out << sidecar.dump(2) << "\n";
    }

    Manifest manifest;
    for (const char* name : {kNormalMapFile, kOrientationMapFile, kHeightPngFile, kHeightPfmFile,
                             kCoverageMapFile, kSidecarFile}) {
        manifest.files.push_back({name, crc32_of_file(join(name))});
    }
    nlohmann::json mj;
    mj["files"] = nlohmann::json::array();
    for (const auto& e : manifest.files) {
        char crc_hex[9];
        std::snprintf(crc_hex, sizeof(crc_hex), "%08x", e.crc32);
        mj["files"].push_back({{"path", e.path}, {"crc32", crc_hex}});
    }
    {
        std::ofstream out(join(kManifestFile));
        if (!out) throw IoError("cannot write manifest");
        out << mj.dump(2) << "\n";
    }
    return manifest;
}

inline MapSet read_maps(const std::string& directory) {
    namespace fs = std::filesystem;
    const auto join = [&](const std::string& name) { return (fs::path(directory) / name).string(); };

    // The manifest gates the read: every listed file must exist and checksum.
    nlohmann::json manifest;
    {
        std::ifstream in(join(kManifestFile));
        if (!in) throw FormatError("missing manifest: " + join(kManifestFile));
        try {
            in >> manifest;
        } catch (const nlohmann::json::exception& e) {
            throw FormatError(std::string("corrupt manifest: ") + e.what());
        }
    }
    try {
        for (const auto& entry : manifest.at("files")) {
            const std::string rel = entry.at("path").get<std::string>();
            const std::uint32_t want =
                static_cast<std::uint32_t>(std::stoul(entry.at("crc32").get<std::string>(), nullptr, 16));
            if (!fs::exists(join(rel))) throw FormatError("manifest incomplete, missing " + rel);
            if (crc32_of_file(join(rel)) != want)
                throw FormatError("checksum mismatch on " + rel);
        }
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("malformed manifest: ") + e.what());
    } catch (const std::invalid_argument&) {
        throw FormatError("malformed manifest checksum");
    }

    nlohmann::json sidecar;
    {
        std::ifstream in(join(kSidecarFile));
        if (!in) throw FormatError("missing sidecar: " + join(kSidecarFile));
        try {
            in >> sidecar;
        } catch (const nlohmann::json::exception& e) {
            throw FormatError(std::string("corrupt sidecar: ") + e.what());
        }
    }
    if (!sidecar.contains("encoding_version") ||
        sidecar["encoding_version"].get<int>() != kMapEncodingVersion)
        throw FormatError("sidecar encoding_version mismatch");
    for (const char* key : {"height_min", "height_max", "seed", "scene_hash", "resolution"})
        if (!sidecar.contains(key)) throw FormatError(std::string("sidecar missing key ") + key);

    MapSet m;
    try {
        m.resolution = sidecar["resolution"].get<int>();
        m.height_min = sidecar["height_min"].get<double>();
        m.height_max = sidecar["height_max"].get<double>();
        m.seed = sidecar["seed"].get<std::uint64_t>();
        m.scene_hash = std::stoull(sidecar["scene_hash"].get<std::string>(), nullptr, 16);
    } catch (const std::exception& e) {
        throw FormatError(std::string("malformed sidecar: ") + e.what());
    }

    const auto normal = read_png_rgb8(join(kNormalMapFile));
    const auto orientation = read_png_rgb8(join(kOrientationMapFile));
    const auto pfm = read_pfm_gray(join(kHeightPfmFile));
    const auto coverage = read_png_indexed(join(kCoverageMapFile));
    const size_t px_count = static_cast<size_t>(m.resolution) * m.resolution;
    if (normal.width != m.resolution || normal.height != m.resolution ||
        orientation.width != m.resolution || pfm.width != m.resolution ||
        coverage.width != m.resolution)
        throw FormatError("map dimensions disagree with the sidecar");

    m.normal.resize(px_count * 3);
    m.orientation.resize(px_count * 3);
    for (size_t i = 0; i < px_count * 3; ++i) {
        m.normal[i] = decode_snorm8(normal.rgb[i]);
        m.orientation[i] = decode_snorm8(orientation.rgb[i]);
    }
    m.height = pfm.data;
    m.coverage = coverage.indices;
    return m;
}

}  // namespace weft
