#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "weft/baking.hpp"
#include "weft/image.hpp"
#include "weft/scene.hpp"

namespace weft {

struct ShadingParams {
    double roughness = 0.35;        // in (0, 1]; the fiber lobe exponent is 2/roughness
    double specular = 0.4;          // k_s
    double diffuse = 0.6;           // k_d
    double flyaway_specular = 0.0;  // weight of the flyaway lobe
    Vec3 light_dir{0.35, 0.25, 0.9};
    Vec3 view_dir{0.0, 0.0, 1.0};
    double exposure = 1.0;
    Vec3 warp_tint{1.0, 1.0, 1.0};
    Vec3 weft_tint{1.0, 1.0, 1.0};
};

// RGB raster in linear light, repeat-wrapped on sampling.
struct AlbedoImage {
    int width = 0;
    int height = 0;
    std::vector<float> rgb;  // interleaved

    Vec3 sample_wrap(double u, double v) const {
        const double uu = u - std::floor(u);
        const double vv = v - std::floor(v);
        const int x = std::min(static_cast<int>(uu * width), width - 1);
        const int y = std::min(static_cast<int>(vv * height), height - 1);
        const size_t i = (static_cast<size_t>(y) * width + x) * 3;
        return {rgb[i], rgb[i + 1], rgb[i + 2]};
    }
};

inline double srgb_to_linear(double c) {
    return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
}

inline double linear_to_srgb(double c) {
    c = std::clamp(c, 0.0, 1.0);
    return c <= 0.0031308 ? 12.92 * c : 1.055 * std::pow(c, 1.0 / 2.4) - 0.055;
}

// Decode a PNG albedo. 8-bit inputs are treated as sRGB and linearized;
// 16-bit inputs are taken as already linear.
inline AlbedoImage load_albedo(const std::string& path) {
    const DecodedRgb decoded = read_png_any_rgb(path);
    AlbedoImage img;
    img.width = decoded.width;
    img.height = decoded.height;
    img.rgb.resize(decoded.rgb.size());
    if (decoded.bit_depth == 16) {
        img.rgb = decoded.rgb;
    } else {
        for (size_t i = 0; i < decoded.rgb.size(); ++i)
            img.rgb[i] = static_cast<float>(srgb_to_linear(decoded.rgb[i]));
    }
    return img;
}

// Procedural fallbacks, handy for tests and solid-color renders.
inline AlbedoImage albedo_solid(const Vec3& linear_rgb) {
    AlbedoImage img;
    img.width = img.height = 1;
    img.rgb = {static_cast<float>(linear_rgb.x), static_cast<float>(linear_rgb.y),
               static_cast<float>(linear_rgb.z)};
    return img;
}

inline AlbedoImage albedo_stripes(const Vec3& a, const Vec3& b, int period) {
    AlbedoImage img;
    img.width = period * 2;
    img.height = 1;
    img.rgb.resize(static_cast<size_t>(img.width) * 3);
    for (int x = 0; x < img.width; ++x) {
        const Vec3& c = (x / period) % 2 == 0 ? a : b;
        img.rgb[x * 3 + 0] = static_cast<float>(c.x);
        img.rgb[x * 3 + 1] = static_cast<float>(c.y);
        img.rgb[x * 3 + 2] = static_cast<float>(c.z);
    }
    return img;
}

inline AlbedoImage albedo_checks(const Vec3& a, const Vec3& b, int period) {
    AlbedoImage img;
    img.width = img.height = period * 2;
    img.rgb.resize(static_cast<size_t>(img.width) * img.height * 3);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            const Vec3& c = ((x / period + y / period) % 2 == 0) ? a : b;
            const size_t i = (static_cast<size_t>(y) * img.width + x) * 3;
            img.rgb[i] = static_cast<float>(c.x);
            img.rgb[i + 1] = static_cast<float>(c.y);
            img.rgb[i + 2] = static_cast<float>(c.z);
        }
    }
    return img;
}

// Fiber-anisotropic preview shading: diffuse from the surface normal plus a
// Kajiya-Kay-style lobe around the fiber orientation; the flyaway layer adds
// its own lobe where present. Gaps shade as a dimmed diffuse floor.
inline Vec3 shade(const SurfaceSample& s, const Vec3& albedo, const FlyawaySample& fly,
                  const ShadingParams& sp) {
    const Vec3 l = normalized(sp.light_dir);
    const Vec3 v = normalized(sp.view_dir);
    const Vec3 h = normalized(l + v);
    const double exponent = 2.0 / sp.roughness;

    Vec3 color{0.0, 0.0, 0.0};
    if (!s.covered) {
        const double ndotl = std::max(0.0, dot(s.normal, l));
        color = albedo * (0.3 * sp.diffuse * ndotl);
    } else {
        const double ndotl = std::max(0.0, dot(s.normal, l));
        const double th = std::clamp(dot(s.orientation, h), -1.0, 1.0);
        const double sin_th = std::sqrt(std::max(0.0, 1.0 - th * th));
        const double spec = sp.specular * std::pow(sin_th, exponent);
        color = albedo * (sp.diffuse * ndotl) + Vec3{spec, spec, spec};
    }
    if (fly.present && sp.flyaway_specular > 0.0) {
        const double fh = std::clamp(dot(fly.orientation, h), -1.0, 1.0);
        const double sin_fh = std::sqrt(std::max(0.0, 1.0 - fh * fh));
        const double spec = sp.flyaway_specular * std::pow(sin_fh, exponent);
        color = color + Vec3{spec, spec, spec};
    }
    return clamp01(color * sp.exposure);
}

struct RenderOptions {
    int threads = 0;  // 0 = hardware concurrency
};

struct RenderImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> rgb;  // sRGB-encoded
};

// Orthographic top-down plane: query, fuse with the albedo at the same UV,
// shade, sRGB-encode. Deterministic for fixed (scene, albedo, params, seed).
inline RenderImage render_plane(const FabricScene& scene, const AlbedoImage& albedo,
                                const ShadingParams& sp, int resolution,
                                const RenderOptions& opts = {}) {
    if (resolution < 1) throw ResolutionError("render resolution must be positive");
    if (albedo.width < 1 || albedo.height < 1) throw IoError("albedo image is empty");
    RenderImage img;
    img.width = img.height = resolution;
    img.rgb.resize(static_cast<size_t>(resolution) * resolution * 3);
    const double inv = 1.0 / resolution;
    detail::parallel_rows(resolution, opts.threads, [&](int py) {
        for (int px = 0; px < resolution; ++px) {
            const double u = (px + 0.5) * inv;
            const double v = (py + 0.5) * inv;
            const auto s = query_point(u, v, scene);
            const auto fly = scene.flyaway.enabled() ? flyaway_at(u, v, scene) : FlyawaySample{};
            Vec3 base = albedo.sample_wrap(u, v);
            const Vec3& tint = s.kind == YarnKind::warp ? sp.warp_tint : sp.weft_tint;
            base = {base.x * tint.x, base.y * tint.y, base.z * tint.z};
            const Vec3 c = shade(s, base, fly, sp);
            const size_t i = (static_cast<size_t>(py) * resolution + px) * 3;
            img.rgb[i] = static_cast<std::uint8_t>(std::lround(255.0 * linear_to_srgb(c.x)));
            img.rgb[i + 1] = static_cast<std::uint8_t>(std::lround(255.0 * linear_to_srgb(c.y)));
            img.rgb[i + 2] = static_cast<std::uint8_t>(std::lround(255.0 * linear_to_srgb(c.z)));
        }
    });
    return img;
}

inline void write_render(const RenderImage& img, const std::string& path) {
    write_png_rgb8(path, img.width, img.height, img.rgb.data());
}

}  // namespace weft
