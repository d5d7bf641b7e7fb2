#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace weft {

// Seeded, periodic lattice gradient noise. Values are deterministic in
// (seed, input), C1-continuous, zero at every lattice point, and wrap with
// the lattice period so the driven fields tile.
struct NoiseField {
    std::uint64_t seed = 0;
    int period = 1;     // lattice period; inputs repeat every `period` units
    int dimension = 1;  // 1 or 2
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag) {
    return splitmix64(seed ^ splitmix64(tag));
}

inline std::uint64_t fnv1a(std::uint64_t h, const void* data, size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 0x100000001B3ull;
    }
    return h;
}

inline constexpr std::uint64_t kFnvBasis = 0xCBF29CE484222325ull;

inline double hash01(std::uint64_t h) {
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

// Quintic fade: zero first and second derivatives at the lattice.
inline double fade(double t) { return t * t * t * (t * (t * 6.0 - 15.0) + 10.0); }

inline double lerp(double t, double a, double b) { return a + t * (b - a); }

inline long wrap_index(double x, int period, double& frac) {
    const double fl = std::floor(x);
    frac = x - fl;
    long idx = static_cast<long>(fl) % period;
    if (idx < 0) idx += period;
    return idx;
}

inline double gradient1(std::uint64_t seed, long ix) {
    return hash01(splitmix64(seed ^ (static_cast<std::uint64_t>(ix) * 0x9E3779B97F4A7C15ull))) *
               2.0 -
           1.0;
}

inline void gradient2(std::uint64_t seed, long ix, long iy, double& gx, double& gy) {
    const std::uint64_t h =
        splitmix64(seed ^ (static_cast<std::uint64_t>(ix) * 0x9E3779B97F4A7C15ull) ^
                   (static_cast<std::uint64_t>(iy) * 0xC2B2AE3D27D4EB4Full));
    const double angle = hash01(h) * 6.283185307179586476925286766559;
    gx = std::cos(angle);
    gy = std::sin(angle);
}

}  // namespace detail

// Classic 1D gradient noise in [-1, 1], periodic with f.period.
inline double noise1(double x, const NoiseField& f) {
    if (f.dimension != 1) throw std::invalid_argument("noise1 requires a 1D field");
    double fx;
    const long i0 = detail::wrap_index(x, f.period, fx);
    const long i1 = (i0 + 1) % f.period;
    const double g0 = detail::gradient1(f.seed, i0);
    const double g1 = detail::gradient1(f.seed, i1);
    const double v = detail::lerp(detail::fade(fx), g0 * fx, g1 * (fx - 1.0)) * 2.0;
    return v < -1.0 ? -1.0 : (v > 1.0 ? 1.0 : v);
}

// Classic 2D gradient noise in [-1, 1], periodic with f.period on both axes.
inline double noise2(double x, double y, const NoiseField& f) {
    if (f.dimension != 2) throw std::invalid_argument("noise2 requires a 2D field");
    double fx, fy;
    const long ix0 = detail::wrap_index(x, f.period, fx);
    const long iy0 = detail::wrap_index(y, f.period, fy);
    const long ix1 = (ix0 + 1) % f.period;
    const long iy1 = (iy0 + 1) % f.period;

    double gx, gy;
    detail::gradient2(f.seed, ix0, iy0, gx, gy);
    const double d00 = gx * fx + gy * fy;
    detail::gradient2(f.seed, ix1, iy0, gx, gy);
    const double d10 = gx * (fx - 1.0) + gy * fy;
    detail::gradient2(f.seed, ix0, iy1, gx, gy);
    const double d01 = gx * fx + gy * (fy - 1.0);
    detail::gradient2(f.seed, ix1, iy1, gx, gy);
    const double d11 = gx * (fx - 1.0) + gy * (fy - 1.0);

    const double ux = detail::fade(fx);
    const double uy = detail::fade(fy);
    const double v = detail::lerp(uy, detail::lerp(ux, d00, d10), detail::lerp(ux, d01, d11)) *
                     1.4142135623730950488;
    return v < -1.0 ? -1.0 : (v > 1.0 ? 1.0 : v);
}

}  // namespace weft
