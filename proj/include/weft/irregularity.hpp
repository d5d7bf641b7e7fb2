#pragma once

#include <cmath>
#include <stdexcept>

#include "weft/noise.hpp"
#include "weft/vec.hpp"

namespace weft {

struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Noise-driven lateral displacement of a yarn inside its lane. The warp
// y -> y_r is bijective on (0, 1) whenever strength * sup|P| < 1, which lets
// render-time queries invert it to reach regular coordinates.
struct SlidingParams {
    double strength = 0.0;  // k_sliding in [0, 1)
    int frequency = 2;      // noise cycles per repeat
    NoiseField noise{0, 2, 1};

    bool enabled() const { return strength > 0.0; }
};

inline SlidingParams make_sliding(double strength, int frequency, std::uint64_t seed) {
    SlidingParams sp;
    sp.strength = strength;
    sp.frequency = frequency;
    sp.noise = NoiseField{seed, frequency, 1};
    return sp;
}

// Noise value driving the slide at along-yarn position x (x in repeat units).
inline double sliding_noise(double x, const SlidingParams& sp) {
    return noise1(x * sp.frequency, sp.noise);
}

// Core maps, expressed on the noise value directly. Both collapse exactly to
// the identity when the strength or the noise vanishes.
inline double slide_forward_value(double y, double p, double k) {
    if (k == 0.0 || p == 0.0) return y;
    const double ys = 0.5 + (y - 0.5) * (1.0 - k * std::abs(p));
    return std::pow(ys, std::exp(k * p));
}

inline double slide_inverse_value(double yr, double p, double k) {
    if (k == 0.0 || p == 0.0) return yr;
    const double ys = std::pow(yr, std::exp(-k * p));
    return 0.5 + (ys - 0.5) / (1.0 - k * std::abs(p));
}

inline double slide_forward(double y, double x, const SlidingParams& sp) {
    if (!(y > 0.0 && y < 1.0)) throw DomainError("slide_forward requires y in (0,1)");
    return slide_forward_value(y, sliding_noise(x, sp), sp.strength);
}

// Inverse of slide_forward. Results may leave (0,1) where the forward map
// compressed that region; callers read such points as exposed lower-layer
// yarn, so no clamping is applied.
inline double slide_inverse(double yr, double x, const SlidingParams& sp) {
    if (!(yr > 0.0 && yr < 1.0)) throw DomainError("slide_inverse requires y_r in (0,1)");
    return slide_inverse_value(yr, sliding_noise(x, sp), sp.strength);
}

// Stray fibers escaping the surface, as a stochastic orientation layer.
// N1 gates presence and sets the in-plane direction; N2 lifts it vertically.
struct FlyawayParams {
    double density_threshold = 0.6;  // tau_f in [0, 1); higher = sparser
    double vertical_scale = 0.5;     // k_v in [0, 1]
    double intensity = 0.0;          // shading weight of the layer
    int frequency = 8;               // noise cycles per repeat
    NoiseField position_noise{0, 8, 2};  // N1
    NoiseField vertical_noise{1, 8, 2};  // N2

    bool enabled() const { return intensity > 0.0; }
};

inline FlyawayParams make_flyaway(double threshold, double vertical_scale, double intensity,
                                  int frequency, std::uint64_t seed1, std::uint64_t seed2) {
    FlyawayParams fp;
    fp.density_threshold = threshold;
    fp.vertical_scale = vertical_scale;
    fp.intensity = intensity;
    fp.frequency = frequency;
    fp.position_noise = NoiseField{seed1, frequency, 2};
    fp.vertical_noise = NoiseField{seed2, frequency, 2};
    return fp;
}

struct FlyawaySample {
    bool present = false;
    Vec3 orientation{1.0, 0.0, 0.0};
};

inline FlyawaySample flyaway_orientation(double x, double y, const FlyawayParams& fp) {
    const double n1 = noise2(x * fp.frequency, y * fp.frequency, fp.position_noise);
    FlyawaySample s;
    if (std::abs(n1) <= fp.density_threshold) return s;
    const double n2 = noise2(x * fp.frequency, y * fp.frequency, fp.vertical_noise);
    const double azimuth = 3.14159265358979323846 * n1;
    const double elevation = 1.5707963267948966192 * fp.vertical_scale * n2;
    s.present = true;
    s.orientation = {std::cos(elevation) * std::cos(azimuth),
                     std::cos(elevation) * std::sin(azimuth), std::sin(elevation)};
    return s;
}

}  // namespace weft
