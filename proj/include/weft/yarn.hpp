#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "weft/vec.hpp"

namespace weft {

struct DegenerateOrientation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Curved-helix multi-ply yarn. The yarn centerline is a circular arc of
// radius `arc_radius` spanning inclinations [-max_inclination, max_inclination];
// each of the `ply_count` plies winds around it at distance `ply_orbit`,
// advancing `twist_rate` radians per unit arc length.
struct YarnParams {
    double max_inclination = 0.6;  // arc inclination bound, in (0, pi/2)
    double arc_radius = 1.0;
    double ply_orbit = 0.0;   // ply center to yarn center; 0 for single strands
    double ply_radius = 0.3;  // cross-section radius of one ply
    double twist_rate = 0.0;  // radians per unit arc length; sign sets S/Z twist
    double fiber_twist = 0.3; // rotation of fibers about the normal
    int ply_count = 1;
    std::vector<double> phases;  // initial phase per ply; empty = evenly spaced
    double width = 0.9;          // fraction of the cell the yarn occupies, in (0, 1]

    double phase0(int k) const {
        if (k < static_cast<int>(phases.size())) return phases[k];
        return 2.0 * 3.14159265358979323846 * k / ply_count;
    }

    bool operator==(const YarnParams&) const = default;

    // Surface height extrema; the lower bound holds for every covered sample.
    double height_max() const { return ply_orbit + arc_radius + ply_radius; }
    double height_floor() const {
        return -ply_orbit + std::cos(max_inclination) * (arc_radius - ply_radius);
    }
};

// Surface normal of the arc cross-section at arc coordinates (u, v).
// Unit length by construction.
inline Vec3 eval_normal(double u, double v) {
    return {std::sin(u) * std::cos(v), std::sin(v), std::cos(u) * std::cos(v)};
}

// Rotational phase of ply k at arc coordinate u.
inline double ply_phase(double u, int k, const YarnParams& p) {
    return p.phase0(k) + u * p.arc_radius * p.twist_rate;
}

// Direction of the ply helix at arc coordinate u with phase phi. Not unit
// length; reduces to the curved-cylinder tangent when ply_orbit*twist_rate = 0.
inline Vec3 eval_ply_orientation(double u, double phi, const YarnParams& p) {
    const double ra = p.ply_orbit * p.twist_rate;
    return {std::cos(u), -ra * std::cos(phi), -std::sin(u) - ra * std::sin(phi)};
}

// Fiber direction: the ply orientation rotated about the local normal by the
// fiber twist, then normalized.
inline Vec3 eval_fiber_orientation(double u, double v, double phi, const YarnParams& p) {
    const Vec3 o = eval_ply_orientation(u, phi, p);
    const double len = norm(o);
    if (len < 1e-12) throw DegenerateOrientation("ply orientation vanished");
    const Vec3 n = eval_normal(u, v);
    return normalized(rotate_about_axis(o, n, p.fiber_twist));
}

// Height of the ply surface above the weave plane.
inline double eval_height(double u, double v, double phi, const YarnParams& p) {
    return p.ply_orbit * std::cos(phi) + std::cos(u) * (p.arc_radius + p.ply_radius * std::cos(v));
}

struct PlyHit {
    int ply = 0;
    double v = 0.0;    // cross-section angle on the winning ply
    double phi = 0.0;  // that ply's phase at u
    double height = 0.0;
};

// Which ply surface is on top at lateral offset w from the yarn center.
// Each ply center sits at lateral offset ply_orbit*sin(phi_k); a ply covers w
// when |w - offset| <= ply_radius. Among covering plies the highest wins.
// Returns nullopt (an inter-ply gap) when no ply covers w.
inline std::optional<PlyHit> select_ply(double u, double w, const YarnParams& p) {
    std::optional<PlyHit> best;
    for (int k = 0; k < p.ply_count; ++k) {
        const double phi = ply_phase(u, k, p);
        const double offset = w - p.ply_orbit * std::sin(phi);
        if (std::abs(offset) > p.ply_radius) continue;
        const double s = p.ply_radius > 0.0 ? offset / p.ply_radius : 0.0;
        const double v = std::asin(s < -1.0 ? -1.0 : (s > 1.0 ? 1.0 : s));
        const double h = eval_height(u, v, phi, p);
        if (!best || h > best->height) best = PlyHit{k, v, phi, h};
    }
    return best;
}

}  // namespace weft
