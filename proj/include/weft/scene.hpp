#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "weft/draft.hpp"
#include "weft/irregularity.hpp"
#include "weft/yarn.hpp"

namespace weft {

struct InvalidScene : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IrregularitySpec {
    double k_sliding = 0.0;
    int sliding_frequency = 2;
    bool slide_warps = true;
    bool slide_wefts = true;
    double flyaway_threshold = 0.6;
    double flyaway_vertical = 0.5;
    double flyaway_intensity = 0.0;
    int flyaway_frequency = 8;
};

// Immutable, queryable fabric material: one draft repeat tiled `repeat` times
// per UV unit, with per-family yarn geometry and seeded irregularities.
// All members are fixed after make_scene; queries are pure and reentrant.
struct FabricScene {
    WeavingDraft draft;
    SegmentLayout visible;
    SegmentLayout hidden;
    YarnParams warp;
    YarnParams weft;
    SlidingParams warp_slide;
    SlidingParams weft_slide;
    FlyawayParams flyaway;
    int repeat = 1;
    std::uint64_t seed = 0;
    double floor_height = 0.0;
};

inline FabricScene make_scene(const WeavingDraft& draft, const YarnParams& warp,
                              const YarnParams& weft, const IrregularitySpec& irr, int repeat,
                              std::uint64_t seed) {
    if (repeat < 1) throw InvalidScene("repeat count must be >= 1");
    FabricScene scene;
    scene.draft = draft;
    scene.visible = extract_segments(draft);
    scene.hidden = extract_hidden_segments(draft);
    scene.warp = warp;
    scene.weft = weft;
    scene.repeat = repeat;
    scene.seed = seed;
    // Sub-seeds split from the master so one seed reproduces everything.
    scene.warp_slide = make_sliding(irr.slide_warps ? irr.k_sliding : 0.0, irr.sliding_frequency,
                                    detail::mix_seed(seed, 0x51DE5157ull));
    scene.weft_slide = make_sliding(irr.slide_wefts ? irr.k_sliding : 0.0, irr.sliding_frequency,
                                    detail::mix_seed(seed, 0x51DE57F7ull));
    scene.flyaway = make_flyaway(irr.flyaway_threshold, irr.flyaway_vertical,
                                 irr.flyaway_intensity, irr.flyaway_frequency,
                                 detail::mix_seed(seed, 0xF17A0001ull),
                                 detail::mix_seed(seed, 0xF17A0002ull));
    scene.floor_height = std::min(warp.height_floor(), weft.height_floor()) -
                         0.01 * std::max(warp.arc_radius, weft.arc_radius);
    return scene;
}

// One UV query result in the shared surface frame (z up, weft along x,
// warp along y).
struct SurfaceSample {
    Vec3 normal{0.0, 0.0, 1.0};
    Vec3 orientation{1.0, 0.0, 0.0};
    double height = 0.0;
    bool covered = false;
    bool lower_layer = false;  // yarn exposed by sliding, beneath the top layer
    YarnKind kind = YarnKind::weft;
    int ply = -1;
    int cell_row = 0;
    int cell_col = 0;

    bool operator==(const SurfaceSample&) const = default;
};

namespace detail {

inline double wrap01(double x) { return x - std::floor(x); }

enum class LayerOutcome { hit, gap, slid_away };

struct LayerQuery {
    LayerOutcome outcome = LayerOutcome::gap;
    SurfaceSample sample;
};

inline Vec3 to_surface_frame(const Vec3& local, YarnKind kind) {
    if (kind == YarnKind::weft) return local;
    return {-local.y, local.x, local.z};  // quarter turn about z for warps
}

inline LayerQuery query_layer(const FabricScene& scene, YarnKind kind, const CellSegment& seg,
                              int i, int j, double fs, double ft, double s, double t) {
    const YarnParams& yp = kind == YarnKind::warp ? scene.warp : scene.weft;
    const SlidingParams& sp = kind == YarnKind::warp ? scene.warp_slide : scene.weft_slide;

    const double along_cell = kind == YarnKind::warp ? ft : fs;
    double cross = kind == YarnKind::warp ? fs : ft;

    if (sp.enabled()) {
        // Each lane gets its own 1D noise along the yarn so yarns slide
        // independently; the inverse lookup recovers the regular coordinate.
        const int lane = kind == YarnKind::warp ? j : i;
        NoiseField lane_noise = sp.noise;
        lane_noise.seed = mix_seed(sp.noise.seed, static_cast<std::uint64_t>(lane));
        const double along_tile = kind == YarnKind::warp ? t : s;
        const double p = noise1(along_tile * sp.frequency, lane_noise);
        cross = slide_inverse_value(cross, p, sp.strength);
        if (!(cross > 0.0 && cross < 1.0)) return {LayerOutcome::slid_away, {}};
    }

    LayerQuery q;
    q.sample.kind = kind;
    q.sample.cell_row = i;
    q.sample.cell_col = j;

    const double d = cross - 0.5;
    const double half_width = 0.5 * yp.width;
    if (std::abs(d) > half_width) return {LayerOutcome::gap, q.sample};

    const double run_fraction = (seg.run_pos + along_cell) / seg.run_length;
    const double u = (2.0 * run_fraction - 1.0) * yp.max_inclination;
    double w = (d / half_width) * (yp.ply_orbit + yp.ply_radius);
    // The warp's local frame turns +90 degrees into the surface frame, so its
    // lateral axis runs against surface x.
    if (kind == YarnKind::warp) w = -w;

    const auto hit = select_ply(u, w, yp);
    if (!hit) return {LayerOutcome::gap, q.sample};

    q.outcome = LayerOutcome::hit;
    q.sample.covered = true;
    q.sample.ply = hit->ply;
    q.sample.height = hit->height;
    q.sample.normal = to_surface_frame(eval_normal(u, hit->v), kind);
    q.sample.orientation =
        to_surface_frame(eval_fiber_orientation(u, hit->v, hit->phi, yp), kind);
    return q;
}

}  // namespace detail

// Evaluate the microstructure at UV point (x, y); coordinates wrap by
// periodicity. The pipeline: inverse sliding on the cross-yarn lane
// coordinate, draft cell and run lookup, linear mapping onto the yarn arc,
// ply selection, then evaluation in the shared surface frame. Points where
// the top yarn slid away fall through to the yarn beneath; uncovered points
// report the gap floor.
inline SurfaceSample query_point(double x, double y, const FabricScene& scene) {
    if (scene.visible.rows != scene.draft.rows || scene.visible.cols != scene.draft.cols ||
        scene.draft.rows < 1 || scene.draft.cols < 1)
        throw InvalidScene("scene layout does not match its draft");

    const double sx = detail::wrap01(x) * scene.repeat;
    const double sy = detail::wrap01(y) * scene.repeat;
    const double s = sx - std::floor(sx);
    const double t = sy - std::floor(sy);

    const int cols = scene.draft.cols, rows = scene.draft.rows;
    double fs = s * cols, ft = t * rows;
    const int j = std::min(static_cast<int>(fs), cols - 1);
    const int i = std::min(static_cast<int>(ft), rows - 1);
    fs -= j;
    ft -= i;

    const YarnKind top = scene.draft.at(i, j) ? YarnKind::warp : YarnKind::weft;

    auto q = detail::query_layer(scene, top, scene.visible.at(i, j), i, j, fs, ft, s, t);
    if (q.outcome == detail::LayerOutcome::slid_away) {
        const YarnKind under = top == YarnKind::warp ? YarnKind::weft : YarnKind::warp;
        q = detail::query_layer(scene, under, scene.hidden.at(i, j), i, j, fs, ft, s, t);
        if (q.outcome == detail::LayerOutcome::hit) {
            const YarnParams& yp = under == YarnKind::warp ? scene.warp : scene.weft;
            q.sample.lower_layer = true;
            q.sample.height -= yp.height_max() - yp.height_floor();
        }
    }
    if (q.outcome == detail::LayerOutcome::hit) return q.sample;

    // Gap: defined values so renderers see a shadowed valley.
    SurfaceSample gap;
    gap.covered = false;
    gap.kind = top;
    gap.cell_row = i;
    gap.cell_col = j;
    gap.height = scene.floor_height;
    gap.normal = {0.0, 0.0, 1.0};
    gap.orientation = top == YarnKind::warp ? Vec3{0.0, 1.0, 0.0} : Vec3{1.0, 0.0, 0.0};
    return gap;
}

// Flyaway layer lookup in the same tile-local coordinates as query_point.
inline FlyawaySample flyaway_at(double x, double y, const FabricScene& scene) {
    const double sx = detail::wrap01(x) * scene.repeat;
    const double sy = detail::wrap01(y) * scene.repeat;
    return flyaway_orientation(sx - std::floor(sx), sy - std::floor(sy), scene.flyaway);
}

}  // namespace weft
