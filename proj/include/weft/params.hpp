#pragma once

#include <json.hpp>

#include <cmath>
#include <string>
#include <vector>

#include "weft/scene.hpp"

namespace weft {

struct SchemaError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr int kParamsSchemaVersion = 1;

// The full parameter set a design produces: yarn geometry per family,
// irregularity controls, the shading subset, tints, and the repeat count.
// Serializes to the versioned JSON document published in docs/.
struct FabricParams {
    YarnParams warp;
    YarnParams weft;
    double k_sliding = 0.0;
    int sliding_frequency = 2;
    bool slide_warps = true;
    bool slide_wefts = true;
    double flyaway_threshold = 0.55;
    double flyaway_vertical = 0.5;
    double flyaway_intensity = 0.0;
    int flyaway_frequency = 8;
    double roughness = 0.35;
    double specular = 0.4;
    double diffuse = 0.6;
    Vec3 warp_tint{1.0, 1.0, 1.0};
    Vec3 weft_tint{1.0, 1.0, 1.0};
    int repeat = 2;

    bool operator==(const FabricParams&) const = default;
};

namespace detail {

inline void check_num(const nlohmann::json& j, const std::string& where, const char* key,
                      double lo, double hi, bool lo_open, std::vector<std::string>& errors) {
    if (!j.contains(key)) {
        errors.push_back(where + "." + key + " is missing");
        return;
    }
    if (!j[key].is_number()) {
        errors.push_back(where + "." + key + " must be a number");
        return;
    }
    const double v = j[key].get<double>();
    if (!std::isfinite(v) || v < lo || v > hi || (lo_open && v <= lo))
        errors.push_back(where + "." + key + " out of range [" + std::to_string(lo) + ", " +
                         std::to_string(hi) + "]" + (lo_open ? " (exclusive low)" : ""));
}

inline void check_int(const nlohmann::json& j, const std::string& where, const char* key, int lo,
                      int hi, std::vector<std::string>& errors) {
    if (!j.contains(key)) {
        errors.push_back(where + "." + key + " is missing");
        return;
    }
    if (!j[key].is_number_integer()) {
        errors.push_back(where + "." + key + " must be an integer");
        return;
    }
    const int v = j[key].get<int>();
    if (v < lo || v > hi)
        errors.push_back(where + "." + key + " out of range [" + std::to_string(lo) + ", " +
                         std::to_string(hi) + "]");
}

inline void validate_yarn_json(const nlohmann::json& j, const std::string& where,
                               std::vector<std::string>& errors) {
    if (!j.is_object()) {
        errors.push_back(where + " must be an object");
        return;
    }
    check_num(j, where, "max_inclination", 0.0, 1.57, /*lo_open=*/true, errors);
    check_num(j, where, "arc_radius", 0.0, 100.0, true, errors);
    check_num(j, where, "ply_orbit", 0.0, 100.0, false, errors);
    check_num(j, where, "ply_radius", 0.0, 100.0, true, errors);
    check_num(j, where, "twist_rate", -100.0, 100.0, false, errors);
    check_num(j, where, "fiber_twist", -6.3, 6.3, false, errors);
    check_int(j, where, "ply_count", 1, 8, errors);
    check_num(j, where, "width", 0.0, 1.0, true, errors);
    if (j.contains("phases")) {
        if (!j["phases"].is_array()) {
            errors.push_back(where + ".phases must be an array");
        } else {
            const int k = j.contains("ply_count") && j["ply_count"].is_number_integer()
                              ? j["ply_count"].get<int>()
                              : -1;
            if (k >= 0 && static_cast<int>(j["phases"].size()) != k)
                errors.push_back(where + ".phases must list one phase per ply");
            for (const auto& v : j["phases"])
                if (!v.is_number()) errors.push_back(where + ".phases entries must be numbers");
        }
    }
    if (j.contains("ply_count") && j["ply_count"].is_number_integer() &&
        j["ply_count"].get<int>() == 1 && j.contains("ply_orbit") &&
        j["ply_orbit"].is_number() && j["ply_orbit"].get<double>() != 0.0)
        errors.push_back(where + ".ply_orbit must be 0 for a single-ply yarn");
}

inline void check_tint(const nlohmann::json& j, const std::string& where,
                       std::vector<std::string>& errors) {
    if (!j.is_array() || j.size() != 3) {
        errors.push_back(where + " must be an [r, g, b] array");
        return;
    }
    for (const auto& v : j)
        if (!v.is_number() || v.get<double>() < 0.0 || v.get<double>() > 1.0)
            errors.push_back(where + " channels must lie in [0, 1]");
}

}  // namespace detail

// Schema validation of a parameter document; an empty result means valid.
inline std::vector<std::string> validate_params_json(const nlohmann::json& j) {
    std::vector<std::string> errors;
    if (!j.is_object()) {
        errors.push_back("document must be a JSON object");
        return errors;
    }
    if (!j.contains("schema_version") || !j["schema_version"].is_number_integer() ||
        j["schema_version"].get<int>() != kParamsSchemaVersion)
        errors.push_back("schema_version must be the integer " +
                         std::to_string(kParamsSchemaVersion));
    for (const char* key : {"warp", "weft"})
        if (!j.contains(key))
            errors.push_back(std::string(key) + " section is missing");
        else
            detail::validate_yarn_json(j[key], key, errors);
    if (!j.contains("shading") || !j["shading"].is_object()) {
        errors.push_back("shading section is missing");
    } else {
        detail::check_num(j["shading"], "shading", "roughness", 0.0, 1.0, true, errors);
        detail::check_num(j["shading"], "shading", "specular", 0.0, 8.0, false, errors);
        detail::check_num(j["shading"], "shading", "diffuse", 0.0, 8.0, false, errors);
    }
    detail::check_int(j, "", "repeat", 1, 16, errors);
    if (j.contains("sliding")) {
        if (!j["sliding"].is_object()) {
            errors.push_back("sliding must be an object");
        } else {
            detail::check_num(j["sliding"], "sliding", "strength", 0.0, 0.999, false, errors);
            detail::check_int(j["sliding"], "sliding", "frequency", 1, 64, errors);
        }
    }
    if (j.contains("flyaway")) {
        if (!j["flyaway"].is_object()) {
            errors.push_back("flyaway must be an object");
        } else {
            detail::check_num(j["flyaway"], "flyaway", "threshold", 0.0, 0.999, false, errors);
            detail::check_num(j["flyaway"], "flyaway", "vertical", 0.0, 1.0, false, errors);
            detail::check_num(j["flyaway"], "flyaway", "intensity", 0.0, 1.0, false, errors);
            detail::check_int(j["flyaway"], "flyaway", "frequency", 1, 128, errors);
        }
    }
    if (j.contains("tints")) {
        if (!j["tints"].is_object()) {
            errors.push_back("tints must be an object");
        } else {
            if (j["tints"].contains("warp")) detail::check_tint(j["tints"]["warp"], "tints.warp", errors);
            if (j["tints"].contains("weft")) detail::check_tint(j["tints"]["weft"], "tints.weft", errors);
        }
    }
    return errors;
}

inline nlohmann::json yarn_to_json(const YarnParams& p) {
    nlohmann::json j = {
        {"max_inclination", p.max_inclination},
        {"arc_radius", p.arc_radius},
        {"ply_orbit", p.ply_orbit},
        {"ply_radius", p.ply_radius},
        {"twist_rate", p.twist_rate},
        {"fiber_twist", p.fiber_twist},
        {"ply_count", p.ply_count},
        {"width", p.width},
    };
    if (!p.phases.empty()) j["phases"] = p.phases;
    return j;
}

inline nlohmann::json params_to_json(const FabricParams& p) {
    return {
        {"schema_version", kParamsSchemaVersion},
        {"warp", yarn_to_json(p.warp)},
        {"weft", yarn_to_json(p.weft)},
        {"sliding",
         {{"strength", p.k_sliding},
          {"frequency", p.sliding_frequency},
          {"warps", p.slide_warps},
          {"wefts", p.slide_wefts}}},
        {"flyaway",
         {{"threshold", p.flyaway_threshold},
          {"vertical", p.flyaway_vertical},
          {"intensity", p.flyaway_intensity},
          {"frequency", p.flyaway_frequency}}},
        {"shading",
         {{"roughness", p.roughness}, {"specular", p.specular}, {"diffuse", p.diffuse}}},
        {"tints",
         {{"warp", {p.warp_tint.x, p.warp_tint.y, p.warp_tint.z}},
          {"weft", {p.weft_tint.x, p.weft_tint.y, p.weft_tint.z}}}},
        {"repeat", p.repeat},
    };
}

// Parse a validated document. Throws SchemaError carrying every violation.
inline FabricParams params_from_json(const nlohmann::json& j) {
    const auto errors = validate_params_json(j);
    if (!errors.empty()) {
        std::string msg = "parameter document rejected:";
        for (const auto& e : errors) msg += "\n  - " + e;
        throw SchemaError(msg);
    }
    FabricParams p;
    auto yarn = [](const nlohmann::json& y) {
        YarnParams q;
        q.max_inclination = y["max_inclination"].get<double>();
        q.arc_radius = y["arc_radius"].get<double>();
        q.ply_orbit = y["ply_orbit"].get<double>();
        q.ply_radius = y["ply_radius"].get<double>();
        q.twist_rate = y["twist_rate"].get<double>();
        q.fiber_twist = y["fiber_twist"].get<double>();
        q.ply_count = y["ply_count"].get<int>();
        q.width = y["width"].get<double>();
        if (y.contains("phases")) q.phases = y["phases"].get<std::vector<double>>();
        return q;
    };
    p.warp = yarn(j["warp"]);
    p.weft = yarn(j["weft"]);
    if (j.contains("sliding")) {
        const auto& s = j["sliding"];
        p.k_sliding = s["strength"].get<double>();
        p.sliding_frequency = s["frequency"].get<int>();
        if (s.contains("warps")) p.slide_warps = s["warps"].get<bool>();
        if (s.contains("wefts")) p.slide_wefts = s["wefts"].get<bool>();
    }
    if (j.contains("flyaway")) {
        const auto& f = j["flyaway"];
        p.flyaway_threshold = f["threshold"].get<double>();
        p.flyaway_vertical = f["vertical"].get<double>();
        p.flyaway_intensity = f["intensity"].get<double>();
        p.flyaway_frequency = f["frequency"].get<int>();
    }
    const auto& sh = j["shading"];
    p.roughness = sh["roughness"].get<double>();
    p.specular = sh["specular"].get<double>();
    p.diffuse = sh["diffuse"].get<double>();
    if (j.contains("tints")) {
        auto tint = [](const nlohmann::json& t) {
            return Vec3{t[0].get<double>(), t[1].get<double>(), t[2].get<double>()};
        };
        if (j["tints"].contains("warp")) p.warp_tint = tint(j["tints"]["warp"]);
        if (j["tints"].contains("weft")) p.weft_tint = tint(j["tints"]["weft"]);
    }
    p.repeat = j["repeat"].get<int>();
    return p;
}

// Family presets. The numeric values are this artifact's constants; their
// orderings (satin glossier and flatter than plain, twill between) carry the
// familiar look of each weave.
inline FabricParams default_params(WeaveFamily family) {
    auto strand = [](double incl, double r_ply, double psi, double width) {
        YarnParams y;
        y.max_inclination = incl;
        y.arc_radius = 1.0;
        y.ply_orbit = 0.0;
        y.ply_radius = r_ply;
        y.twist_rate = 0.0;
        y.fiber_twist = psi;
        y.ply_count = 1;
        y.width = width;
        return y;
    };
    auto plied = [](double incl, double orbit, double r_ply, double twist, double psi,
                    double width) {
        YarnParams y;
        y.max_inclination = incl;
        y.arc_radius = 1.0;
        y.ply_orbit = orbit;
        y.ply_radius = r_ply;
        y.twist_rate = twist;
        y.fiber_twist = psi;
        y.ply_count = 2;
        y.width = width;
        return y;
    };
    FabricParams p;
    switch (family) {
        case WeaveFamily::plain:
            p.warp = p.weft = strand(0.65, 0.32, 0.35, 0.86);
            p.roughness = 0.55;
            p.specular = 0.30;
            p.diffuse = 0.65;
            break;
        case WeaveFamily::twill:
            p.warp = p.weft = plied(0.55, 0.11, 0.17, 5.0, 0.30, 0.92);
            p.roughness = 0.35;
            p.specular = 0.50;
            p.diffuse = 0.55;
            break;
        case WeaveFamily::satin:
            // Long flat floats and a tight lobe give the anisotropic sheen.
            p.warp = p.weft = plied(0.40, 0.10, 0.16, 4.0, 0.15, 0.95);
            p.roughness = 0.15;
            p.specular = 0.80;
            p.diffuse = 0.40;
            break;
        case WeaveFamily::basket:
            p.warp = p.weft = strand(0.60, 0.30, 0.35, 0.97);
            p.roughness = 0.45;
            p.specular = 0.35;
            p.diffuse = 0.60;
            break;
        case WeaveFamily::herringbone:
            p.warp = p.weft = plied(0.55, 0.11, 0.17, 5.0, 0.30, 0.92);
            p.roughness = 0.38;
            p.specular = 0.45;
            p.diffuse = 0.55;
            break;
        default:
            throw InvalidSpec("unknown weave family");
    }
    return p;
}

inline PatternSpec default_pattern(WeaveFamily family) {
    PatternSpec spec;
    spec.family = family;
    switch (family) {
        case WeaveFamily::plain: break;
        case WeaveFamily::twill:
        case WeaveFamily::herringbone:
            spec.twill_over = 2;
            spec.twill_under = 2;
            spec.herringbone_width = 4;
            break;
        case WeaveFamily::satin:
            spec.satin_size = 5;
            spec.satin_counter = 2;
            break;
        case WeaveFamily::basket:
            spec.basket_block = 2;
            break;
    }
    return spec;
}

inline IrregularitySpec irregularity_of(const FabricParams& p) {
    IrregularitySpec irr;
    irr.k_sliding = p.k_sliding;
    irr.sliding_frequency = p.sliding_frequency;
    irr.slide_warps = p.slide_warps;
    irr.slide_wefts = p.slide_wefts;
    irr.flyaway_threshold = p.flyaway_threshold;
    irr.flyaway_vertical = p.flyaway_vertical;
    irr.flyaway_intensity = p.flyaway_intensity;
    irr.flyaway_frequency = p.flyaway_frequency;
    return irr;
}

inline FabricScene scene_from_params(const WeavingDraft& draft, const FabricParams& p,
                                     std::uint64_t seed) {
    return make_scene(draft, p.warp, p.weft, irregularity_of(p), p.repeat, seed);
}

}  // namespace weft
