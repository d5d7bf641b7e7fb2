// weft: generate weaving drafts, bake tileable microstructure maps, render
// shaded previews, and design fabrics from text.
//
// Exit codes: 0 success, 1 I/O or usage error, 2 validation failure,
// 3 endpoint failure.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "weft/chat_http.hpp"
#include "weft/weft.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr std::uint64_t kDefaultSeed = 7;  // fixed so bare runs reproduce

struct ExitWith {
    int code;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw weft::IoError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw weft::IoError("cannot write " + path);
    out << content;
}

json load_config(const std::string& path) {
    if (path.empty()) return json::object();
    try {
        return json::parse(read_file(path));
    } catch (const json::exception& e) {
        throw weft::IoError("config file " + path + " is not valid JSON: " + e.what());
    }
}

// Flag > config file > built-in default.
template <typename T>
void merge_cfg(const json& cfg, const CLI::Option* opt, const char* key, T& value) {
    if (opt->count() == 0 && cfg.contains(key)) {
        try {
            value = cfg[key].get<T>();
        } catch (const json::exception&) {
            throw weft::IoError(std::string("config key '") + key + "' has the wrong type");
        }
    }
}

const std::map<std::string, weft::WeaveFamily> kFamilyNames = {
    {"plain", weft::WeaveFamily::plain},
    {"twill", weft::WeaveFamily::twill},
    {"satin", weft::WeaveFamily::satin},
    {"basket", weft::WeaveFamily::basket},
    {"herringbone", weft::WeaveFamily::herringbone},
};

// Shared scene-definition flags for bake and render.
struct SceneArgs {
    std::string draft_file;
    std::string family;
    std::string params_file;
    std::string config_file;
    std::uint64_t seed = kDefaultSeed;
    double k_sliding = -1.0;     // <0 = keep params value
    double flyaway = -1.0;       // <0 = keep params value
    int repeat = 0;              // 0 = keep params value
    int m = 2, n = 2, satin_n = 5, satin_c = 2, basket_k = 2, hb_w = 4;

    CLI::Option* draft_opt = nullptr;
    CLI::Option* family_opt = nullptr;
    CLI::Option* params_opt = nullptr;
    CLI::Option* seed_opt = nullptr;
    CLI::Option* sliding_opt = nullptr;
    CLI::Option* flyaway_opt = nullptr;
    CLI::Option* repeat_opt = nullptr;

    void add_to(CLI::App* app) {
        draft_opt = app->add_option("--draft", draft_file, "Draft grid text file");
        family_opt = app->add_option("--family", family, "Generate the draft for a weave family")
                         ->check(CLI::IsMember(kFamilyNames, CLI::ignore_case));
        params_opt = app->add_option("--params", params_file, "Fabric parameters JSON");
        app->add_option("--config", config_file, "JSON config merged under explicit flags");
        seed_opt = app->add_option("--seed", seed, "Master seed");
        sliding_opt = app->add_option("--k-sliding", k_sliding, "Override yarn sliding strength");
        flyaway_opt = app->add_option("--flyaway", flyaway, "Override flyaway intensity");
        repeat_opt = app->add_option("--repeat", repeat, "Override repeat tiles per map edge");
        app->add_option("--m", m, "Twill/herringbone cells over");
        app->add_option("--n", n, "Twill/herringbone cells under");
        app->add_option("--satin-n", satin_n, "Satin repeat size");
        app->add_option("--satin-c", satin_c, "Satin counter");
        app->add_option("--k", basket_k, "Basket block size");
        app->add_option("--w", hb_w, "Herringbone band width");
    }

    weft::PatternSpec pattern_spec(weft::WeaveFamily fam) const {
        weft::PatternSpec spec = weft::default_pattern(fam);
        spec.twill_over = m;
        spec.twill_under = n;
        spec.satin_size = satin_n;
        spec.satin_counter = satin_c;
        spec.basket_block = basket_k;
        spec.herringbone_width = hb_w;
        return spec;
    }

    struct Resolved {
        weft::WeavingDraft draft;
        weft::FabricParams params;
        std::uint64_t seed;
        json effective;
    };

    Resolved resolve() {
        const json cfg = load_config(config_file);
        merge_cfg(cfg, draft_opt, "draft", draft_file);
        merge_cfg(cfg, family_opt, "family", family);
        merge_cfg(cfg, params_opt, "params", params_file);
        merge_cfg(cfg, seed_opt, "seed", seed);
        merge_cfg(cfg, sliding_opt, "k-sliding", k_sliding);
        merge_cfg(cfg, flyaway_opt, "flyaway", flyaway);
        merge_cfg(cfg, repeat_opt, "repeat", repeat);

        if (draft_file.empty() == family.empty())
            throw ExitWith{1};  // exactly one source; message printed below

        Resolved r;
        weft::WeaveFamily fam = weft::WeaveFamily::plain;
        if (!family.empty()) {
            fam = kFamilyNames.at(family);
            r.draft = weft::generate_pattern(pattern_spec(fam));
        } else {
            r.draft = weft::parse_draft(read_file(draft_file));
            const auto report = weft::validate_draft(r.draft);
            if (!report.valid()) {
                std::cerr << report.to_string();
                throw ExitWith{2};
            }
        }
        r.params = weft::default_params(fam);
        if (!params_file.empty())
            r.params = weft::params_from_json(json::parse(read_file(params_file), nullptr, true));
        if (k_sliding >= 0.0) r.params.k_sliding = k_sliding;
        if (flyaway >= 0.0) r.params.flyaway_intensity = flyaway;
        if (repeat > 0) r.params.repeat = repeat;
        r.seed = seed;
        r.effective = {{"draft", draft_file},
                       {"family", family},
                       {"params", params_file},
                       {"seed", seed},
                       {"k-sliding", r.params.k_sliding},
                       {"flyaway", r.params.flyaway_intensity},
                       {"repeat", r.params.repeat}};
        return r;
    }
};

weft::Vec3 parse_hex_color(std::string hex) {
    if (!hex.empty() && hex[0] == '#') hex.erase(0, 1);
    if (hex.size() != 6 || hex.find_first_not_of("0123456789abcdefABCDEF") != std::string::npos)
        throw weft::IoError("expected a RRGGBB hex color, got '" + hex + "'");
    const unsigned v = static_cast<unsigned>(std::stoul(hex, nullptr, 16));
    return {weft::srgb_to_linear(((v >> 16) & 0xFF) / 255.0),
            weft::srgb_to_linear(((v >> 8) & 0xFF) / 255.0),
            weft::srgb_to_linear((v & 0xFF) / 255.0)};
}

weft::Vec3 parse_direction(const std::string& azel) {
    double az = 0.0, el = 0.0;
    if (std::sscanf(azel.c_str(), "%lf,%lf", &az, &el) != 2)
        throw weft::IoError("expected 'azimuth,elevation' in degrees, got '" + azel + "'");
    const double a = az * 3.14159265358979323846 / 180.0;
    const double e = el * 3.14159265358979323846 / 180.0;
    return {std::cos(e) * std::cos(a), std::cos(e) * std::sin(a), std::sin(e)};
}

void write_run_manifest(const std::string& path, const std::string& command,
                        const json& effective, const std::vector<std::string>& outputs,
                        const fs::path& base) {
    json j;
    j["command"] = command;
    j["effective_config"] = effective;
    j["outputs"] = json::array();
    for (const auto& rel : outputs) {
        char hex[9];
        std::snprintf(hex, sizeof(hex), "%08x", weft::crc32_of_file((base / rel).string()));
        j["outputs"].push_back({{"path", rel}, {"crc32", hex}});
    }
    write_file(path, j.dump(2) + "\n");
}

std::string draft_ascii(const weft::WeavingDraft& d) {
    std::string art;
    for (int i = 0; i < d.rows; ++i) {
        for (int j = 0; j < d.cols; ++j) art += d.at(i, j) ? "█" : "·";
        art += '\n';
    }
    return art;
}

// ---- draft ----------------------------------------------------------------

void setup_draft(CLI::App& app) {
    auto* draft = app.add_subcommand("draft", "Generate, parse, validate, or show drafts");
    draft->require_subcommand(1);

    auto add_pattern_opts = [](CLI::App* cmd, auto& args) {
        cmd->add_option("--family", args.family, "Weave family")
            ->required()
            ->check(CLI::IsMember(kFamilyNames, CLI::ignore_case));
        cmd->add_option("--m", args.m, "Twill/herringbone cells over");
        cmd->add_option("--n", args.n, "Twill/herringbone cells under");
        cmd->add_option("--satin-n", args.satin_n, "Satin repeat size");
        cmd->add_option("--satin-c", args.satin_c, "Satin counter");
        cmd->add_option("--k", args.basket_k, "Basket block size");
        cmd->add_option("--w", args.hb_w, "Herringbone band width");
        cmd->add_option("--rows", args.rows, "Tile the repeat to this many rows");
        cmd->add_option("--cols", args.cols, "Tile the repeat to this many columns");
    };

    struct GenArgs {
        std::string family;
        int m = 2, n = 2, satin_n = 5, satin_c = 2, basket_k = 2, hb_w = 4, rows = 0, cols = 0;
        std::string out;

        weft::WeavingDraft build() const {
            weft::PatternSpec spec = weft::default_pattern(kFamilyNames.at(family));
            spec.twill_over = m;
            spec.twill_under = n;
            spec.satin_size = satin_n;
            spec.satin_counter = satin_c;
            spec.basket_block = basket_k;
            spec.herringbone_width = hb_w;
            spec.repeat_rows = rows;
            spec.repeat_cols = cols;
            return weft::generate_pattern(spec);
        }
    };

    auto gen_args = std::make_shared<GenArgs>();
    auto* gen = draft->add_subcommand("gen", "Generate a classic pattern");
    add_pattern_opts(gen, *gen_args);
    gen->add_option("--out", gen_args->out, "Write to a file instead of stdout");
    gen->callback([gen_args] {
        const auto d = gen_args->build();
        if (gen_args->out.empty())
            std::cout << weft::serialize_draft(d, false);
        else
            write_file(gen_args->out, weft::serialize_draft(d, true));
    });

    auto parse_file = std::make_shared<std::string>();
    auto parse_out = std::make_shared<std::string>();
    auto* parse = draft->add_subcommand("parse", "Parse a draft file and echo it canonically");
    parse->add_option("file", *parse_file, "Draft grid text file")->required();
    parse->add_option("--out", *parse_out, "Write canonical form to a file");
    parse->callback([parse_file, parse_out] {
        const auto d = weft::parse_draft(read_file(*parse_file));
        if (parse_out->empty())
            std::cout << weft::serialize_draft(d, false);
        else
            write_file(*parse_out, weft::serialize_draft(d, true));
    });

    auto validate_file = std::make_shared<std::string>();
    auto* validate = draft->add_subcommand("validate", "Check weaving validity");
    validate->add_option("file", *validate_file, "Draft grid text file")->required();
    validate->callback([validate_file] {
        const auto d = weft::parse_draft(read_file(*validate_file));
        const auto report = weft::validate_draft(d);
        if (!report.valid()) {
            std::cerr << report.to_string();
            throw ExitWith{2};
        }
        std::cout << "valid " << d.rows << "x" << d.cols << "\n";
    });

    struct ShowArgs : GenArgs {
        std::string file;
    };
    auto show_args = std::make_shared<ShowArgs>();
    auto* show = draft->add_subcommand("show", "Print a draft as ASCII art");
    show->add_option("file", show_args->file, "Draft grid text file");
    auto* show_family =
        show->add_option("--family", show_args->family, "Weave family to generate")
            ->check(CLI::IsMember(kFamilyNames, CLI::ignore_case));
    show->add_option("--m", show_args->m, "Twill/herringbone cells over");
    show->add_option("--n", show_args->n, "Twill/herringbone cells under");
    show->add_option("--satin-n", show_args->satin_n, "Satin repeat size");
    show->add_option("--satin-c", show_args->satin_c, "Satin counter");
    show->add_option("--k", show_args->basket_k, "Basket block size");
    show->add_option("--w", show_args->hb_w, "Herringbone band width");
    show->callback([show_args, show_family] {
        weft::WeavingDraft d;
        if (!show_args->file.empty())
            d = weft::parse_draft(read_file(show_args->file));
        else if (show_family->count() > 0)
            d = show_args->build();
        else
            throw weft::IoError("draft show needs a file or --family");
        std::cout << draft_ascii(d);
    });
}

// ---- bake ------------------------------------------------------------------

void setup_bake(CLI::App& app) {
    struct BakeArgs {
        SceneArgs scene;
        int res = 1024;
        int threads = 0;
        bool supersample = false;
        std::string out;
        CLI::Option* res_opt = nullptr;
        CLI::Option* threads_opt = nullptr;
    };
    auto args = std::make_shared<BakeArgs>();
    auto* bake = app.add_subcommand("bake", "Bake tileable normal/orientation/height/coverage maps");
    args->scene.add_to(bake);
    args->res_opt = bake->add_option("--res", args->res, "Map resolution (power of two)");
    args->threads_opt = bake->add_option("--threads", args->threads, "Worker threads (0 = auto)");
    bake->add_flag("--supersample", args->supersample, "4x supersampling");
    bake->add_option("--out", args->out, "Output directory")->required();

    bake->callback([args] {
        const json cfg = load_config(args->scene.config_file);
        merge_cfg(cfg, args->res_opt, "res", args->res);
        merge_cfg(cfg, args->threads_opt, "threads", args->threads);
        auto resolved = args->scene.resolve();
        const auto scene =
            weft::scene_from_params(resolved.draft, resolved.params, resolved.seed);
        weft::BakeOptions opts;
        opts.threads = args->threads;
        opts.supersample = args->supersample;
        const auto maps = weft::bake_maps(scene, args->res, opts);
        const auto manifest = weft::write_maps(maps, args->out);

        resolved.effective["res"] = args->res;
        resolved.effective["supersample"] = args->supersample;
        std::vector<std::string> outputs;
        for (const auto& e : manifest.files) outputs.push_back(e.path);
        write_run_manifest((fs::path(args->out) / "run_manifest.json").string(), "bake",
                           resolved.effective, outputs, args->out);
        std::cout << "baked " << args->res << "x" << args->res << " maps into " << args->out
                  << "\n";
    });
}

// ---- render ----------------------------------------------------------------

void setup_render(CLI::App& app) {
    struct RenderArgs {
        SceneArgs scene;
        std::string albedo_file;
        std::string albedo_solid = "808080";
        std::string light = "45,55";
        std::string view = "0,90";
        double exposure = 1.0;
        int res = 1024;
        int threads = 0;
        std::string out;
        CLI::Option* res_opt = nullptr;
        CLI::Option* light_opt = nullptr;
        CLI::Option* exposure_opt = nullptr;
    };
    auto args = std::make_shared<RenderArgs>();
    auto* render = app.add_subcommand("render", "Render a shaded top-down preview");
    args->scene.add_to(render);
    render->add_option("--albedo", args->albedo_file, "Albedo PNG (8- or 16-bit)");
    render->add_option("--albedo-solid", args->albedo_solid, "Solid RRGGBB albedo");
    args->light_opt = render->add_option("--light", args->light, "Light azimuth,elevation (deg)");
    render->add_option("--view", args->view, "View azimuth,elevation (deg)");
    args->exposure_opt = render->add_option("--exposure", args->exposure, "Exposure multiplier");
    args->res_opt = render->add_option("--res", args->res, "Image resolution");
    render->add_option("--threads", args->threads, "Worker threads (0 = auto)");
    render->add_option("--out", args->out, "Output PNG path")->required();

    render->callback([args] {
        const json cfg = load_config(args->scene.config_file);
        merge_cfg(cfg, args->res_opt, "res", args->res);
        merge_cfg(cfg, args->light_opt, "light", args->light);
        merge_cfg(cfg, args->exposure_opt, "exposure", args->exposure);
        auto resolved = args->scene.resolve();
        const auto scene =
            weft::scene_from_params(resolved.draft, resolved.params, resolved.seed);

        weft::AlbedoImage albedo = args->albedo_file.empty()
                                       ? weft::albedo_solid(parse_hex_color(args->albedo_solid))
                                       : weft::load_albedo(args->albedo_file);
        weft::ShadingParams sp;
        sp.roughness = resolved.params.roughness;
        sp.specular = resolved.params.specular;
        sp.diffuse = resolved.params.diffuse;
        sp.flyaway_specular = resolved.params.flyaway_intensity;
        sp.warp_tint = resolved.params.warp_tint;
        sp.weft_tint = resolved.params.weft_tint;
        sp.light_dir = parse_direction(args->light);
        sp.view_dir = parse_direction(args->view);
        sp.exposure = args->exposure;

        weft::RenderOptions opts;
        opts.threads = args->threads;
        const auto img = weft::render_plane(scene, albedo, sp, args->res, opts);
        weft::write_render(img, args->out);

        resolved.effective["res"] = args->res;
        resolved.effective["light"] = args->light;
        resolved.effective["view"] = args->view;
        resolved.effective["exposure"] = args->exposure;
        resolved.effective["albedo"] = args->albedo_file.empty() ? ("#" + args->albedo_solid)
                                                                 : args->albedo_file;
        const fs::path out_path(args->out);
        write_run_manifest(args->out + ".manifest.json", "render", resolved.effective,
                           {out_path.filename().string()},
                           out_path.has_parent_path() ? out_path.parent_path() : fs::path("."));
        std::cout << "rendered " << args->res << "x" << args->res << " preview to " << args->out
                  << "\n";
    });
}

// ---- design ----------------------------------------------------------------

void setup_design(CLI::App& app) {
    struct DesignArgs {
        std::string prompt;
        std::string endpoint;
        std::string model = "default";
        std::string out = "design_out";
        bool offline = false;
        bool no_fallback = false;
        int retries = 3;
        int timeout = 30;
    };
    auto args = std::make_shared<DesignArgs>();
    auto* design = app.add_subcommand("design", "Turn a text prompt into a draft + parameters");
    design->add_option("--prompt", args->prompt, "Fabric description")->required();
    design->add_option("--endpoint", args->endpoint, "Chat-completion endpoint base URL");
    design->add_option("--model", args->model, "Model name sent to the endpoint");
    design->add_option("--out", args->out, "Output directory");
    design->add_flag("--offline", args->offline, "Skip the endpoint, use rule-based design");
    design->add_flag("--no-fallback", args->no_fallback, "Fail instead of falling back");
    design->add_option("--retries", args->retries, "Max validation repair retries");
    design->add_option("--timeout", args->timeout, "Endpoint timeout in seconds");

    design->callback([args] {
        std::unique_ptr<weft::HttpChatClient> client;
        if (!args->offline && !args->endpoint.empty()) {
            weft::EndpointConfig cfg;
            cfg.base_url = args->endpoint;
            cfg.model = args->model;
            cfg.timeout_seconds = args->timeout;
            client = std::make_unique<weft::HttpChatClient>(cfg);
        }
        weft::DesignRequest req;
        req.prompt = args->prompt;
        weft::DesignOptions opts;
        opts.max_repair_retries = args->retries;
        opts.allow_fallback = !args->no_fallback;
        const auto result = weft::design(req, client.get(), opts);

        fs::create_directories(args->out);
        write_file((fs::path(args->out) / "draft.txt").string(),
                   weft::serialize_draft(result.draft, true));
        write_file((fs::path(args->out) / "params.json").string(),
                   weft::params_to_json(result.params).dump(2) + "\n");
        json prov = {{"provenance", weft::provenance_name(result.provenance)},
                     {"family", weft::family_name(result.family)},
                     {"response_digest", result.response_digest},
                     {"repair_log", result.repair_log},
                     {"prompt", args->prompt}};
        write_file((fs::path(args->out) / "provenance.json").string(), prov.dump(2) + "\n");

        json effective = {{"prompt", args->prompt},  {"endpoint", args->endpoint},
                          {"model", args->model},    {"offline", args->offline},
                          {"retries", args->retries}, {"no-fallback", args->no_fallback}};
        write_run_manifest((fs::path(args->out) / "run_manifest.json").string(), "design",
                           effective, {"draft.txt", "params.json", "provenance.json"}, args->out);
        std::cout << "design written to " << args->out << " (provenance: "
                  << weft::provenance_name(result.provenance) << ")\n";
    });
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"weft: procedural woven fabric microstructure tool"};
    app.require_subcommand(1);
    setup_draft(app);
    setup_bake(app);
    setup_render(app);
    setup_design(app);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const ExitWith& e) {
        if (e.code == 1) std::cerr << "usage error: give exactly one of --draft or --family\n";
        return e.code;
    } catch (const weft::EndpointError& e) {
        std::cerr << "endpoint error: " << e.what() << "\n";
        return 3;
    } catch (const weft::DesignRejected& e) {
        std::cerr << "design rejected: " << e.what() << "\n";
        return 3;
    } catch (const weft::ParseError& e) {
        std::cerr << "draft parse error: " << e.what() << "\n";
        return 2;
    } catch (const weft::SizeError& e) {
        std::cerr << "draft size error: " << e.what() << "\n";
        return 2;
    } catch (const weft::InvalidSpec& e) {
        std::cerr << "invalid pattern spec: " << e.what() << "\n";
        return 2;
    } catch (const weft::InvalidDraft& e) {
        std::cerr << "invalid draft: " << e.what() << "\n";
        return 2;
    } catch (const weft::SchemaError& e) {
        std::cerr << "parameter schema error: " << e.what() << "\n";
        return 2;
    } catch (const weft::ResolutionError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const weft::IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return 1;
    } catch (const weft::FormatError& e) {
        std::cerr << "format error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
