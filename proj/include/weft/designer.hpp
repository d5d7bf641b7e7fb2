#pragma once

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "weft/chat.hpp"
#include "weft/draft.hpp"
#include "weft/params.hpp"

namespace weft {

struct ExtractionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DesignRejected : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Provenance { rule_based, external_endpoint };

inline const char* provenance_name(Provenance p) {
    return p == Provenance::rule_based ? "rule-based" : "external-endpoint";
}

// Either a structured pattern request or a free-text prompt; exactly one.
struct DesignRequest {
    std::optional<PatternSpec> structured;
    nlohmann::json overrides;  // merge-patched over the preset (structured only)
    std::optional<std::string> prompt;
};

struct DesignResult {
    WeavingDraft draft;
    FabricParams params;
    WeaveFamily family = WeaveFamily::plain;
    Provenance provenance = Provenance::rule_based;
    std::string response_digest;  // hex digest of raw endpoint replies
    std::vector<std::string> repair_log;
};

struct DesignOptions {
    int max_repair_retries = 3;
    bool allow_fallback = true;
};

inline WeaveFamily family_from_keywords(const std::string& prompt) {
    std::string low;
    low.reserve(prompt.size());
    for (char c : prompt) low.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    auto has = [&](const char* word) { return low.find(word) != std::string::npos; };
    if (has("herringbone") || has("chevron")) return WeaveFamily::herringbone;
    if (has("satin") || has("sateen") || has("charmeuse")) return WeaveFamily::satin;
    if (has("basket") || has("panama") || has("oxford")) return WeaveFamily::basket;
    if (has("twill") || has("denim") || has("gabardine") || has("serge")) return WeaveFamily::twill;
    return WeaveFamily::plain;
}

namespace detail {

// First balanced JSON value starting with `open` that nlohmann accepts and
// the predicate approves.
template <typename Pred>
inline std::optional<nlohmann::json> extract_json_matching(const std::string& text, char open,
                                                           char close, Pred&& pred) {
    for (size_t start = text.find(open); start != std::string::npos;
         start = text.find(open, start + 1)) {
        int depth = 0;
        bool in_string = false;
        for (size_t i = start; i < text.size(); ++i) {
            const char c = text[i];
            if (in_string) {
                if (c == '\\')
                    ++i;
                else if (c == '"')
                    in_string = false;
                continue;
            }
            if (c == '"') {
                in_string = true;
            } else if (c == open) {
                ++depth;
            } else if (c == close) {
                if (--depth == 0) {
                    const auto candidate =
                        nlohmann::json::parse(text.substr(start, i - start + 1), nullptr, false);
                    if (!candidate.is_discarded() && pred(candidate)) return candidate;
                    break;
                }
            }
        }
    }
    return std::nullopt;
}

inline std::optional<nlohmann::json> extract_json(const std::string& text, char open, char close) {
    return extract_json_matching(text, open, close, [](const nlohmann::json&) { return true; });
}

inline std::string digest_hex(const std::vector<std::string>& raws) {
    std::uint64_t h = kFnvBasis;
    for (const auto& r : raws) h = fnv1a(h, r.data(), r.size());
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace detail

// Pull the first JSON matrix out of a chat reply, coerce its entries to 0/1,
// and run draft validation. Violations come back as messages the retry
// prompt can carry verbatim.
inline std::variant<WeavingDraft, std::vector<std::string>> validate_repair(
    const std::string& raw) {
    // The first array-of-arrays wins; stray scalars or flat arrays are skipped.
    const auto matrix = detail::extract_json_matching(raw, '[', ']', [](const nlohmann::json& j) {
        return j.is_array() && !j.empty() && j[0].is_array();
    });
    if (!matrix) throw ExtractionError("no weaving matrix found in the response");

    std::vector<std::string> violations;
    const auto& rows = *matrix;
    WeavingDraft d(static_cast<int>(rows.size()),
                   rows[0].is_array() ? static_cast<int>(rows[0].size()) : 0);
    if (d.rows > kMaxDraftSize || d.cols > kMaxDraftSize) {
        violations.push_back("draft is " + std::to_string(d.rows) + "x" + std::to_string(d.cols) +
                             ", the maximum is 16x16");
        return violations;
    }
    for (size_t i = 0; i < rows.size(); ++i) {
        if (!rows[i].is_array() || static_cast<int>(rows[i].size()) != d.cols) {
            violations.push_back("row " + std::to_string(i) + " does not match the first row's length");
            continue;
        }
        for (size_t j = 0; j < rows[i].size(); ++j) {
            const auto& cell = rows[i][j];
            double v = -1.0;
            if (cell.is_number()) v = cell.get<double>();
            if (v != 0.0 && v != 1.0) {
                violations.push_back("entry (" + std::to_string(i) + "," + std::to_string(j) +
                                     ") must be 0 or 1");
                continue;
            }
            d.at(static_cast<int>(i), static_cast<int>(j)) = v == 1.0 ? 1 : 0;
        }
    }
    if (d.cols == 0) violations.push_back("rows must be non-empty arrays");
    if (!violations.empty()) return violations;

    const auto report = validate_draft(d);
    if (!report.valid()) {
        for (const auto& v : report.violations) violations.push_back(v.message);
        return violations;
    }
    return d;
}

namespace detail {

inline std::string draft_instruction() {
    return "You design weaving drafts. Reply with ONLY a JSON array of arrays for one repeat of "
           "the requested weave: entry 1 means the warp passes over the weft, 0 means under. "
           "Use at most 16 rows and 16 columns. Every row and every column must contain at "
           "least one 0 and one 1 so no yarn floats across the whole repeat. No prose, no "
           "markdown, just the matrix.";
}

inline std::string params_instruction(const std::string& prompt, const WeavingDraft& draft) {
    nlohmann::json example = params_to_json(default_params(WeaveFamily::twill));
    return "You pick fabric appearance parameters. Reply with ONLY one JSON object in exactly "
           "this shape (same keys, numbers in sensible ranges: max_inclination in (0,1.57), "
           "width in (0,1], roughness in (0,1], ply_count 1..8, repeat 1..16):\n" +
           example.dump(2) +
           "\nSmooth lustrous fabrics want low roughness and high specular; matte rough ones "
           "the opposite. The fabric: \"" +
           prompt + "\". Its weaving draft:\n" + serialize_draft(draft, false);
}

inline DesignResult rule_based_design(const std::string& prompt) {
    DesignResult result;
    result.family = family_from_keywords(prompt);
    result.draft = generate_pattern(default_pattern(result.family));
    result.params = default_params(result.family);
    result.provenance = Provenance::rule_based;
    return result;
}

}  // namespace detail

// Produce a validated (draft, parameters) pair. Structured requests run the
// rule-based generators; free-text requests drive the external endpoint in
// two stages (draft, then parameters), each followed by validation with up
// to max_repair_retries corrective round trips. When the endpoint cannot be
// reached or never yields a valid design, the keyword fallback takes over
// unless fallback is disabled.
inline DesignResult design(const DesignRequest& req, ChatClient* client,
                           const DesignOptions& opts = {}) {
    if (req.structured.has_value() == req.prompt.has_value())
        throw DesignRejected("request must carry exactly one of: structured spec, prompt");

    if (req.structured) {
        DesignResult result;
        result.family = req.structured->family;
        result.draft = generate_pattern(*req.structured);
        nlohmann::json doc = params_to_json(default_params(result.family));
        if (!req.overrides.is_null() && !req.overrides.empty()) {
            doc.merge_patch(req.overrides);
            const auto errors = validate_params_json(doc);
            if (!errors.empty()) {
                std::string msg = "overrides rejected:";
                for (const auto& e : errors) msg += "\n  - " + e;
                throw DesignRejected(msg);
            }
        }
        result.params = params_from_json(doc);
        result.provenance = Provenance::rule_based;
        return result;
    }

    const std::string& prompt = *req.prompt;
    DesignResult result;
    result.family = family_from_keywords(prompt);

    if (!client) {
        if (!opts.allow_fallback)
            throw DesignRejected("no endpoint configured and fallback disabled");
        return detail::rule_based_design(prompt);
    }

    std::vector<std::string> raws;
    try {
        // Stage 1: the draft matrix.
        std::optional<WeavingDraft> draft;
        std::vector<ChatMessage> messages = {{"system", detail::draft_instruction()},
                                             {"user", prompt}};
        for (int attempt = 0; attempt <= opts.max_repair_retries && !draft; ++attempt) {
            const std::string raw = client->complete(messages);
            raws.push_back(raw);
            std::vector<std::string> violations;
            try {
                auto outcome = validate_repair(raw);
                if (std::holds_alternative<WeavingDraft>(outcome)) {
                    draft = std::get<WeavingDraft>(outcome);
                    break;
                }
                violations = std::get<std::vector<std::string>>(outcome);
            } catch (const ExtractionError& e) {
                violations = {e.what()};
            }
            std::string repair = "The draft was rejected:";
            for (const auto& v : violations) repair += "\n- " + v;
            repair += "\nReply with only the corrected JSON matrix.";
            result.repair_log.push_back("draft attempt " + std::to_string(attempt + 1) + ": " +
                                        repair);
            messages.push_back({"assistant", raw});
            messages.push_back({"user", repair});
        }
        if (!draft) throw DesignRejected("endpoint never produced a valid draft");
        result.draft = *draft;

        // Stage 2: the parameter document, validated against the schema.
        std::optional<FabricParams> params;
        std::vector<ChatMessage> pmessages = {
            {"system", detail::params_instruction(prompt, *draft)}, {"user", prompt}};
        for (int attempt = 0; attempt <= opts.max_repair_retries && !params; ++attempt) {
            const std::string raw = client->complete(pmessages);
            raws.push_back(raw);
            std::vector<std::string> violations;
            const auto doc = detail::extract_json(raw, '{', '}');
            if (!doc) {
                violations = {"no JSON object found in the response"};
            } else {
                violations = validate_params_json(*doc);
                if (violations.empty()) {
                    params = params_from_json(*doc);
                    break;
                }
            }
            std::string repair = "The parameter document was rejected:";
            for (const auto& v : violations) repair += "\n- " + v;
            repair += "\nReply with only the corrected JSON object.";
            result.repair_log.push_back("params attempt " + std::to_string(attempt + 1) + ": " +
                                        repair);
            pmessages.push_back({"assistant", raw});
            pmessages.push_back({"user", repair});
        }
        if (!params) {
            // A valid draft with stubborn parameters: keep the draft, preset
            // the rest.
            result.repair_log.push_back("parameter stage exhausted retries; using " +
                                        std::string(family_name(result.family)) + " presets");
            params = default_params(result.family);
        }
        result.params = *params;
        result.provenance = Provenance::external_endpoint;
        result.response_digest = detail::digest_hex(raws);
        return result;
    } catch (const EndpointError& e) {
        if (!opts.allow_fallback) throw;
        auto fallback = detail::rule_based_design(prompt);
        fallback.repair_log = result.repair_log;
        fallback.repair_log.push_back(std::string("endpoint failed, fell back to presets: ") +
                                      e.what());
        return fallback;
    } catch (const DesignRejected& e) {
        if (!opts.allow_fallback) throw;
        auto fallback = detail::rule_based_design(prompt);
        fallback.repair_log = result.repair_log;
        fallback.repair_log.push_back(std::string("design rejected, fell back to presets: ") +
                                      e.what());
        return fallback;
    }
}

}  // namespace weft
