#pragma once
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "best/backend.hpp"
#include "best/clue_extractor.hpp"
#include "best/errors.hpp"
#include "best/prompt.hpp"
#include "best/text.hpp"

namespace best {

// Everything a corpus run needs, loadable from a sectioned key-value file.
// Field defaults are the framework's standard settings; the file only has
// to mention what differs.
struct RunConfig {
    BackendConfig backend;
    std::string tag_vocab_path;
    std::string attr_vocab_path;
    std::string object_vocab_path;    // naive scene-graph baseline only
    std::string relation_vocab_path;  // naive scene-graph baseline only
    std::string cache_path;           // embedding cache, optional
    std::string lexicon_path;         // synonym lexicon, optional here
    std::string answers_path;         // VQA answer index, optional
    ClueParams clues;
    double gamma = 0.2;
    int candidates = 40;
    SizeThresholds sizes;
    CompletionParams sampling;
    TaskEnding ending = TaskEnding::describe();
    std::size_t workers = 1;

    void validate() const {
        backend.validate();
        clues.validate();
        sizes.validate();
        if (gamma < -1.0 || gamma > 1.0) throw ConfigError("gamma must be in [-1, 1]");
        if (candidates < 1 || (candidates > 1 && candidates % 2 != 0))
            throw ConfigError("candidates must be 1 or an even count");
        if (sampling.max_tokens <= 0) throw ConfigError("max_tokens must be positive");
        if (sampling.temperature < 0.0) throw ConfigError("temperature must be non-negative");
        if (workers == 0) throw ConfigError("workers must be positive");
    }
};

namespace detail {

inline double config_real(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("key \"" + key + "\" needs a number, got \"" + value + "\"");
    }
}

inline long long config_int(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const long long v = std::stoll(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("key \"" + key + "\" needs an integer, got \"" + value + "\"");
    }
}

inline bool config_bool(const std::string& key, const std::string& value) {
    const auto v = ascii_lower(value);
    if (v == "true" || v == "yes" || v == "1") return true;
    if (v == "false" || v == "no" || v == "0") return false;
    throw ConfigError("key \"" + key + "\" needs true/false, got \"" + value + "\"");
}

}  // namespace detail

// Parses the sectioned key=value format:
//   [section]
//   key = value     # full-line comments start with # or ;
// Unknown sections or keys are errors (typos should not silently become
// defaults). Relative paths resolve against the config file's directory,
// and every referenced file must exist.
inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    const auto config_dir = std::filesystem::absolute(path).parent_path();

    RunConfig config;
    std::string task_kind = "describe";
    std::string task_text;

    auto resolve = [&](const std::string& p) {
        const std::filesystem::path fp(p);
        return (fp.is_absolute() ? fp : config_dir / fp).lexically_normal().string();
    };

    std::string section;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto t = trim(line);
        if (t.empty() || t.front() == '#' || t.front() == ';') continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                throw ConfigError("line " + std::to_string(line_no) + ": unterminated section");
            section = ascii_lower(trim(t.substr(1, t.size() - 2)));
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
        const std::string key = ascii_lower(trim(t.substr(0, eq)));
        const std::string value{trim(t.substr(eq + 1))};
        if (key.empty())
            throw ConfigError("line " + std::to_string(line_no) + ": empty key");
        const std::string qualified = section + "." + key;

        if (qualified == "backend.kind") {
            if (value == "mock") config.backend.kind = BackendKind::mock;
            else if (value == "remote") config.backend.kind = BackendKind::remote;
            else throw ConfigError("backend.kind must be mock or remote, got \"" + value + "\"");
        } else if (qualified == "backend.seed") {
            config.backend.seed = static_cast<std::uint64_t>(detail::config_int(key, value));
        } else if (qualified == "backend.dim") {
            const auto v = detail::config_int(key, value);
            if (v < 1) throw ConfigError("backend.dim must be positive");
            config.backend.dim = static_cast<std::size_t>(v);
        } else if (qualified == "backend.base_url") {
            config.backend.base_url = value;
        } else if (qualified == "backend.embed_text_url") {
            config.backend.embed_text_url = value;
        } else if (qualified == "backend.embed_image_url") {
            config.backend.embed_image_url = value;
        } else if (qualified == "backend.caption_url") {
            config.backend.caption_url = value;
        } else if (qualified == "backend.detect_url") {
            config.backend.detect_url = value;
        } else if (qualified == "backend.complete_url") {
            config.backend.complete_url = value;
        } else if (qualified == "backend.bearer_token") {
            config.backend.bearer_token = value;
        } else if (qualified == "backend.timeout_ms") {
            const auto v = detail::config_int(key, value);
            if (v < 1) throw ConfigError("backend.timeout_ms must be positive");
            config.backend.timeout_ms = static_cast<int>(v);
        } else if (qualified == "backend.max_in_flight") {
            const auto v = detail::config_int(key, value);
            if (v < 1) throw ConfigError("backend.max_in_flight must be positive");
            config.backend.max_in_flight = static_cast<int>(v);
        } else if (qualified == "vocab.tags") {
            config.tag_vocab_path = resolve(value);
        } else if (qualified == "vocab.attributes") {
            config.attr_vocab_path = resolve(value);
        } else if (qualified == "vocab.objects") {
            config.object_vocab_path = resolve(value);
        } else if (qualified == "vocab.relations") {
            config.relation_vocab_path = resolve(value);
        } else if (qualified == "vocab.cache") {
            config.cache_path = resolve(value);
        } else if (qualified == "params.top_m") {
            const auto v = detail::config_int(key, value);
            if (v < 1) throw ConfigError("params.top_m must be positive");
            config.clues.top_m = static_cast<std::size_t>(v);
        } else if (qualified == "params.beta") {
            config.clues.beta = detail::config_real(key, value);
        } else if (qualified == "params.gamma") {
            config.gamma = detail::config_real(key, value);
        } else if (qualified == "params.candidates") {
            config.candidates = static_cast<int>(detail::config_int(key, value));
        } else if (qualified == "params.nms_iou") {
            config.clues.nms_iou = detail::config_real(key, value);
        } else if (qualified == "params.nms_keep") {
            const auto v = detail::config_int(key, value);
            if (v < 1) throw ConfigError("params.nms_keep must be positive");
            config.clues.nms_keep = static_cast<std::size_t>(v);
        } else if (qualified == "params.min_area_fraction") {
            config.clues.min_area_fraction = detail::config_real(key, value);
        } else if (qualified == "params.size_large") {
            config.sizes.large = detail::config_real(key, value);
        } else if (qualified == "params.size_moderate") {
            config.sizes.moderate = detail::config_real(key, value);
        } else if (qualified == "params.region_captions") {
            config.clues.with_region_captions = detail::config_bool(key, value);
        } else if (qualified == "sampling.temperature") {
            config.sampling.temperature = detail::config_real(key, value);
        } else if (qualified == "sampling.frequency_penalty") {
            config.sampling.frequency_penalty = detail::config_real(key, value);
        } else if (qualified == "sampling.max_tokens") {
            config.sampling.max_tokens = static_cast<int>(detail::config_int(key, value));
        } else if (qualified == "task.ending") {
            task_kind = value;
        } else if (qualified == "task.custom_text") {
            task_text = value;
        } else if (qualified == "run.workers") {
            const auto v = detail::config_int(key, value);
            if (v < 1) throw ConfigError("run.workers must be positive");
            config.workers = static_cast<std::size_t>(v);
        } else if (qualified == "run.lexicon") {
            config.lexicon_path = resolve(value);
        } else if (qualified == "run.answers") {
            config.answers_path = resolve(value);
        } else {
            throw ConfigError("line " + std::to_string(line_no) + ": unknown key \"" +
                              qualified + "\"");
        }
    }

    if (task_kind == "describe") config.ending = TaskEnding::describe();
    else if (task_kind == "story") config.ending = TaskEnding::story();
    else if (task_kind == "ads") config.ending = TaskEnding::ads();
    else if (task_kind == "social") config.ending = TaskEnding::social();
    else if (task_kind == "textbook") config.ending = TaskEnding::textbook();
    else if (task_kind == "custom") {
        if (task_text.empty()) throw ConfigError("task.ending = custom needs task.custom_text");
        config.ending = TaskEnding::custom(task_text);
    } else {
        throw ConfigError("task.ending must be describe/story/ads/social/textbook/custom, got \"" +
                          task_kind + "\"");
    }

    for (const auto* p : {&config.tag_vocab_path, &config.attr_vocab_path,
                          &config.object_vocab_path, &config.relation_vocab_path,
                          &config.lexicon_path, &config.answers_path}) {
        if (!p->empty() && !std::filesystem::exists(*p))
            throw ConfigError("referenced file does not exist: " + *p);
    }

    try {
        config.validate();
    } catch (const InvalidInput& e) {
        throw ConfigError(e.what());
    }
    return config;
}

}  // namespace best
