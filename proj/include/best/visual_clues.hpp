#pragma once
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "best/errors.hpp"
#include "best/geometry.hpp"
#include "best/selection.hpp"

namespace best {

// One selected region: its box plus the assigned attribute, the tags that
// cleared the similarity threshold, and an optional caption for the crop.
struct RegionDescription {
    BoundingBox box;
    std::string attribute;
    double attribute_score = 0.0;
    std::vector<ScoredTag> tags;
    std::optional<std::string> caption;
};

// Everything the prompt is built from: global tags and caption plus the
// per-region descriptions (and OCR text when supplied externally).
struct VisualClues {
    std::string image_id;
    std::vector<ScoredTag> tags;
    std::optional<std::string> caption;
    std::vector<RegionDescription> regions;
    std::optional<std::string> ocr_text;
};

inline nlohmann::ordered_json to_json(const RegionDescription& r) {
    nlohmann::ordered_json j;
    j["box"] = {r.box.x_min, r.box.y_min, r.box.x_max, r.box.y_max};
    j["score"] = r.box.score;
    j["attribute"] = r.attribute;
    j["attribute_score"] = r.attribute_score;
    auto tags = nlohmann::ordered_json::array();
    for (const auto& t : r.tags) {
        nlohmann::ordered_json row;
        row["tag"] = t.tag;
        row["score"] = t.score;
        tags.push_back(std::move(row));
    }
    j["tags"] = std::move(tags);
    if (r.caption) j["caption"] = *r.caption;
    return j;
}

inline nlohmann::ordered_json to_json(const VisualClues& c) {
    nlohmann::ordered_json j;
    j["image"] = c.image_id;
    auto tags = nlohmann::ordered_json::array();
    for (const auto& t : c.tags) {
        nlohmann::ordered_json row;
        row["tag"] = t.tag;
        row["score"] = t.score;
        tags.push_back(std::move(row));
    }
    j["tags"] = std::move(tags);
    if (c.caption) j["caption"] = *c.caption;
    if (c.ocr_text) j["ocr_text"] = *c.ocr_text;
    auto regions = nlohmann::ordered_json::array();
    for (const auto& r : c.regions) regions.push_back(to_json(r));
    j["regions"] = std::move(regions);
    return j;
}

inline RegionDescription region_from_json(const nlohmann::json& j) {
    if (!j.contains("box") || !j["box"].is_array() || j["box"].size() != 4)
        throw InvalidInput("region JSON needs a 4-element box");
    RegionDescription r;
    r.box.x_min = j["box"][0].get<double>();
    r.box.y_min = j["box"][1].get<double>();
    r.box.x_max = j["box"][2].get<double>();
    r.box.y_max = j["box"][3].get<double>();
    r.box.score = j.value("score", 0.0);
    r.attribute = j.value("attribute", std::string{});
    r.attribute_score = j.value("attribute_score", 0.0);
    if (j.contains("tags"))
        for (const auto& row : j["tags"])
            r.tags.push_back({row.at("tag").get<std::string>(), row.value("score", 0.0)});
    if (j.contains("caption")) r.caption = j["caption"].get<std::string>();
    return r;
}

inline VisualClues clues_from_json(const nlohmann::json& j) {
    VisualClues c;
    c.image_id = j.value("image", std::string{});
    if (j.contains("tags"))
        for (const auto& row : j["tags"])
            c.tags.push_back({row.at("tag").get<std::string>(), row.value("score", 0.0)});
    if (j.contains("caption")) c.caption = j["caption"].get<std::string>();
    if (j.contains("ocr_text")) c.ocr_text = j["ocr_text"].get<std::string>();
    if (j.contains("regions"))
        for (const auto& row : j["regions"]) c.regions.push_back(region_from_json(row));
    return c;
}

}  // namespace best
