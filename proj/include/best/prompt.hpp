#pragma once
#include <string>
#include <vector>

#include "best/backend.hpp"
#include "best/errors.hpp"
#include "best/geometry.hpp"
#include "best/visual_clues.hpp"

namespace best {

// 3x3 grid over the image, named from the reader's point of view.
enum class LocationClass {
    upper_left, upper_middle, upper_right,
    left, middle, right,
    lower_left, lower_middle, lower_right,
};

inline const char* to_string(LocationClass c) {
    switch (c) {
        case LocationClass::upper_left: return "upper left";
        case LocationClass::upper_middle: return "upper middle";
        case LocationClass::upper_right: return "upper right";
        case LocationClass::left: return "left";
        case LocationClass::middle: return "middle";
        case LocationClass::right: return "right";
        case LocationClass::lower_left: return "lower left";
        case LocationClass::lower_middle: return "lower middle";
        case LocationClass::lower_right: return "lower right";
    }
    return "middle";
}

enum class SizeClass { large, moderate, small };

inline const char* to_string(SizeClass c) {
    switch (c) {
        case SizeClass::large: return "large";
        case SizeClass::moderate: return "moderate-sized";
        case SizeClass::small: return "small";
    }
    return "small";
}

struct SizeThresholds {
    double large = 0.25;     // area fraction at or above -> "large"
    double moderate = 0.05;  // at or above -> "moderate-sized"; below -> "small"

    void validate() const {
        if (!(moderate > 0.0 && moderate < large && large < 1.0))
            throw InvalidInput("size thresholds must satisfy 0 < moderate < large < 1");
    }
};

// Grid cell of the box center. Cells are half-open ([0,1/3), [1/3,2/3)) with
// the last cell closed, so every in-frame center lands in exactly one class.
inline LocationClass bucket_location(const BoundingBox& box, const ImageDims& dims) {
    if (!dims.valid()) throw InvalidInput("image dimensions must be positive");
    if (box.area() <= 0.0) throw InvalidInput("cannot locate a zero-area box");
    const auto [cx, cy] = box.center();
    const double nx = cx / dims.width;
    const double ny = cy / dims.height;
    if (nx < 0.0 || nx > 1.0 || ny < 0.0 || ny > 1.0)
        throw InvalidInput("box center lies outside the image frame");
    const auto cell = [](double v) { return v < 1.0 / 3.0 ? 0 : v < 2.0 / 3.0 ? 1 : 2; };
    static constexpr LocationClass grid[3][3] = {
        {LocationClass::upper_left, LocationClass::upper_middle, LocationClass::upper_right},
        {LocationClass::left, LocationClass::middle, LocationClass::right},
        {LocationClass::lower_left, LocationClass::lower_middle, LocationClass::lower_right},
    };
    return grid[cell(ny)][cell(nx)];
}

inline SizeClass bucket_size(const BoundingBox& box, const ImageDims& dims,
                             const SizeThresholds& thresholds = {}) {
    if (!dims.valid()) throw InvalidInput("image dimensions must be positive");
    thresholds.validate();
    const double fraction = box.area() / dims.area();
    if (fraction >= thresholds.large) return SizeClass::large;
    if (fraction >= thresholds.moderate) return SizeClass::moderate;
    return SizeClass::small;
}

// The final line of the prompt, which steers the language model's genre.
struct TaskEnding {
    enum class Kind { describe, story, ads, social, textbook, vqa, custom };
    Kind kind = Kind::describe;
    std::string text;  // question for vqa, suffix for custom

    static TaskEnding describe() { return {Kind::describe, {}}; }
    static TaskEnding story() { return {Kind::story, {}}; }
    static TaskEnding ads() { return {Kind::ads, {}}; }
    static TaskEnding social() { return {Kind::social, {}}; }
    static TaskEnding textbook() { return {Kind::textbook, {}}; }
    static TaskEnding vqa(std::string question) { return {Kind::vqa, std::move(question)}; }
    static TaskEnding custom(std::string suffix) { return {Kind::custom, std::move(suffix)}; }

    std::string render() const {
        switch (kind) {
            case Kind::describe: return "Describe this image in detail:";
            case Kind::story: return "Tell me a creative story:";
            case Kind::ads:
                return "Write a product description to sell in eBay or Amazon marketplace "
                       "to get lots of engagement:";
            case Kind::social: return "Social media post:";
            case Kind::textbook: return "Textbook text:";
            case Kind::vqa:
            case Kind::custom:
                if (text.empty()) throw InvalidInput("task ending has no text");
                return text;
        }
        throw InvalidInput("unknown task ending");
    }
};

// One prompt line per region: "<caption>. <noun phrase>, is at <loc> of the
// image and is <size> in the image. Attribute: <attr>". The noun phrase is
// the region's best tag (its attribute when no tag cleared the threshold);
// without a caption the line starts at the noun phrase.
inline std::string region_line(const RegionDescription& region, const ImageDims& dims,
                               const SizeThresholds& thresholds = {}) {
    const std::string noun = region.tags.empty() ? region.attribute : region.tags.front().tag;
    std::string line;
    if (region.caption) line += *region.caption + ". ";
    line += noun;
    line += ", is at ";
    line += to_string(bucket_location(region.box, dims));
    line += " of the image and is ";
    line += to_string(bucket_size(region.box, dims, thresholds));
    line += " in the image. Attribute: ";
    line += region.attribute;
    return line;
}

// Serializes clues into the structured prompt: an objects block, optional OCR
// and caption blocks, the tags block, then the task ending. Blocks are
// blank-line separated; no trailing newline. Byte-stable given equal inputs.
inline std::string serialize_prompt(const VisualClues& clues, const ImageDims& dims,
                                    const TaskEnding& ending, bool include_caption,
                                    const SizeThresholds& thresholds = {}) {
    std::vector<std::string> blocks;
    if (!clues.regions.empty()) {
        std::string block = "Objects in this image:";
        for (const auto& region : clues.regions)
            block += "\n" + region_line(region, dims, thresholds);
        blocks.push_back(std::move(block));
    }
    if (clues.ocr_text) blocks.push_back("This image contains text: " + *clues.ocr_text);
    if (include_caption && clues.caption) blocks.push_back("Caption: \n" + *clues.caption);
    {
        std::string tags_line = "This image is about ";
        for (std::size_t i = 0; i < clues.tags.size(); ++i) {
            if (i) tags_line += ", ";
            tags_line += clues.tags[i].tag;
        }
        blocks.push_back("Tags:\n" + tags_line);
    }
    blocks.push_back(ending.render());
    std::string out;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        if (i) out += "\n\n";
        out += blocks[i];
    }
    return out;
}

// One planned language-model request for candidate synthesis.
struct PromptRequest {
    std::string prompt;
    CompletionParams params;
    bool with_caption = false;
};

// K single-sample requests: the first half include the caption block, the
// second half omit it. K=1 is allowed (caption included); otherwise K must
// be even so the halves balance.
inline std::vector<PromptRequest> synthesis_plan(const VisualClues& clues, const ImageDims& dims,
                                                 const TaskEnding& ending, int k,
                                                 const CompletionParams& params = {},
                                                 const SizeThresholds& thresholds = {}) {
    if (k < 1) throw InvalidInput("candidate count must be positive");
    if (k > 1 && k % 2 != 0) throw InvalidInput("candidate count must be even");
    CompletionParams single = params;
    single.n = 1;
    std::vector<PromptRequest> plan;
    plan.reserve(static_cast<std::size_t>(k));
    const std::string with = serialize_prompt(clues, dims, ending, true, thresholds);
    const std::string without = serialize_prompt(clues, dims, ending, false, thresholds);
    const int with_count = k == 1 ? 1 : k / 2;
    for (int i = 0; i < k; ++i) {
        const bool use_caption = i < with_count;
        plan.push_back({use_caption ? with : without, single, use_caption});
    }
    return plan;
}

}  // namespace best
