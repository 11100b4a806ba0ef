#pragma once
#include <optional>
#include <string>
#include <vector>

#include "best/errors.hpp"
#include "best/gateway.hpp"
#include "best/image.hpp"
#include "best/nms.hpp"
#include "best/selection.hpp"
#include "best/visual_clues.hpp"
#include "best/vocabulary.hpp"

namespace best {

struct ClueParams {
    std::size_t top_m = 5;            // global tags kept
    double beta = 0.2;                // region/tag alignment threshold
    double nms_iou = 0.5;             // proposal overlap suppression
    std::size_t nms_keep = 100;       // proposal cap before pruning
    double min_area_fraction = 1.0 / 400.0;
    bool with_region_captions = true;

    void validate() const {
        if (top_m == 0) throw InvalidInput("top_m must be positive");
        if (beta < -1.0 || beta > 1.0) throw InvalidInput("beta must be in [-1, 1]");
        if (nms_iou <= 0.0 || nms_iou > 1.0) throw InvalidInput("nms_iou must be in (0, 1]");
        if (nms_keep == 0) throw InvalidInput("nms_keep must be positive");
        if (min_area_fraction <= 0.0 || min_area_fraction >= 1.0)
            throw InvalidInput("min_area_fraction must be in (0, 1)");
    }
};

// Full clue pipeline for one image:
//   detect -> nms -> prune_small -> embed crops -> keep regions where some
//   tag clears beta -> per-region attribute/tags/caption, plus the global
//   caption and top-M tags. BackendErrors are re-thrown tagged with the
//   pipeline stage that raised them.
inline VisualClues extract_clues(const ImageData& image, const Vocabulary& tag_vocab,
                                 const Vocabulary& attr_vocab, ModelGateway& gateway,
                                 const ClueParams& params = {},
                                 const std::optional<std::string>& ocr_text = std::nullopt) {
    params.validate();
    tag_vocab.validate();
    attr_vocab.validate();

    VisualClues clues;
    clues.image_id = image.id;
    clues.ocr_text = ocr_text;

    auto staged = [](const char* stage, auto&& fn) {
        try {
            return fn();
        } catch (const BackendError& e) {
            throw e.with_stage(stage);
        }
    };

    const auto image_emb = staged("embed_image", [&] { return gateway.embed_image(image); });
    clues.tags = select_top_tags(image_emb, tag_vocab, params.top_m);

    const auto caption = staged("caption", [&] { return gateway.caption_image(image); });
    if (!caption.empty()) clues.caption = caption;

    auto proposals = staged("detect", [&] { return gateway.detect(image); });
    proposals = nms(proposals, params.nms_iou, params.nms_keep);
    proposals = prune_small(proposals, image.dims(), params.min_area_fraction);
    if (proposals.empty()) return clues;

    const auto region_embs =
        staged("embed_regions", [&] { return gateway.embed_regions(image, proposals); });
    const auto selected = select_regions(region_embs, tag_vocab, params.beta);
    if (selected.empty()) return clues;

    std::vector<BoundingBox> selected_boxes;
    for (auto j : selected) selected_boxes.push_back(proposals[j]);
    std::vector<std::string> captions;
    if (params.with_region_captions)
        captions = staged("caption_regions",
                          [&] { return gateway.caption_regions(image, selected_boxes); });

    for (std::size_t k = 0; k < selected.size(); ++k) {
        const auto j = selected[k];
        RegionDescription region;
        region.box = proposals[j];
        auto [attr, attr_score] = assign_attribute(region_embs[j], attr_vocab);
        region.attribute = attr;
        region.attribute_score = attr_score;
        region.tags = region_tags(region_embs[j], tag_vocab, params.beta);
        if (params.with_region_captions && !captions[k].empty()) region.caption = captions[k];
        clues.regions.push_back(std::move(region));
    }
    return clues;
}

}  // namespace best
