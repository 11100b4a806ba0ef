#pragma once
#include <algorithm>
#include <vector>

#include "best/errors.hpp"
#include "best/geometry.hpp"

namespace best {

// Greedy non-maximum suppression: walk boxes by descending score, keep a box
// when it overlaps no kept box above the threshold, stop at `keep`.
inline std::vector<BoundingBox> nms(const std::vector<BoundingBox>& boxes, double iou_threshold,
                                    std::size_t keep) {
    if (iou_threshold <= 0.0 || iou_threshold > 1.0)
        throw InvalidInput("NMS IoU threshold must be in (0, 1]");
    if (keep == 0) throw InvalidInput("NMS keep count must be positive");
    std::vector<std::size_t> order(boxes.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return boxes[a].score > boxes[b].score;
    });
    std::vector<BoundingBox> kept;
    for (auto idx : order) {
        if (kept.size() == keep) break;
        const auto& candidate = boxes[idx];
        bool suppressed = false;
        for (const auto& k : kept) {
            if (iou(candidate, k) > iou_threshold) {
                suppressed = true;
                break;
            }
        }
        if (!suppressed) kept.push_back(candidate);
    }
    return kept;
}

// Drops boxes whose area is below min_area_fraction of the image area.
inline std::vector<BoundingBox> prune_small(const std::vector<BoundingBox>& boxes,
                                            const ImageDims& dims, double min_area_fraction) {
    if (min_area_fraction <= 0.0 || min_area_fraction >= 1.0)
        throw InvalidInput("min_area_fraction must be in (0, 1)");
    if (!dims.valid()) throw InvalidInput("image dimensions must be positive");
    const double floor_area = min_area_fraction * dims.area();
    std::vector<BoundingBox> out;
    for (const auto& b : boxes)
        if (b.area() >= floor_area) out.push_back(b);
    return out;
}

}  // namespace best
