#pragma once
#include <algorithm>
#include <optional>
#include <utility>

#include "best/errors.hpp"

namespace best {

struct ImageDims {
    int width = 0;
    int height = 0;

    double area() const { return static_cast<double>(width) * static_cast<double>(height); }
    bool valid() const { return width > 0 && height > 0; }
};

// Axis-aligned box in image pixel coordinates, origin top-left,
// y growing downward. `score` is the detector confidence.
struct BoundingBox {
    double x_min = 0;
    double y_min = 0;
    double x_max = 0;
    double y_max = 0;
    double score = 0;

    double width() const { return x_max - x_min; }
    double height() const { return y_max - y_min; }
    double area() const { return width() > 0 && height() > 0 ? width() * height() : 0.0; }
    bool valid() const { return x_max > x_min && y_max > y_min; }

    std::pair<double, double> center() const {
        return {(x_min + x_max) / 2.0, (y_min + y_max) / 2.0};
    }

    bool operator==(const BoundingBox& other) const {
        return x_min == other.x_min && y_min == other.y_min && x_max == other.x_max &&
               y_max == other.y_max && score == other.score;
    }
};

inline double iou(const BoundingBox& a, const BoundingBox& b) {
    const double ix = std::max(0.0, std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min));
    const double iy = std::max(0.0, std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min));
    const double inter = ix * iy;
    const double uni = a.area() + b.area() - inter;
    return uni > 0.0 ? inter / uni : 0.0;
}

// Clamps a box into the image frame; nullopt if nothing of it remains.
inline std::optional<BoundingBox> clamp_to_frame(const BoundingBox& box, const ImageDims& dims) {
    BoundingBox c = box;
    c.x_min = std::clamp(c.x_min, 0.0, static_cast<double>(dims.width));
    c.x_max = std::clamp(c.x_max, 0.0, static_cast<double>(dims.width));
    c.y_min = std::clamp(c.y_min, 0.0, static_cast<double>(dims.height));
    c.y_max = std::clamp(c.y_max, 0.0, static_cast<double>(dims.height));
    if (!c.valid()) return std::nullopt;
    return c;
}

inline bool covers_frame(const BoundingBox& box, const ImageDims& dims) {
    return box.x_min <= 0.0 && box.y_min <= 0.0 &&
           box.x_max >= static_cast<double>(dims.width) &&
           box.y_max >= static_cast<double>(dims.height);
}

// Minimum box covering both inputs.
inline BoundingBox union_box(const BoundingBox& a, const BoundingBox& b) {
    BoundingBox u;
    u.x_min = std::min(a.x_min, b.x_min);
    u.y_min = std::min(a.y_min, b.y_min);
    u.x_max = std::max(a.x_max, b.x_max);
    u.y_max = std::max(a.y_max, b.y_max);
    u.score = std::max(a.score, b.score);
    return u;
}

inline BoundingBox full_frame(const ImageDims& dims) {
    return BoundingBox{0.0, 0.0, static_cast<double>(dims.width),
                       static_cast<double>(dims.height), 1.0};
}

}  // namespace best
