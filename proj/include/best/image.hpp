#pragma once
#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "best/errors.hpp"
#include "best/geometry.hpp"

namespace best {

// An image as the pipeline sees it: raw file bytes plus the pixel frame.
// Pixels are never decoded here; backends receive the bytes and the frame
// is what boxes get clamped and bucketed against.
struct ImageData {
    std::string id;
    std::vector<std::uint8_t> bytes;
    int width = 0;
    int height = 0;

    ImageDims dims() const { return ImageDims{width, height}; }
};

namespace detail {

inline std::uint32_t be32(const std::uint8_t* p) {
    return (std::uint32_t(p[0]) << 24) | (std::uint32_t(p[1]) << 16) |
           (std::uint32_t(p[2]) << 8) | std::uint32_t(p[3]);
}

inline std::uint32_t le32(const std::uint8_t* p) {
    return std::uint32_t(p[0]) | (std::uint32_t(p[1]) << 8) | (std::uint32_t(p[2]) << 16) |
           (std::uint32_t(p[3]) << 24);
}

inline bool sniff_png(const std::vector<std::uint8_t>& b, int& w, int& h) {
    static const std::uint8_t sig[8] = {0x89, 'P', 'N', 'G', 0x0d, 0x0a, 0x1a, 0x0a};
    if (b.size() < 24 || !std::equal(sig, sig + 8, b.begin())) return false;
    w = static_cast<int>(be32(b.data() + 16));
    h = static_cast<int>(be32(b.data() + 20));
    return w > 0 && h > 0;
}

inline bool sniff_jpeg(const std::vector<std::uint8_t>& b, int& w, int& h) {
    if (b.size() < 4 || b[0] != 0xff || b[1] != 0xd8) return false;
    std::size_t i = 2;
    while (i + 9 < b.size()) {
        if (b[i] != 0xff) return false;
        const std::uint8_t marker = b[i + 1];
        if (marker == 0xd8 || (marker >= 0xd0 && marker <= 0xd7)) {
            i += 2;
            continue;
        }
        const std::size_t len = (std::size_t(b[i + 2]) << 8) | b[i + 3];
        const bool sof = (marker >= 0xc0 && marker <= 0xcf) && marker != 0xc4 &&
                         marker != 0xc8 && marker != 0xcc;
        if (sof) {
            h = (int(b[i + 5]) << 8) | b[i + 6];
            w = (int(b[i + 7]) << 8) | b[i + 8];
            return w > 0 && h > 0;
        }
        i += 2 + len;
    }
    return false;
}

inline bool sniff_bmp(const std::vector<std::uint8_t>& b, int& w, int& h) {
    if (b.size() < 26 || b[0] != 'B' || b[1] != 'M') return false;
    w = static_cast<int>(le32(b.data() + 18));
    h = std::abs(static_cast<int>(le32(b.data() + 22)));
    return w > 0 && h > 0;
}

// Netpbm P5/P6 headers: magic, whitespace/comment separated width height maxval.
inline bool sniff_pnm(const std::vector<std::uint8_t>& b, int& w, int& h) {
    if (b.size() < 7 || b[0] != 'P' || (b[1] != '5' && b[1] != '6')) return false;
    std::size_t i = 2;
    int fields[2] = {0, 0};
    for (int f = 0; f < 2; ++f) {
        while (i < b.size() && (std::isspace(b[i]) || b[i] == '#')) {
            if (b[i] == '#')
                while (i < b.size() && b[i] != '\n') ++i;
            else
                ++i;
        }
        if (i >= b.size() || !std::isdigit(b[i])) return false;
        while (i < b.size() && std::isdigit(b[i])) {
            fields[f] = fields[f] * 10 + (b[i] - '0');
            ++i;
        }
    }
    w = fields[0];
    h = fields[1];
    return w > 0 && h > 0;
}

}  // namespace detail

// Reads file bytes and sniffs the pixel dimensions from the header.
// Supported containers: PNG, JPEG, BMP, PPM/PGM (binary).
inline ImageData load_image(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInput("cannot open image file: " + path);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    ImageData img;
    img.id = std::filesystem::path(path).filename().string();
    img.bytes = std::move(bytes);
    int w = 0, h = 0;
    if (detail::sniff_png(img.bytes, w, h) || detail::sniff_jpeg(img.bytes, w, h) ||
        detail::sniff_bmp(img.bytes, w, h) || detail::sniff_pnm(img.bytes, w, h)) {
        img.width = w;
        img.height = h;
        return img;
    }
    throw InvalidInput("cannot decode image dimensions: " + path);
}

}  // namespace best
