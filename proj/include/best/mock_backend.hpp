#pragma once
#include <algorithm>
#include <array>
#include <cctype>
#include <cstdio>
#include <string>
#include <vector>

#include "best/backend.hpp"
#include "best/hash.hpp"

namespace best {

// Deterministic offline stand-in for the real model services. Every output
// is a pure function of (seed, input), so two instances with equal seeds
// are interchangeable and repeated calls are bit-identical.
class MockBackend : public Backend {
public:
    explicit MockBackend(std::uint64_t seed, std::size_t dim = 512) : seed_(seed), dim_(dim) {
        if (dim_ == 0) throw InvalidInput("mock backend: dimension must be >= 1");
    }

    std::size_t dim() const override { return dim_; }
    std::string name() const override { return "mock(seed=" + std::to_string(seed_) + ")"; }

    std::vector<std::vector<double>> embed_texts(const std::vector<std::string>& texts) override {
        std::vector<std::vector<double>> out;
        out.reserve(texts.size());
        for (const auto& t : texts) out.push_back(text_features(t));
        return out;
    }

    std::vector<std::vector<double>> embed_image(const ImageData& image,
                                                 const std::vector<BoundingBox>& boxes) override {
        std::vector<std::vector<double>> out;
        if (boxes.empty()) {
            out.push_back(token_features(image_key(image)));
        } else {
            out.reserve(boxes.size());
            for (const auto& b : boxes) out.push_back(token_features(region_key(image, b)));
        }
        return out;
    }

    std::vector<std::string> caption(const ImageData& image,
                                     const std::vector<BoundingBox>& boxes) override {
        std::vector<std::string> out;
        if (boxes.empty()) {
            out.push_back(caption_for(image_key(image)));
        } else {
            out.reserve(boxes.size());
            for (const auto& b : boxes) out.push_back(caption_for(region_key(image, b)));
        }
        return out;
    }

    std::vector<BoundingBox> detect(const ImageData& image) override {
        const std::uint64_t h = mix64(seed_, mix64(fnv1a64(image.bytes.data(), image.bytes.size()),
                                                   0xde7ec7ULL));
        SplitMix64 rng(h);
        const double w = std::max(1, image.width);
        const double hh = std::max(1, image.height);
        const std::size_t n = 4 + static_cast<std::size_t>(rng.below(5));
        std::vector<BoundingBox> boxes;
        boxes.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            BoundingBox b;
            const double cx = rng.uniform(0.1, 0.9) * w;
            const double cy = rng.uniform(0.1, 0.9) * hh;
            const double bw = rng.uniform(0.08, 0.55) * w;
            const double bh = rng.uniform(0.08, 0.55) * hh;
            b.x_min = std::max(0.0, cx - bw / 2.0);
            b.x_max = std::min(w, cx + bw / 2.0);
            b.y_min = std::max(0.0, cy - bh / 2.0);
            b.y_max = std::min(hh, cy + bh / 2.0);
            b.score = rng.uniform(0.3, 1.0);
            if (b.valid()) boxes.push_back(b);
        }
        std::stable_sort(boxes.begin(), boxes.end(),
                         [](const BoundingBox& a, const BoundingBox& b) { return a.score > b.score; });
        return boxes;
    }

    std::vector<std::string> complete(const std::string& prompt,
                                      const CompletionParams& params) override {
        std::vector<std::string> out;
        out.reserve(static_cast<std::size_t>(params.n));
        const std::uint64_t ph = fnv1a64(prompt);
        for (int i = 0; i < params.n; ++i) {
            SplitMix64 rng(mix64(seed_, mix64(ph, 0xc0117e7eULL + static_cast<std::uint64_t>(i))));
            out.push_back(paragraph(rng));
        }
        return out;
    }

private:
    std::string image_key(const ImageData& image) const {
        return "img:" + hex8(fnv1a64(image.bytes.data(), image.bytes.size()));
    }

    std::string region_key(const ImageData& image, const BoundingBox& b) const {
        char buf[96];
        std::snprintf(buf, sizeof(buf), "|box:%.4f:%.4f:%.4f:%.4f", b.x_min, b.y_min, b.x_max,
                      b.y_max);
        return image_key(image) + buf;
    }

    std::string caption_for(const std::string& key) const {
        return "mock caption " + hex8(mix64(seed_, mix64(fnv1a64(key), 0xcaf7ULL)));
    }

    // Bag of seeded token features, L2-normalized by the gateway.
    std::vector<double> text_features(const std::string& text) const {
        std::vector<double> acc(dim_, 0.0);
        std::string token;
        bool any = false;
        auto flush = [&] {
            if (token.empty()) return;
            add_token(acc, token);
            token.clear();
            any = true;
        };
        for (char c : text) {
            const unsigned char u = static_cast<unsigned char>(c);
            if (std::isalnum(u))
                token.push_back(static_cast<char>(std::tolower(u)));
            else
                flush();
        }
        flush();
        if (!any) add_token(acc, text);
        return acc;
    }

    std::vector<double> token_features(const std::string& token) const {
        std::vector<double> acc(dim_, 0.0);
        add_token(acc, token);
        return acc;
    }

    void add_token(std::vector<double>& acc, const std::string& token) const {
        SplitMix64 rng(mix64(seed_, fnv1a64(token)));
        for (double& a : acc) a += rng.uniform(-1.0, 1.0);
    }

    std::string paragraph(SplitMix64& rng) const {
        static const std::array<const char*, 16> nouns = {
            "table", "window", "garden", "bicycle", "lantern", "harbor", "meadow", "rooftop",
            "market", "bridge", "statue", "orchard", "kitchen", "tower", "pathway", "canal"};
        static const std::array<const char*, 12> adjectives = {
            "quiet",  "bright", "weathered", "narrow", "distant", "colorful",
            "sunlit", "busy",   "calm",      "old",    "shaded",  "open"};
        auto noun = [&] { return std::string(nouns[rng.below(nouns.size())]); };
        auto adj = [&] { return std::string(adjectives[rng.below(adjectives.size())]); };
        std::string text = "A " + adj() + " " + noun() + " stands near the " + noun() + ". ";
        text += "The " + noun() + " looks " + adj() + " and " + adj() + ".";
        if (rng.below(3) != 0) text += " There is a " + adj() + " " + noun() + " in the " + noun() + ".";
        return text;
    }

    std::uint64_t seed_;
    std::size_t dim_;
};

}  // namespace best
