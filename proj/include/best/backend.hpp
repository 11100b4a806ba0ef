#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "best/errors.hpp"
#include "best/geometry.hpp"
#include "best/image.hpp"

namespace best {

// Language-model sampling parameters. Defaults match the framework's
// standard candidate-synthesis setup.
struct CompletionParams {
    double temperature = 0.8;
    double frequency_penalty = 0.5;
    int max_tokens = 100;
    int n = 1;
};

enum class Capability { embed_text, embed_image, caption, detect, complete };

inline const char* capability_path(Capability c) {
    switch (c) {
        case Capability::embed_text: return "/v1/embed_text";
        case Capability::embed_image: return "/v1/embed_image";
        case Capability::caption: return "/v1/caption";
        case Capability::detect: return "/v1/detect";
        case Capability::complete: return "/v1/complete";
    }
    return "";
}

enum class BackendKind { mock, remote };

// Connection settings for the five model capabilities. A capability's URL
// falls back to base_url + its default path when no override is given.
struct BackendConfig {
    BackendKind kind = BackendKind::mock;
    std::uint64_t seed = 0;        // mock backends only
    std::size_t dim = 512;         // embedding dimension d
    int timeout_ms = 30000;
    int max_in_flight = 8;         // per-capability cap on concurrent remote calls
    std::string base_url;
    std::string embed_text_url;
    std::string embed_image_url;
    std::string caption_url;
    std::string detect_url;
    std::string complete_url;
    std::string bearer_token;

    std::string url_for(Capability c) const {
        const std::string* override_url = nullptr;
        switch (c) {
            case Capability::embed_text: override_url = &embed_text_url; break;
            case Capability::embed_image: override_url = &embed_image_url; break;
            case Capability::caption: override_url = &caption_url; break;
            case Capability::detect: override_url = &detect_url; break;
            case Capability::complete: override_url = &complete_url; break;
        }
        if (override_url && !override_url->empty()) return *override_url;
        return base_url + capability_path(c);
    }

    void validate() const {
        if (timeout_ms <= 0) throw InvalidInput("backend config: timeout must be > 0");
        if (max_in_flight < 1) throw InvalidInput("backend config: max in-flight must be >= 1");
        if (dim == 0) throw InvalidInput("backend config: embedding dimension must be >= 1");
        if (kind == BackendKind::remote && base_url.empty() &&
            (embed_text_url.empty() || embed_image_url.empty() || caption_url.empty() ||
             detect_url.empty() || complete_url.empty()))
            throw InvalidInput("backend config: remote backend needs a base_url or per-capability URLs");
    }
};

// Raw access to the five model capabilities. Implementations do no
// normalization or clamping; the gateway owns those contracts.
class Backend {
public:
    virtual ~Backend() = default;

    virtual std::size_t dim() const = 0;
    virtual std::string name() const = 0;

    virtual std::vector<std::vector<double>> embed_texts(const std::vector<std::string>& texts) = 0;

    // One embedding per box; whole image when `boxes` is empty.
    virtual std::vector<std::vector<double>> embed_image(const ImageData& image,
                                                         const std::vector<BoundingBox>& boxes) = 0;

    // One caption per box; whole image when `boxes` is empty.
    virtual std::vector<std::string> caption(const ImageData& image,
                                             const std::vector<BoundingBox>& boxes) = 0;

    virtual std::vector<BoundingBox> detect(const ImageData& image) = 0;

    virtual std::vector<std::string> complete(const std::string& prompt,
                                              const CompletionParams& params) = 0;
};

}  // namespace best
