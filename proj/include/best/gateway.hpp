#pragma once
#include <algorithm>
#include <array>
#include <condition_variable>
#include <memory>
#include <mutex>
#include <string>
#include <type_traits>
#include <vector>

#include "best/backend.hpp"
#include "best/embedding.hpp"
#include "best/errors.hpp"
#include "best/mock_backend.hpp"
#include "best/http_backend.hpp"

namespace best {

namespace detail {

// Counting semaphore (std::counting_semaphore needs a compile-time max,
// and the cap here comes from runtime config).
class Semaphore {
public:
    explicit Semaphore(std::size_t permits) : permits_(permits) {}

    void acquire() {
        std::unique_lock lock(mutex_);
        cv_.wait(lock, [&] { return permits_ > 0; });
        --permits_;
    }

    void release() {
        {
            std::lock_guard lock(mutex_);
            ++permits_;
        }
        cv_.notify_one();
    }

private:
    std::mutex mutex_;
    std::condition_variable cv_;
    std::size_t permits_;
};

class SemaphoreGuard {
public:
    explicit SemaphoreGuard(Semaphore& sem) : sem_(sem) { sem_.acquire(); }
    ~SemaphoreGuard() { sem_.release(); }
    SemaphoreGuard(const SemaphoreGuard&) = delete;
    SemaphoreGuard& operator=(const SemaphoreGuard&) = delete;

private:
    Semaphore& sem_;
};

}  // namespace detail

// Uniform front door to whatever model backend is configured. All embeddings
// leaving the gateway are unit-normalized; inputs are validated up front so
// backends only ever see well-formed requests; transient backend failures are
// retried once; per-capability in-flight limits bound concurrency.
class ModelGateway {
public:
    ModelGateway(std::shared_ptr<Backend> backend, std::size_t max_in_flight = 8)
        : backend_(std::move(backend)) {
        if (!backend_) throw InvalidInput("gateway requires a backend");
        if (max_in_flight == 0) throw InvalidInput("max_in_flight must be positive");
        for (auto& slot : limits_) slot = std::make_unique<detail::Semaphore>(max_in_flight);
    }

    std::size_t dim() const { return backend_->dim(); }
    std::string backend_name() const { return backend_->name(); }

    UnitEmbedding embed_text(const std::string& text) {
        return embed_texts(std::vector<std::string>{text}).front();
    }

    std::vector<UnitEmbedding> embed_texts(const std::vector<std::string>& texts) {
        if (texts.empty()) return {};
        for (const auto& t : texts)
            if (t.empty()) throw InvalidInput("cannot embed empty text");
        auto raw = with_retry(Capability::embed_text,
                              [&] { return backend_->embed_texts(texts); });
        return normalize_all(raw, Capability::embed_text);
    }

    UnitEmbedding embed_image(const ImageData& image) {
        validate_image(image);
        auto raw = with_retry(Capability::embed_image,
                              [&] { return backend_->embed_image(image, {}); });
        if (raw.size() != 1)
            throw BackendError(capability_path(Capability::embed_image),
                               "expected one whole-image embedding", false);
        return normalize_all(raw, Capability::embed_image).front();
    }

    std::vector<UnitEmbedding> embed_regions(const ImageData& image,
                                             const std::vector<BoundingBox>& boxes) {
        validate_image(image);
        if (boxes.empty()) return {};
        const auto effective = effective_crops(image, boxes);
        auto raw = with_retry(Capability::embed_image,
                              [&] { return backend_->embed_image(image, effective); });
        if (raw.size() != boxes.size())
            throw BackendError(capability_path(Capability::embed_image),
                               "region embedding count mismatch", false);
        return normalize_all(raw, Capability::embed_image);
    }

    std::string caption_image(const ImageData& image) {
        validate_image(image);
        auto out = with_retry(Capability::caption,
                              [&] { return backend_->caption(image, {}); });
        if (out.size() != 1)
            throw BackendError(capability_path(Capability::caption),
                               "expected one whole-image caption", false);
        return out.front();
    }

    std::vector<std::string> caption_regions(const ImageData& image,
                                             const std::vector<BoundingBox>& boxes) {
        validate_image(image);
        if (boxes.empty()) return {};
        const auto effective = effective_crops(image, boxes);
        auto out = with_retry(Capability::caption,
                              [&] { return backend_->caption(image, effective); });
        if (out.size() != boxes.size())
            throw BackendError(capability_path(Capability::caption),
                               "region caption count mismatch", false);
        return out;
    }

    // Detections are returned clamped to the frame, zero-area boxes dropped,
    // scores clamped to [0,1], ordered by descending score (stable).
    std::vector<BoundingBox> detect(const ImageData& image) {
        validate_image(image);
        auto raw = with_retry(Capability::detect, [&] { return backend_->detect(image); });
        std::vector<BoundingBox> out;
        const auto dims = image.dims();
        for (const auto& b : raw) {
            auto clamped = clamp_to_frame(b, dims);
            if (!clamped) continue;
            clamped->score = std::clamp(clamped->score, 0.0, 1.0);
            out.push_back(*clamped);
        }
        std::stable_sort(out.begin(), out.end(),
                         [](const BoundingBox& a, const BoundingBox& b) { return a.score > b.score; });
        return out;
    }

    // Requests n completions; if the backend returns fewer, one retry asks for
    // the remainder. Still short after that -> PartialCompletion.
    std::vector<std::string> complete(const std::string& prompt, const CompletionParams& params) {
        if (prompt.empty()) throw InvalidInput("cannot complete an empty prompt");
        if (params.n <= 0) throw InvalidInput("completion count must be positive");
        const auto want = static_cast<std::size_t>(params.n);
        auto out = with_retry(Capability::complete,
                              [&] { return backend_->complete(prompt, params); });
        if (out.size() > want) out.resize(want);
        if (out.size() < want) {
            CompletionParams rest = params;
            rest.n = static_cast<int>(want - out.size());
            auto more = with_retry(Capability::complete,
                                   [&] { return backend_->complete(prompt, rest); });
            for (auto& s : more) {
                if (out.size() == want) break;
                out.push_back(std::move(s));
            }
        }
        if (out.size() < want) throw PartialCompletion(out.size(), want);
        return out;
    }

private:
    static void validate_image(const ImageData& image) {
        if (image.bytes.empty()) throw InvalidInput("image has no bytes");
        if (!image.dims().valid()) throw InvalidInput("image has non-positive dimensions");
    }

    // Crops must intersect the frame and have positive area once clamped.
    // A crop covering the whole frame is the image itself; pass it through
    // as a frame-sized box so backends see a consistent request shape.
    std::vector<BoundingBox> effective_crops(const ImageData& image,
                                             const std::vector<BoundingBox>& boxes) const {
        const auto dims = image.dims();
        std::vector<BoundingBox> out;
        out.reserve(boxes.size());
        for (const auto& b : boxes) {
            auto clamped = clamp_to_frame(b, dims);
            if (!clamped) throw InvalidInput("crop does not intersect the image frame");
            out.push_back(covers_frame(*clamped, dims) ? full_frame(dims) : *clamped);
        }
        return out;
    }

    std::vector<UnitEmbedding> normalize_all(const std::vector<std::vector<double>>& raw,
                                             Capability cap) const {
        std::vector<UnitEmbedding> out;
        out.reserve(raw.size());
        for (const auto& v : raw) {
            try {
                out.push_back(UnitEmbedding::normalized(v));
            } catch (const InvalidInput& e) {
                throw BackendError(capability_path(cap),
                                   std::string("unusable embedding: ") + e.what(), false);
            }
        }
        return out;
    }

    template <typename Fn>
    std::invoke_result_t<Fn&> with_retry(Capability cap, Fn&& fn) {
        detail::SemaphoreGuard guard(*limits_[static_cast<std::size_t>(cap)]);
        try {
            return fn();
        } catch (const BackendError& e) {
            if (!e.retryable()) throw;
            return fn();
        }
    }

    std::shared_ptr<Backend> backend_;
    std::array<std::unique_ptr<detail::Semaphore>, 5> limits_;
};

inline std::shared_ptr<ModelGateway> make_gateway(const BackendConfig& config) {
    config.validate();
    std::shared_ptr<Backend> backend;
    if (config.kind == BackendKind::mock)
        backend = std::make_shared<MockBackend>(config.seed, config.dim);
    else
        backend = std::make_shared<HttpBackend>(config);
    return std::make_shared<ModelGateway>(std::move(backend), config.max_in_flight);
}

}  // namespace best
