#pragma once
#include <memory>
#include <string>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "best/backend.hpp"

namespace best {

namespace detail {

inline std::string base64_encode(const std::uint8_t* data, std::size_t size) {
    static const char* table = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
    std::string out;
    out.reserve((size + 2) / 3 * 4);
    for (std::size_t i = 0; i < size; i += 3) {
        std::uint32_t chunk = std::uint32_t(data[i]) << 16;
        if (i + 1 < size) chunk |= std::uint32_t(data[i + 1]) << 8;
        if (i + 2 < size) chunk |= std::uint32_t(data[i + 2]);
        out.push_back(table[(chunk >> 18) & 0x3f]);
        out.push_back(table[(chunk >> 12) & 0x3f]);
        out.push_back(i + 1 < size ? table[(chunk >> 6) & 0x3f] : '=');
        out.push_back(i + 2 < size ? table[chunk & 0x3f] : '=');
    }
    return out;
}

// Splits "http://host:port/some/path" into client root and request path.
struct SplitUrl {
    std::string root;  // scheme://host[:port]
    std::string path;  // /some/path
};

inline SplitUrl split_url(const std::string& url) {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos)
        throw InvalidInput("backend URL missing scheme: " + url);
    const auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) return {url, "/"};
    return {url.substr(0, path_start), url.substr(path_start)};
}

}  // namespace detail

// Remote backend speaking the JSON-over-HTTP wire protocol. Every request
// is a POST with a JSON body; batches are the unit of transport.
class HttpBackend : public Backend {
public:
    explicit HttpBackend(BackendConfig config) : config_(std::move(config)) {
        config_.validate();
    }

    std::size_t dim() const override { return config_.dim; }
    std::string name() const override { return config_.base_url.empty() ? "remote" : config_.base_url; }

    std::vector<std::vector<double>> embed_texts(const std::vector<std::string>& texts) override {
        nlohmann::json body;
        body["texts"] = texts;
        const auto reply = post(Capability::embed_text, body);
        auto vectors = parse_vectors(reply, "embeddings", Capability::embed_text);
        if (vectors.size() != texts.size())
            throw protocol_error(Capability::embed_text, "embedding count mismatch");
        return vectors;
    }

    std::vector<std::vector<double>> embed_image(const ImageData& image,
                                                 const std::vector<BoundingBox>& boxes) override {
        nlohmann::json body;
        body["image_b64"] = detail::base64_encode(image.bytes.data(), image.bytes.size());
        if (!boxes.empty()) body["boxes"] = box_list(boxes);
        const auto reply = post(Capability::embed_image, body);
        auto vectors = parse_vectors(reply, "embeddings", Capability::embed_image);
        const std::size_t expected = boxes.empty() ? 1 : boxes.size();
        if (vectors.size() != expected)
            throw protocol_error(Capability::embed_image, "embedding count mismatch");
        return vectors;
    }

    std::vector<std::string> caption(const ImageData& image,
                                     const std::vector<BoundingBox>& boxes) override {
        nlohmann::json body;
        body["image_b64"] = detail::base64_encode(image.bytes.data(), image.bytes.size());
        if (!boxes.empty()) body["boxes"] = box_list(boxes);
        const auto reply = post(Capability::caption, body);
        auto captions = parse_strings(reply, "captions", Capability::caption);
        const std::size_t expected = boxes.empty() ? 1 : boxes.size();
        if (captions.size() != expected)
            throw protocol_error(Capability::caption, "caption count mismatch");
        return captions;
    }

    std::vector<BoundingBox> detect(const ImageData& image) override {
        nlohmann::json body;
        body["image_b64"] = detail::base64_encode(image.bytes.data(), image.bytes.size());
        const auto reply = post(Capability::detect, body);
        if (!reply.contains("boxes") || !reply["boxes"].is_array())
            throw protocol_error(Capability::detect, "missing boxes array");
        std::vector<BoundingBox> out;
        for (const auto& row : reply["boxes"]) {
            if (!row.is_array() || row.size() != 5)
                throw protocol_error(Capability::detect, "box rows must be [x0,y0,x1,y1,score]");
            BoundingBox b;
            b.x_min = row[0].get<double>();
            b.y_min = row[1].get<double>();
            b.x_max = row[2].get<double>();
            b.y_max = row[3].get<double>();
            b.score = row[4].get<double>();
            out.push_back(b);
        }
        return out;
    }

    std::vector<std::string> complete(const std::string& prompt,
                                      const CompletionParams& params) override {
        nlohmann::json body;
        body["prompt"] = prompt;
        body["n"] = params.n;
        body["temperature"] = params.temperature;
        body["frequency_penalty"] = params.frequency_penalty;
        body["max_tokens"] = params.max_tokens;
        const auto reply = post(Capability::complete, body);
        return parse_strings(reply, "completions", Capability::complete);
    }

private:
    nlohmann::json post(Capability cap, const nlohmann::json& body) {
        const std::string url = config_.url_for(cap);
        const auto split = detail::split_url(url);
        httplib::Client client(split.root);
        client.set_connection_timeout(0, config_.timeout_ms * 1000);
        client.set_read_timeout(0, config_.timeout_ms * 1000);
        client.set_write_timeout(0, config_.timeout_ms * 1000);
        httplib::Headers headers;
        if (!config_.bearer_token.empty())
            headers.emplace("Authorization", "Bearer " + config_.bearer_token);
        auto result = client.Post(split.path, headers, body.dump(), "application/json");
        if (!result)
            throw BackendError(url, "transport failure: " + httplib::to_string(result.error()),
                               /*retryable=*/true);
        if (result->status != 200)
            throw BackendError(url, "HTTP " + std::to_string(result->status) + ": " +
                                       result->body.substr(0, 200),
                               /*retryable=*/false);
        nlohmann::json reply = nlohmann::json::parse(result->body, nullptr, false);
        if (reply.is_discarded())
            throw BackendError(url, "response is not valid JSON", /*retryable=*/false);
        return reply;
    }

    BackendError protocol_error(Capability cap, const std::string& what) const {
        return BackendError(config_.url_for(cap), what, /*retryable=*/false);
    }

    std::vector<std::vector<double>> parse_vectors(const nlohmann::json& reply, const char* key,
                                                   Capability cap) const {
        if (!reply.contains(key) || !reply[key].is_array())
            throw protocol_error(cap, std::string("missing ") + key + " array");
        std::vector<std::vector<double>> out;
        for (const auto& v : reply[key]) {
            if (!v.is_array() || v.empty())
                throw protocol_error(cap, "embeddings must be non-empty arrays");
            out.push_back(v.get<std::vector<double>>());
        }
        return out;
    }

    std::vector<std::string> parse_strings(const nlohmann::json& reply, const char* key,
                                           Capability cap) const {
        if (!reply.contains(key) || !reply[key].is_array())
            throw protocol_error(cap, std::string("missing ") + key + " array");
        std::vector<std::string> out;
        for (const auto& s : reply[key]) {
            if (!s.is_string()) throw protocol_error(cap, std::string(key) + " must be strings");
            out.push_back(s.get<std::string>());
        }
        return out;
    }

    static nlohmann::json box_list(const std::vector<BoundingBox>& boxes) {
        nlohmann::json rows = nlohmann::json::array();
        for (const auto& b : boxes) rows.push_back({b.x_min, b.y_min, b.x_max, b.y_max});
        return rows;
    }

    BackendConfig config_;
};

}  // namespace best
