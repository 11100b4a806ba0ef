#pragma once
#include <algorithm>
#include <string>
#include <vector>

#include "best/embedding.hpp"
#include "best/errors.hpp"
#include "best/vocabulary.hpp"

namespace best {

struct ScoredTag {
    std::string tag;
    double score = 0.0;
    bool operator==(const ScoredTag&) const = default;
};

// Index of the largest score; ties go to the earliest index.
inline std::size_t argmax_index(const std::vector<double>& scores) {
    if (scores.empty()) throw InvalidInput("argmax over empty scores");
    std::size_t best = 0;
    for (std::size_t i = 1; i < scores.size(); ++i)
        if (scores[i] > scores[best]) best = i;
    return best;
}

// Indices of the top-k scores, descending; ties go to the earlier index.
inline std::vector<std::size_t> top_m_indices(const std::vector<double>& scores, std::size_t m) {
    std::vector<std::size_t> order(scores.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
    if (order.size() > m) order.resize(m);
    return order;
}

inline std::vector<double> vocab_scores(const UnitEmbedding& emb, const Vocabulary& vocab) {
    std::vector<double> scores;
    scores.reserve(vocab.size());
    for (const auto& e : vocab.embeddings) scores.push_back(similarity(emb, e));
    return scores;
}

// Tags with the top-M similarities to the image embedding.
inline std::vector<ScoredTag> select_top_tags(const UnitEmbedding& image_emb,
                                              const Vocabulary& vocab, std::size_t m) {
    if (m == 0) throw InvalidInput("tag count must be positive");
    const auto scores = vocab_scores(image_emb, vocab);
    std::vector<ScoredTag> out;
    for (auto i : top_m_indices(scores, m)) out.push_back({vocab.entries[i], scores[i]});
    return out;
}

// Keeps the regions where at least one vocabulary tag clears beta (strictly).
inline std::vector<std::size_t> select_regions(const std::vector<UnitEmbedding>& region_embs,
                                               const Vocabulary& vocab, double beta) {
    if (beta < -1.0 || beta > 1.0) throw InvalidInput("beta must be in [-1, 1]");
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < region_embs.size(); ++j) {
        for (const auto& tag_emb : vocab.embeddings) {
            if (similarity(region_embs[j], tag_emb) > beta) {
                out.push_back(j);
                break;
            }
        }
    }
    return out;
}

// The single best-matching attribute for a region.
inline std::pair<std::string, double> assign_attribute(const UnitEmbedding& region_emb,
                                                       const Vocabulary& attrs) {
    if (attrs.size() == 0) throw InvalidInput("attribute vocabulary is empty");
    const auto scores = vocab_scores(region_emb, attrs);
    const auto i = argmax_index(scores);
    return {attrs.entries[i], scores[i]};
}

// All tags strictly above beta for a region, best first.
inline std::vector<ScoredTag> region_tags(const UnitEmbedding& region_emb, const Vocabulary& vocab,
                                          double beta) {
    if (beta < -1.0 || beta > 1.0) throw InvalidInput("beta must be in [-1, 1]");
    const auto scores = vocab_scores(region_emb, vocab);
    std::vector<std::size_t> order = top_m_indices(scores, scores.size());
    std::vector<ScoredTag> out;
    for (auto i : order) {
        if (scores[i] > beta) out.push_back({vocab.entries[i], scores[i]});
    }
    return out;
}

}  // namespace best
