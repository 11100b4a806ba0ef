#pragma once
#include <string>
#include <vector>

#include "best/embedding.hpp"
#include "best/errors.hpp"
#include "best/gateway.hpp"
#include "best/geometry.hpp"
#include "best/scene_graph.hpp"
#include "best/selection.hpp"
#include "best/vocabulary.hpp"

namespace best {

// Region-pair baseline for building a scene graph straight from crops:
// each region is named by its best-matching object and attribute; each
// unordered region pair is related through the embedding of their union
// box, with the relation's direction chosen by phrasing both orders as
// text and keeping the order that aligns better with that union crop.
inline SceneGraph naive_baseline_graph(const ImageData& image,
                                       const std::vector<BoundingBox>& regions,
                                       const Vocabulary& object_vocab,
                                       const Vocabulary& attr_vocab,
                                       const Vocabulary& relation_vocab,
                                       ModelGateway& gateway) {
    if (regions.empty()) throw InvalidInput("naive baseline needs at least one region");
    object_vocab.validate();
    attr_vocab.validate();
    relation_vocab.validate();

    const auto region_embs = gateway.embed_regions(image, regions);

    SceneGraph graph;
    std::vector<std::string> names(regions.size());
    for (std::size_t i = 0; i < regions.size(); ++i) {
        const auto obj = argmax_index(vocab_scores(region_embs[i], object_vocab));
        names[i] = normalize_phrase(object_vocab.entries[obj]);
        if (std::find(graph.objects.begin(), graph.objects.end(), names[i]) ==
            graph.objects.end())
            graph.objects.push_back(names[i]);
        const auto [attr, score] = assign_attribute(region_embs[i], attr_vocab);
        graph.attributes.push_back({names[i], normalize_phrase(attr)});
    }

    if (regions.size() < 2) return graph;

    std::vector<BoundingBox> union_boxes;
    for (std::size_t i = 0; i < regions.size(); ++i)
        for (std::size_t j = i + 1; j < regions.size(); ++j)
            union_boxes.push_back(union_box(regions[i], regions[j]));
    const auto union_embs = gateway.embed_regions(image, union_boxes);

    std::size_t pair = 0;
    for (std::size_t i = 0; i < regions.size(); ++i) {
        for (std::size_t j = i + 1; j < regions.size(); ++j, ++pair) {
            const auto& union_emb = union_embs[pair];
            const auto rel = argmax_index(vocab_scores(union_emb, relation_vocab));
            const std::string relation = normalize_phrase(relation_vocab.entries[rel]);
            const std::string forward = names[i] + " " + relation + " " + names[j];
            const std::string backward = names[j] + " " + relation + " " + names[i];
            const auto phrase_embs = gateway.embed_texts({forward, backward});
            const double fwd = similarity(union_emb, phrase_embs[0]);
            const double bwd = similarity(union_emb, phrase_embs[1]);
            if (bwd > fwd)
                graph.relations.push_back({names[j], relation, names[i]});
            else
                graph.relations.push_back({names[i], relation, names[j]});
        }
    }
    return graph;
}

}  // namespace best
