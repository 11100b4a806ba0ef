#pragma once
#include <cstddef>
#include <vector>

#include "best/lexicon.hpp"
#include "best/scene_graph.hpp"

namespace best {

struct SpipeScore {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::size_t matched = 0;
    std::size_t candidate_total = 0;
    std::size_t reference_total = 0;
};

// Maximum-cardinality matching on a bipartite graph given as adjacency lists
// from left vertices to right vertices (augmenting-path method).
inline std::size_t max_bipartite_matching(std::size_t n_left, std::size_t n_right,
                                          const std::vector<std::vector<std::size_t>>& adjacency) {
    constexpr std::size_t unmatched = static_cast<std::size_t>(-1);
    std::vector<std::size_t> match_right(n_right, unmatched);
    std::vector<bool> visited;

    auto try_augment = [&](auto&& self, std::size_t left) -> bool {
        for (const auto right : adjacency[left]) {
            if (visited[right]) continue;
            visited[right] = true;
            if (match_right[right] == unmatched || self(self, match_right[right])) {
                match_right[right] = left;
                return true;
            }
        }
        return false;
    };

    std::size_t matched = 0;
    for (std::size_t left = 0; left < n_left; ++left) {
        visited.assign(n_right, false);
        if (try_augment(try_augment, left)) ++matched;
    }
    return matched;
}

// F-score between the candidate's and reference's pooled tuple sets under
// one-to-one synonym matching. Two empty graphs agree vacuously (scores 1);
// only one side empty scores 0.
inline SpipeScore spipe(const SceneGraph& candidate, const SceneGraph& reference,
                        const SynonymLexicon& lexicon) {
    const auto cand = tuples(candidate);
    const auto ref = tuples(reference);
    SpipeScore score;
    score.candidate_total = cand.size();
    score.reference_total = ref.size();
    if (cand.empty() && ref.empty()) {
        score.precision = score.recall = score.f1 = 1.0;
        return score;
    }
    if (cand.empty() || ref.empty()) return score;

    std::vector<std::vector<std::size_t>> adjacency(cand.size());
    for (std::size_t i = 0; i < cand.size(); ++i)
        for (std::size_t j = 0; j < ref.size(); ++j)
            if (synonym_match(cand[i], ref[j], lexicon)) adjacency[i].push_back(j);

    score.matched = max_bipartite_matching(cand.size(), ref.size(), adjacency);
    score.precision = static_cast<double>(score.matched) / static_cast<double>(cand.size());
    score.recall = static_cast<double>(score.matched) / static_cast<double>(ref.size());
    if (score.precision + score.recall > 0.0)
        score.f1 = 2.0 * score.precision * score.recall / (score.precision + score.recall);
    return score;
}

}  // namespace best
