#pragma once
#include <cstddef>
#include <string>
#include <vector>

#include "best/embedding.hpp"
#include "best/errors.hpp"
#include "best/gateway.hpp"
#include "best/selection.hpp"
#include "best/text.hpp"

namespace best {

struct ScoredSentence {
    std::string text;
    double similarity = 0.0;
};

// A synthesized paragraph with its image alignment and, once judged, its
// per-sentence scores.
struct CandidateParagraph {
    enum class Source { with_caption, without_caption };
    std::string text;
    double similarity = 0.0;
    Source source = Source::without_caption;
    std::vector<ScoredSentence> sentences;
};

// Splits after '.', '!' or '?' when followed by whitespace or end of text.
// Delimiters stay attached; segments are trimmed; empties are dropped.
inline std::vector<std::string> split_sentences(const std::string& text) {
    std::vector<std::string> out;
    std::size_t start = 0;
    auto flush = [&](std::size_t end) {
        const auto piece = trim(std::string_view(text).substr(start, end - start));
        if (!piece.empty()) out.emplace_back(piece);
        start = end;
    };
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (c != '.' && c != '!' && c != '?') continue;
        const bool at_end = i + 1 == text.size();
        const char next = at_end ? ' ' : text[i + 1];
        if (at_end || next == ' ' || next == '\t' || next == '\n' || next == '\r') flush(i + 1);
    }
    flush(text.size());
    return out;
}

// Argmax over candidate similarities; ties go to the lowest index.
inline std::size_t select_best_index(const std::vector<double>& similarities) {
    if (similarities.empty()) throw InvalidInput("no candidates to select from");
    return argmax_index(similarities);
}

// Indices of sentences whose similarity strictly clears gamma, in order.
// When none clears it, the single best sentence is kept so the output is
// never empty.
inline std::vector<std::size_t> filter_by_similarity(const std::vector<double>& similarities,
                                                     double gamma) {
    if (similarities.empty()) throw InvalidInput("no sentences to filter");
    if (gamma < -1.0 || gamma > 1.0) throw InvalidInput("gamma must be in [-1, 1]");
    std::vector<std::size_t> kept;
    for (std::size_t i = 0; i < similarities.size(); ++i)
        if (similarities[i] > gamma) kept.push_back(i);
    if (kept.empty()) kept.push_back(argmax_index(similarities));
    return kept;
}

// Scores every candidate against the image, picks the winner, then filters
// its sentences; the surviving text is what the pipeline publishes.
struct JudgeResult {
    std::vector<double> candidate_similarities;  // one per candidate, input order
    std::size_t selected_index = 0;
    std::vector<ScoredSentence> sentences;       // winner's sentences, in order
    std::vector<std::size_t> kept;               // indices into `sentences`
    std::string final_text;                      // kept sentences joined by " "
};

inline JudgeResult judge_candidates(const UnitEmbedding& image_emb,
                                    const std::vector<std::string>& candidates, double gamma,
                                    ModelGateway& gateway) {
    if (candidates.empty()) throw InvalidInput("no candidates to judge");
    JudgeResult result;
    const auto candidate_embs = gateway.embed_texts(candidates);
    result.candidate_similarities.reserve(candidates.size());
    for (const auto& emb : candidate_embs)
        result.candidate_similarities.push_back(similarity(image_emb, emb));
    result.selected_index = select_best_index(result.candidate_similarities);

    auto sentence_texts = split_sentences(candidates[result.selected_index]);
    if (sentence_texts.empty())
        throw InvalidInput("selected candidate contains no sentences");
    const auto sentence_embs = gateway.embed_texts(sentence_texts);
    std::vector<double> sentence_sims;
    sentence_sims.reserve(sentence_texts.size());
    for (std::size_t i = 0; i < sentence_texts.size(); ++i) {
        const double s = similarity(image_emb, sentence_embs[i]);
        sentence_sims.push_back(s);
        result.sentences.push_back({std::move(sentence_texts[i]), s});
    }
    result.kept = filter_by_similarity(sentence_sims, gamma);
    std::vector<std::string> kept_texts;
    kept_texts.reserve(result.kept.size());
    for (auto i : result.kept) kept_texts.push_back(result.sentences[i].text);
    result.final_text = join(kept_texts, " ");
    return result;
}

}  // namespace best
