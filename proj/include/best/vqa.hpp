#pragma once
#include <algorithm>
#include <fstream>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "best/candidate.hpp"
#include "best/errors.hpp"
#include "best/gateway.hpp"
#include "best/prompt.hpp"
#include "best/text.hpp"
#include "best/visual_clues.hpp"

namespace best {

struct VqaItem {
    std::string image_id;
    std::string question;
    std::string ground_truth;
    std::optional<std::string> long_answer;
    std::optional<std::string> short_answer;
    std::optional<std::string> final_answer;
};

enum class VqaMode { generative, discriminative };

inline VqaMode vqa_mode_from_string(const std::string& s) {
    if (s == "generative") return VqaMode::generative;
    if (s == "discriminative") return VqaMode::discriminative;
    throw InvalidInput("mode must be \"generative\" or \"discriminative\", got \"" + s + "\"");
}

// Asks the question as the prompt's final line and returns one completion.
inline std::string answer_question(const VisualClues& clues, const ImageDims& dims,
                                   const std::string& question, ModelGateway& gateway,
                                   const CompletionParams& params = {}) {
    if (question.empty()) throw InvalidInput("question must be non-empty");
    CompletionParams single = params;
    single.n = 1;
    const auto prompt = serialize_prompt(clues, dims, TaskEnding::vqa(question), true);
    return gateway.complete(prompt, single).front();
}

// The fixed two-shot prompt that turns a long free-form answer into a short
// one. The two worked examples never change; the live question and long
// answer are appended as a third block that stops at "Short answer:".
inline std::string vqa_reformat_prompt(const std::string& question,
                                       const std::string& long_answer) {
    if (question.empty() || long_answer.empty())
        throw InvalidInput("reformatting needs a question and a long answer");
    std::string out;
    out += "Question: What is this bird called?\n";
    out += "Long answer: The bird in this image is called a cockatoo.\n";
    out += "Short answer: Cockatoo.\n";
    out += "\n";
    out += "Question: Is the chair on the left or on the right of the desk?\n";
    out += "Long answer: The chair is on the left of the desk.\n";
    out += "Short answer: Left.\n";
    out += "\n";
    out += "Question: " + question + "\n";
    out += "Long answer: " + long_answer + "\n";
    out += "Short answer:";
    return out;
}

// First line of the completion, trimmed, with one trailing period removed:
// "Brown." -> "Brown".
inline std::string strip_short_answer(const std::string& completion) {
    std::string first = completion.substr(0, completion.find('\n'));
    std::string t(trim(first));
    if (!t.empty() && t.back() == '.') t.pop_back();
    return std::string(trim(t));
}

inline std::string reformat_answer(const std::string& question, const std::string& long_answer,
                                   ModelGateway& gateway, const CompletionParams& params = {}) {
    CompletionParams single = params;
    single.n = 1;
    const auto prompt = vqa_reformat_prompt(question, long_answer);
    return strip_short_answer(gateway.complete(prompt, single).front());
}

// The unique answers seen in training, each with a text embedding, so a
// free-form short answer can be snapped to the closest known answer.
struct AnswerIndex {
    std::vector<std::string> answers;
    std::vector<UnitEmbedding> embeddings;

    static AnswerIndex build(const std::vector<std::string>& raw, ModelGateway& gateway) {
        AnswerIndex index;
        std::unordered_set<std::string> seen;
        for (const auto& a : raw) {
            const std::string t(trim(a));
            if (t.empty()) continue;
            if (seen.insert(ascii_lower(t)).second) index.answers.push_back(t);
        }
        if (index.answers.empty()) throw InvalidInput("answer index has no answers");
        index.embeddings = gateway.embed_texts(index.answers);
        return index;
    }

    static AnswerIndex load(const std::string& path, ModelGateway& gateway) {
        std::ifstream in(path);
        if (!in) throw InvalidInput("cannot open answer file: " + path);
        std::vector<std::string> raw;
        std::string line;
        while (std::getline(in, line)) {
            const auto t = trim(line);
            if (t.empty() || t.front() == '#') continue;
            raw.emplace_back(t);
        }
        return build(raw, gateway);
    }
};

// Nearest indexed answer by text-embedding similarity; exact ties resolve to
// the lexicographically smallest answer.
inline std::string discriminative_answer(const std::string& short_answer,
                                         const AnswerIndex& index, ModelGateway& gateway) {
    if (index.answers.empty()) throw InvalidInput("answer index is empty");
    const auto query = gateway.embed_text(short_answer);
    double best_score = -2.0;
    std::string best;
    for (std::size_t i = 0; i < index.answers.size(); ++i) {
        const double s = similarity(query, index.embeddings[i]);
        if (s > best_score || (s == best_score && index.answers[i] < best)) {
            best_score = s;
            best = index.answers[i];
        }
    }
    return best;
}

// Fraction of items whose answer matches ground truth exactly after
// lowercasing and trimming. Generative mode grades the short answer;
// discriminative mode grades the snapped final answer.
inline double score_accuracy(const std::vector<VqaItem>& items, VqaMode mode) {
    if (items.empty()) throw InvalidInput("no items to score");
    std::size_t matches = 0;
    for (const auto& item : items) {
        const auto& answer =
            mode == VqaMode::generative ? item.short_answer : item.final_answer;
        if (!answer)
            throw InvalidInput("item \"" + item.question + "\" is unanswered for this mode");
        if (ascii_lower(trim(*answer)) == ascii_lower(trim(item.ground_truth))) ++matches;
    }
    return static_cast<double>(matches) / static_cast<double>(items.size());
}

}  // namespace best
