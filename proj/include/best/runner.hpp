#pragma once
#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "best/candidate.hpp"
#include "best/clue_extractor.hpp"
#include "best/config.hpp"
#include "best/conllu.hpp"
#include "best/gateway.hpp"
#include "best/graph_rules.hpp"
#include "best/image.hpp"
#include "best/lexicon.hpp"
#include "best/prompt.hpp"
#include "best/scene_graph.hpp"
#include "best/spipe.hpp"
#include "best/vocabulary.hpp"
#include "best/vqa.hpp"

namespace best {

// Exit codes shared by every subcommand.
inline constexpr int exit_ok = 0;
inline constexpr int exit_config_error = 1;
inline constexpr int exit_partial_failure = 2;

namespace detail {

// Runs fn(0..n-1) across up to `workers` threads. Item order in any output
// container is the caller's responsibility (index-addressed writes).
template <typename Fn>
void parallel_for(std::size_t n, std::size_t workers, Fn&& fn) {
    if (n == 0) return;
    const std::size_t thread_count = std::min(workers == 0 ? 1 : workers, n);
    if (thread_count <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(thread_count);
    for (std::size_t t = 0; t < thread_count; ++t) {
        pool.emplace_back([&] {
            while (true) {
                const std::size_t i = next.fetch_add(1);
                if (i >= n) return;
                fn(i);
            }
        });
    }
    for (auto& th : pool) th.join();
}

// Stage stopwatch; mock-backed runs report zero so outputs stay
// byte-identical across machines and repetitions.
class StageClock {
public:
    explicit StageClock(bool zeroed) : zeroed_(zeroed) { reset(); }

    void reset() { start_ = std::chrono::steady_clock::now(); }

    std::int64_t lap_ms() {
        if (zeroed_) return 0;
        const auto now = std::chrono::steady_clock::now();
        const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(now - start_);
        start_ = now;
        return ms.count();
    }

private:
    bool zeroed_;
    std::chrono::steady_clock::time_point start_;
};

inline bool has_image_extension(const std::filesystem::path& p) {
    static const std::set<std::string> known{".png", ".jpg", ".jpeg", ".bmp",
                                             ".ppm", ".pgm", ".pnm"};
    auto ext = ascii_lower(p.extension().string());
    return known.count(ext) > 0;
}

inline double percent_1dp(double fraction) {
    return std::round(fraction * 1000.0) / 10.0;
}

}  // namespace detail

// Image inputs: a directory (every image file in it, sorted by name) or a
// list file (one path per line, "#" comments, resolved against the list).
inline std::vector<std::string> list_images(const std::string& images_arg) {
    namespace fs = std::filesystem;
    if (!fs::exists(images_arg))
        throw ConfigError("images path does not exist: " + images_arg);
    std::vector<std::string> paths;
    if (fs::is_directory(images_arg)) {
        for (const auto& entry : fs::directory_iterator(images_arg))
            if (entry.is_regular_file() && detail::has_image_extension(entry.path()))
                paths.push_back(entry.path().string());
        std::sort(paths.begin(), paths.end());
        return paths;
    }
    std::ifstream in(images_arg);
    if (!in) throw ConfigError("cannot open image list: " + images_arg);
    const auto list_dir = fs::absolute(images_arg).parent_path();
    std::string line;
    while (std::getline(in, line)) {
        const auto t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        fs::path p{std::string(t)};
        paths.push_back((p.is_absolute() ? p : list_dir / p).lexically_normal().string());
    }
    return paths;
}

// Full pipeline for one image: clues -> prompts -> K candidates -> best
// candidate -> hallucination-filtered description, all captured in one
// self-describing record.
inline nlohmann::ordered_json describe_one(const std::string& image_path,
                                           const RunConfig& config, ModelGateway& gateway,
                                           const Vocabulary& tag_vocab,
                                           const Vocabulary& attr_vocab) {
    const bool zero_timings = config.backend.kind == BackendKind::mock;
    detail::StageClock clock(zero_timings);

    const auto image = load_image(image_path);
    const auto clues = extract_clues(image, tag_vocab, attr_vocab, gateway, config.clues);
    const auto clues_ms = clock.lap_ms();

    const auto dims = image.dims();
    const auto plan =
        synthesis_plan(clues, dims, config.ending, config.candidates, config.sampling,
                       config.sizes);

    // Adjacent requests sharing one prompt collapse into a single batched
    // completion call; results land back in plan order.
    std::vector<std::string> texts;
    texts.reserve(plan.size());
    for (std::size_t i = 0; i < plan.size();) {
        std::size_t j = i;
        while (j < plan.size() && plan[j].prompt == plan[i].prompt) ++j;
        CompletionParams batch = plan[i].params;
        batch.n = static_cast<int>(j - i);
        auto group = gateway.complete(plan[i].prompt, batch);
        for (auto& g : group) texts.push_back(std::move(g));
        i = j;
    }
    const auto synthesis_ms = clock.lap_ms();

    const auto image_emb = gateway.embed_image(image);
    const auto judged = judge_candidates(image_emb, texts, config.gamma, gateway);
    const auto judge_ms = clock.lap_ms();

    nlohmann::ordered_json record;
    record["image"] = image.id;
    record["clues"] = to_json(clues);
    record["prompt_with_caption"] = plan.front().prompt;
    record["prompt_without_caption"] = plan.back().prompt;
    auto candidates = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < texts.size(); ++i) {
        nlohmann::ordered_json row;
        row["text"] = texts[i];
        row["similarity"] = judged.candidate_similarities[i];
        row["with_caption"] = plan[i].with_caption;
        candidates.push_back(std::move(row));
    }
    record["candidates"] = std::move(candidates);
    record["selected_index"] = judged.selected_index;
    auto sentences = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < judged.sentences.size(); ++i) {
        nlohmann::ordered_json row;
        row["text"] = judged.sentences[i].text;
        row["similarity"] = judged.sentences[i].similarity;
        row["kept"] = std::find(judged.kept.begin(), judged.kept.end(), i) != judged.kept.end();
        sentences.push_back(std::move(row));
    }
    record["sentences"] = std::move(sentences);
    record["description"] = judged.final_text;
    record["timings_ms"] = {{"clues", clues_ms}, {"synthesis", synthesis_ms},
                            {"judge", judge_ms}};
    return record;
}

// describe: one JSONL record per input image, in input order; per-image
// failures become error records instead of aborting the run.
inline int cmd_describe(const RunConfig& config, const std::string& images_arg,
                        const std::string& out_path) {
    if (config.tag_vocab_path.empty() || config.attr_vocab_path.empty())
        throw ConfigError("describe needs vocab.tags and vocab.attributes in the config");

    const auto image_paths = list_images(images_arg);
    std::ofstream out(out_path);
    if (!out) throw ConfigError("cannot write output file: " + out_path);
    if (image_paths.empty()) return exit_ok;

    auto gateway = make_gateway(config.backend);
    EmbeddingCache cache(gateway->dim());
    const bool use_cache = !config.cache_path.empty();
    if (use_cache && std::filesystem::exists(config.cache_path))
        cache = EmbeddingCache::load(config.cache_path);
    const auto tag_vocab =
        load_vocabulary(config.tag_vocab_path, *gateway, use_cache ? &cache : nullptr);
    const auto attr_vocab =
        load_vocabulary(config.attr_vocab_path, *gateway, use_cache ? &cache : nullptr);
    if (use_cache) cache.save(config.cache_path);

    std::vector<nlohmann::ordered_json> records(image_paths.size());
    std::vector<bool> failed(image_paths.size(), false);
    detail::parallel_for(image_paths.size(), config.workers, [&](std::size_t i) {
        try {
            records[i] = describe_one(image_paths[i], config, *gateway, tag_vocab, attr_vocab);
        } catch (const std::exception& e) {
            failed[i] = true;
            nlohmann::ordered_json err;
            err["image"] = std::filesystem::path(image_paths[i]).filename().string();
            err["error"] = e.what();
            records[i] = std::move(err);
        }
    });

    for (const auto& record : records) out << record.dump() << "\n";
    const bool any_failed = std::find(failed.begin(), failed.end(), true) != failed.end();
    return any_failed ? exit_partial_failure : exit_ok;
}

namespace detail {

// Candidate graphs arrive as a JSONL file (one graph object per line, with
// an "image" id) or a directory of <id>.json graphs / <id>.conllu parses.
inline std::vector<std::pair<std::string, SceneGraph>> load_candidate_graphs(
    const std::string& path) {
    namespace fs = std::filesystem;
    std::vector<std::pair<std::string, SceneGraph>> items;
    if (!fs::exists(path)) throw ConfigError("candidates path does not exist: " + path);
    if (fs::is_directory(path)) {
        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(path)) {
            if (!entry.is_regular_file()) continue;
            const auto ext = entry.path().extension().string();
            if (ext == ".json" || ext == ".conllu") files.push_back(entry.path());
        }
        std::sort(files.begin(), files.end());
        for (const auto& file : files) {
            const std::string id = file.stem().string();
            std::ifstream in(file);
            if (!in) throw ConfigError("cannot open candidate file: " + file.string());
            std::string content((std::istreambuf_iterator<char>(in)),
                                std::istreambuf_iterator<char>());
            if (file.extension() == ".json") {
                const auto j = nlohmann::json::parse(content, nullptr, false);
                if (j.is_discarded())
                    throw ConfigError("candidate file is not valid JSON: " + file.string());
                items.emplace_back(id, graph_from_json(j));
            } else {
                items.emplace_back(id, graph_from_dependencies(ingest_dependencies(content)));
            }
        }
        return items;
    }
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open candidates file: " + path);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded())
            throw ParseError(line_no, "candidate line is not valid JSON");
        const std::string id = j.value("image", std::string{});
        if (id.empty()) throw ParseError(line_no, "candidate line has no \"image\" id");
        items.emplace_back(id, graph_from_json(j));
    }
    return items;
}

inline std::map<std::string, SceneGraph> load_reference_graphs(const std::string& dir) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir))
        throw ConfigError("references path must be a directory: " + dir);
    std::map<std::string, SceneGraph> refs;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file() || entry.path().extension() != ".json") continue;
        std::ifstream in(entry.path());
        if (!in) throw ConfigError("cannot open reference file: " + entry.path().string());
        const auto j = nlohmann::json::parse(in, nullptr, false);
        if (j.is_discarded())
            throw ConfigError("reference file is not valid JSON: " + entry.path().string());
        refs.emplace(entry.path().stem().string(), graph_from_json(j));
    }
    return refs;
}

}  // namespace detail

// spipe: score candidate graphs against same-id reference graphs; report
// per-item precision/recall/F plus macro-averaged corpus numbers in percent
// (one decimal), echoed as a compact table.
inline int cmd_spipe(const std::string& candidates_path, const std::string& references_dir,
                     const std::string& lexicon_path, const std::string& out_path,
                     std::ostream& echo = std::cout) {
    const auto candidates = detail::load_candidate_graphs(candidates_path);
    const auto references = detail::load_reference_graphs(references_dir);
    const auto lexicon = SynonymLexicon::load(lexicon_path);

    std::vector<std::string> missing_refs, missing_cands;
    std::set<std::string> candidate_ids;
    for (const auto& [id, graph] : candidates) {
        candidate_ids.insert(id);
        if (!references.count(id)) missing_refs.push_back(id);
    }
    for (const auto& [id, graph] : references)
        if (!candidate_ids.count(id)) missing_cands.push_back(id);
    if (!missing_refs.empty() || !missing_cands.empty()) {
        std::string msg = "candidate/reference ids do not align;";
        if (!missing_refs.empty()) msg += " missing references: " + join(missing_refs, ", ") + ";";
        if (!missing_cands.empty()) msg += " missing candidates: " + join(missing_cands, ", ");
        throw ConfigError(msg);
    }
    if (candidates.empty()) throw ConfigError("no candidate graphs found");

    nlohmann::ordered_json report;
    auto items = nlohmann::ordered_json::array();
    double sum_p = 0.0, sum_r = 0.0, sum_f = 0.0;
    for (const auto& [id, graph] : candidates) {
        const auto score = spipe(graph, references.at(id), lexicon);
        sum_p += score.precision;
        sum_r += score.recall;
        sum_f += score.f1;
        nlohmann::ordered_json row;
        row["id"] = id;
        row["precision"] = score.precision;
        row["recall"] = score.recall;
        row["f1"] = score.f1;
        row["matched"] = score.matched;
        row["candidate_tuples"] = score.candidate_total;
        row["reference_tuples"] = score.reference_total;
        items.push_back(std::move(row));
    }
    const auto n = static_cast<double>(candidates.size());
    const double f_pct = detail::percent_1dp(sum_f / n);
    const double p_pct = detail::percent_1dp(sum_p / n);
    const double r_pct = detail::percent_1dp(sum_r / n);
    report["items"] = std::move(items);
    report["corpus"] = {{"f_score_percent", f_pct},
                        {"precision_percent", p_pct},
                        {"recall_percent", r_pct}};
    char table[128];
    std::snprintf(table, sizeof(table), "F-score Precision Recall\n%.1f %.1f %.1f", f_pct,
                  p_pct, r_pct);
    report["table"] = table;

    std::ofstream out(out_path);
    if (!out) throw ConfigError("cannot write report file: " + out_path);
    out << report.dump(2) << "\n";
    echo << table << "\n";
    return exit_ok;
}

// vqa: answer every dataset item from its image's clues, grade the chosen
// mode's answers by normalized exact match.
inline int cmd_vqa(const RunConfig& config, const std::string& data_path, VqaMode mode,
                   const std::string& out_path = {}, std::ostream& echo = std::cout) {
    if (config.tag_vocab_path.empty() || config.attr_vocab_path.empty())
        throw ConfigError("vqa needs vocab.tags and vocab.attributes in the config");
    if (mode == VqaMode::discriminative && config.answers_path.empty())
        throw ConfigError("discriminative mode needs run.answers in the config");

    std::ifstream in(data_path);
    if (!in) throw ConfigError("cannot open dataset file: " + data_path);
    const auto data_dir = std::filesystem::absolute(data_path).parent_path();

    std::vector<VqaItem> items;
    std::vector<std::string> image_paths;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded()) throw ParseError(line_no, "dataset line is not valid JSON");
        VqaItem item;
        item.image_id = j.value("image", std::string{});
        item.question = j.value("question", std::string{});
        item.ground_truth = j.value("answer", std::string{});
        if (item.image_id.empty() || item.question.empty())
            throw ParseError(line_no, "dataset items need \"image\" and \"question\"");
        std::filesystem::path p{item.image_id};
        image_paths.push_back((p.is_absolute() ? p : data_dir / p).lexically_normal().string());
        items.push_back(std::move(item));
    }
    if (items.empty()) throw InvalidInput("dataset is empty: " + data_path);

    auto gateway = make_gateway(config.backend);
    const auto tag_vocab = load_vocabulary(config.tag_vocab_path, *gateway);
    const auto attr_vocab = load_vocabulary(config.attr_vocab_path, *gateway);
    AnswerIndex index;
    if (mode == VqaMode::discriminative)
        index = AnswerIndex::load(config.answers_path, *gateway);

    std::vector<std::string> errors(items.size());
    detail::parallel_for(items.size(), config.workers, [&](std::size_t i) {
        try {
            const auto image = load_image(image_paths[i]);
            const auto clues =
                extract_clues(image, tag_vocab, attr_vocab, *gateway, config.clues);
            items[i].long_answer = answer_question(clues, image.dims(), items[i].question,
                                                   *gateway, config.sampling);
            items[i].short_answer = reformat_answer(items[i].question, *items[i].long_answer,
                                                    *gateway, config.sampling);
            if (mode == VqaMode::discriminative)
                items[i].final_answer =
                    discriminative_answer(*items[i].short_answer, index, *gateway);
        } catch (const std::exception& e) {
            errors[i] = e.what();
        }
    });

    std::vector<VqaItem> answered;
    for (std::size_t i = 0; i < items.size(); ++i)
        if (errors[i].empty()) answered.push_back(items[i]);

    nlohmann::ordered_json report;
    report["mode"] = mode == VqaMode::generative ? "generative" : "discriminative";
    report["total"] = items.size();
    report["answered"] = answered.size();
    if (!answered.empty()) report["accuracy"] = score_accuracy(answered, mode);
    auto rows = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < items.size(); ++i) {
        nlohmann::ordered_json row;
        row["image"] = items[i].image_id;
        row["question"] = items[i].question;
        row["ground_truth"] = items[i].ground_truth;
        if (!errors[i].empty()) {
            row["error"] = errors[i];
        } else {
            row["long_answer"] = *items[i].long_answer;
            row["short_answer"] = *items[i].short_answer;
            if (items[i].final_answer) row["final_answer"] = *items[i].final_answer;
        }
        rows.push_back(std::move(row));
    }
    report["items"] = std::move(rows);

    const std::string dumped = report.dump(2);
    if (!out_path.empty()) {
        std::ofstream out(out_path);
        if (!out) throw ConfigError("cannot write report file: " + out_path);
        out << dumped << "\n";
    }
    echo << dumped << "\n";
    const bool any_failed =
        std::any_of(errors.begin(), errors.end(), [](const std::string& e) { return !e.empty(); });
    return any_failed ? exit_partial_failure : exit_ok;
}

}  // namespace best
