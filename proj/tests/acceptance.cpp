// End-to-end acceptance checks. Each criterion prints one [PASS]/[FAIL]
// line; the binary exits non-zero if anything failed.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <best/candidate.hpp>
#include <best/config.hpp>
#include <best/conllu.hpp>
#include <best/gateway.hpp>
#include <best/graph_rules.hpp>
#include <best/lexicon.hpp>
#include <best/mock_backend.hpp>
#include <best/naive_graph.hpp>
#include <best/nms.hpp>
#include <best/prompt.hpp>
#include <best/scene_graph.hpp>
#include <best/selection.hpp>
#include <best/spipe.hpp>
#include <best/vocabulary.hpp>
#include <best/vqa.hpp>

#include "test_support.hpp"

using namespace best;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

const std::string kFixtures = BEST_FIXTURES_DIR;

struct CheckFailure {
    std::string detail;
};

void expect(bool ok, const std::string& detail) {
    if (!ok) throw CheckFailure{detail};
}

void expect_near(double got, double want, const std::string& what) {
    if (std::abs(got - want) > 1e-9)
        throw CheckFailure{what + ": got " + std::to_string(got) + ", want " +
                           std::to_string(want)};
}

int failures = 0;

template <typename Body>
void criterion(const std::string& name, Body&& body) {
    try {
        body();
        std::cout << "[PASS] " << name << "\n";
    } catch (const CheckFailure& f) {
        ++failures;
        std::cout << "[FAIL] " << name << " (" << f.detail << ")\n";
    } catch (const std::exception& e) {
        ++failures;
        std::cout << "[FAIL] " << name << " (unexpected exception: " << e.what() << ")\n";
    }
}

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

// What an optimal assignment between the two pooled tuple sets should score.
SpipeScore oracle_score(const SceneGraph& a, const SceneGraph& b,
                        const SynonymLexicon& lexicon) {
    const auto ct = tuples(a);
    const auto rt = tuples(b);
    SpipeScore s;
    s.candidate_total = ct.size();
    s.reference_total = rt.size();
    if (ct.empty() && rt.empty()) {
        s.precision = s.recall = s.f1 = 1.0;
        return s;
    }
    if (ct.empty() || rt.empty()) return s;
    std::vector<std::vector<std::size_t>> adjacency(ct.size());
    for (std::size_t i = 0; i < ct.size(); ++i)
        for (std::size_t j = 0; j < rt.size(); ++j)
            if (synonym_match(ct[i], rt[j], lexicon)) adjacency[i].push_back(j);
    s.matched = testsup::oracle_max_matching(ct.size(), rt.size(), adjacency);
    s.precision = static_cast<double>(s.matched) / static_cast<double>(ct.size());
    s.recall = static_cast<double>(s.matched) / static_cast<double>(rt.size());
    s.f1 = (s.precision + s.recall > 0.0)
               ? 2.0 * s.precision * s.recall / (s.precision + s.recall)
               : 0.0;
    return s;
}

// The worked three-region donut scene whose rendered prompt is frozen in
// fixtures/prompt_donut.golden.txt.
VisualClues donut_clues() {
    VisualClues clues;
    clues.image_id = "donut";
    for (const char* t : {"coffee and donuts", "daypack", "the donut of shame", "dohnut",
                          "randys donuts"})
        clues.tags.push_back({t, 0.5});
    clues.caption = "a doughnut and a cup of coffee on a table";
    const char* caption = "a donut on a plate next to a cup of coffee";
    RegionDescription r1;
    r1.box = {100, 75, 300, 225, 0.9};
    r1.attribute = "donut";
    r1.tags = {{"coffee and donut", 0.6}};
    r1.caption = caption;
    RegionDescription r2 = r1;
    r2.box = {100, 70, 300, 230, 0.8};
    r2.attribute = "doughnut";
    RegionDescription r3 = r1;
    r3.box = {20, 210, 120, 290, 0.7};
    r3.attribute = "chocolate glazed";
    clues.regions = {r1, r2, r3};
    return clues;
}

void check_matching_against_oracle() {
    testsup::TestRng rng(0xacce9701u);
    const SynonymLexicon plain;
    const auto lexicon = SynonymLexicon::load(kFixtures + "/lexicon.tsv");
    const auto start = Clock::now();
    for (int trial = 0; trial < 500; ++trial) {
        const auto a = testsup::random_graph(rng);
        const auto b = testsup::random_graph(rng);
        const auto& lex = (trial % 2 == 0) ? plain : lexicon;
        const auto got = spipe(a, b, lex);
        const auto want = oracle_score(a, b, lex);
        expect(got.candidate_total == want.candidate_total, "candidate tuple count drifted");
        expect(got.reference_total == want.reference_total, "reference tuple count drifted");
        expect(got.matched == want.matched,
               "matching is not maximal: got " + std::to_string(got.matched) + ", optimum " +
                   std::to_string(want.matched));
        expect_near(got.precision, want.precision, "precision");
        expect_near(got.recall, want.recall, "recall");
        expect_near(got.f1, want.f1, "f1");
    }
    expect(seconds_since(start) < 10.0, "500 scored pairs took 10s or longer");
}

void check_self_score_and_symmetry() {
    testsup::TestRng rng(0x5e1f5c03u);
    const auto lexicon = SynonymLexicon::load(kFixtures + "/lexicon.tsv");
    for (int trial = 0; trial < 200; ++trial) {
        const auto g = testsup::random_graph(rng);
        const auto self = spipe(g, g, lexicon);
        expect(self.precision == 1.0 && self.recall == 1.0 && self.f1 == 1.0,
               "a graph scored against itself must be perfect");
        expect(self.matched == self.candidate_total, "self-match must cover every tuple");
    }
    for (int trial = 0; trial < 200; ++trial) {
        const auto a = testsup::random_graph(rng);
        const auto b = testsup::random_graph(rng);
        const auto fwd = spipe(a, b, lexicon);
        const auto bwd = spipe(b, a, lexicon);
        expect(fwd.precision == bwd.recall && fwd.recall == bwd.precision,
               "precision/recall must swap when the sides swap");
        expect(fwd.matched == bwd.matched, "match count must not depend on direction");
        expect_near(fwd.f1, bwd.f1, "f1 symmetry");
    }
}

void check_snowboard_reduction() {
    const auto text = testsup::read_file(kFixtures + "/snowboard.conllu");
    const auto trees = ingest_dependencies(text);
    expect(trees.size() == 1, "fixture must hold exactly one sentence");
    const auto graph = graph_from_dependencies(trees.front());

    expect(graph.objects == std::vector<std::string>{"man", "snowboard"},
           "objects must be [man, snowboard]");
    expect(graph.attributes.size() == 2 &&
               graph.attributes[0] == AttributePair{"man", "sitting"} &&
               graph.attributes[1] == AttributePair{"snowboard", "blue"},
           "attributes must be [(man, sitting), (snowboard, blue)]");
    expect(graph.relations.size() == 1 &&
               graph.relations[0] == RelationTriple{"man", "in front of", "snowboard"},
           "relations must be [(man, in front of, snowboard)]");

    const auto pooled = tuples(graph);
    const std::vector<std::vector<std::string>> want{
        {"man"},
        {"snowboard"},
        {"man", "sitting"},
        {"snowboard", "blue"},
        {"man", "in front of", "snowboard"}};
    expect(pooled.size() == want.size(), "pooled tuple count must be 5");
    for (std::size_t i = 0; i < want.size(); ++i)
        expect(pooled[i].components == want[i], "pooled tuple " + std::to_string(i) + " drifted");
}

void check_box_suppression() {
    testsup::TestRng rng(0xb0c5u);
    const double thresholds[] = {0.3, 0.5, 0.7};
    const std::size_t keeps[] = {1, 3, 100};
    const auto start = Clock::now();
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 1 + rng.below(30);
        std::vector<BoundingBox> boxes;
        for (std::size_t i = 0; i < n; ++i) boxes.push_back(testsup::random_box(rng, 64, 48));
        const double thr = thresholds[trial % 3];
        const std::size_t keep = keeps[(trial / 3) % 3];
        const auto got = nms(boxes, thr, keep);
        const auto want = testsup::oracle_nms(boxes, thr, keep);
        expect(got == want, "suppression disagrees with the quadratic reference");
    }
    expect(seconds_since(start) < 5.0, "1000 suppression rounds took 5s or longer");
}

void check_selection_primitives() {
    testsup::TestRng rng(0x5e1ec7u);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 1 + rng.below(40);
        std::vector<double> scores;
        for (std::size_t i = 0; i < n; ++i)
            scores.push_back(0.25 * static_cast<double>(rng.below(5)));  // heavy on ties
        expect(argmax_index(scores) == testsup::oracle_argmax(scores),
               "argmax disagrees with the reference");
        const std::size_t m = 1 + rng.below(8);
        expect(top_m_indices(scores, m) == testsup::oracle_top_m(scores, m),
               "top-m disagrees with the reference");
    }

    const std::vector<double> betas{-0.5, 0.0, 0.2, 0.9};
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t regions = 1 + rng.below(6);
        const std::size_t tags = 1 + rng.below(6);
        std::vector<UnitEmbedding> region_embs;
        for (std::size_t i = 0; i < regions; ++i)
            region_embs.push_back(testsup::random_unit(rng, 8));
        Vocabulary vocab;
        for (std::size_t i = 0; i < tags; ++i) {
            vocab.entries.push_back("tag" + std::to_string(i));
            vocab.embeddings.push_back(testsup::random_unit(rng, 8));
        }
        const double beta = betas[trial % betas.size()];
        std::vector<std::vector<double>> scores(region_embs.size());
        for (std::size_t r = 0; r < region_embs.size(); ++r)
            for (const auto& t : vocab.embeddings)
                scores[r].push_back(similarity(region_embs[r], t));
        expect(select_regions(region_embs, vocab, beta) ==
                   testsup::oracle_select_regions(scores, beta),
               "region selection disagrees with the reference");
    }
}

void check_candidate_judging_behavior() {
    testsup::TestRng rng(0xca9d1da7u);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 1 + rng.below(12);
        std::vector<double> sims;
        for (std::size_t i = 0; i < n; ++i) sims.push_back(rng.uniform(-1.0, 1.0));

        // Any positive affine rescaling must pick the same winner.
        const double scale = rng.uniform(0.1, 5.0);
        const double shift = rng.uniform(-2.0, 2.0);
        auto rescaled = sims;
        for (auto& s : rescaled) s = scale * s + shift;
        expect(select_best_index(sims) == select_best_index(rescaled),
               "winner changed under positive affine rescaling");

        // Raising the threshold only ever removes sentences, and an
        // all-below-threshold set falls back to the single best sentence.
        const double lo = rng.uniform(-1.0, 0.9);
        const double hi = rng.uniform(lo, 1.0);
        const auto kept_lo = filter_by_similarity(sims, lo);
        const auto kept_hi = filter_by_similarity(sims, hi);
        for (const auto idx : kept_hi)
            expect(std::find(kept_lo.begin(), kept_lo.end(), idx) != kept_lo.end(),
                   "a stricter threshold kept a sentence the looser one dropped");
        const auto fallback = filter_by_similarity(sims, 1.0);
        expect(fallback == std::vector<std::size_t>{select_best_index(sims)},
               "all-filtered case must fall back to the single best sentence");
    }
}

void check_frozen_prompt() {
    const auto golden = testsup::read_file(kFixtures + "/prompt_donut.golden.txt");
    const auto clues = donut_clues();
    const ImageDims dims{400, 300};
    const auto prompt = serialize_prompt(clues, dims, TaskEnding::describe(), true);
    expect(prompt == golden, "rendered donut prompt differs from the frozen bytes");

    expect(TaskEnding::describe().render() == "Describe this image in detail:",
           "describe ending drifted");
    expect(TaskEnding::story().render() == "Tell me a creative story:", "story ending drifted");
    expect(TaskEnding::ads().render() ==
               "Write a product description to sell in eBay or Amazon marketplace to get "
               "lots of engagement:",
           "ads ending drifted");
    expect(TaskEnding::social().render() == "Social media post:", "social ending drifted");
    expect(TaskEnding::textbook().render() == "Textbook text:", "textbook ending drifted");
    expect(TaskEnding::vqa("How many donuts are there?").render() ==
               "How many donuts are there?",
           "question ending must be the question itself");

    auto with_ocr = clues;
    with_ocr.ocr_text = "HOT DONUTS 24/7";
    const auto ocr_prompt = serialize_prompt(with_ocr, dims, TaskEnding::describe(), true);
    expect(ocr_prompt.find("\n\nThis image contains text: HOT DONUTS 24/7\n\n") !=
               std::string::npos,
           "detected-text block missing or malformed");
}

void check_standard_settings() {
    const RunConfig config;
    expect(config.clues.top_m == 5, "top_m default drifted");
    expect(config.clues.beta == 0.2, "beta default drifted");
    expect(config.gamma == 0.2, "gamma default drifted");
    expect(config.candidates == 40, "candidate count default drifted");
    expect(config.clues.nms_iou == 0.5, "suppression overlap default drifted");
    expect(config.clues.nms_keep == 100, "suppression keep default drifted");
    expect(config.clues.min_area_fraction == 1.0 / 400.0, "small-region floor drifted");
    expect(config.sizes.large == 0.25 && config.sizes.moderate == 0.05,
           "size bucket thresholds drifted");
    expect(config.sampling.temperature == 0.8, "temperature default drifted");
    expect(config.sampling.frequency_penalty == 0.5, "frequency penalty default drifted");
    expect(config.sampling.max_tokens == 100, "max_tokens default drifted");
    expect(config.ending.kind == TaskEnding::Kind::describe, "default task drifted");
}

void check_cli_reproducibility() {
    const auto start = Clock::now();
    const auto dir = testsup::unique_temp_dir("acceptance_cli");
    const std::string cli = BEST_CLI_PATH;
    auto run = [&](const std::string& out) {
        const std::string cmd = "\"" + cli + "\" --seed 7 describe --config \"" + kFixtures +
                                "/config.ini\" --images \"" + kFixtures + "/corpus\" --out \"" +
                                out + "\" > /dev/null 2>&1";
        return std::system(cmd.c_str());
    };
    const auto out_a = (dir / "run_a.jsonl").string();
    const auto out_b = (dir / "run_b.jsonl").string();
    expect(run(out_a) == 0, "first describe run exited non-zero");
    expect(run(out_b) == 0, "second describe run exited non-zero");
    const auto a = testsup::read_file(out_a);
    expect(!a.empty(), "describe run produced no output");
    expect(a == testsup::read_file(out_b), "two seeded runs differ");
    expect(a == testsup::read_file(kFixtures + "/describe_seed7.golden.jsonl"),
           "seeded run differs from the frozen corpus output");
    expect(seconds_since(start) < 30.0, "two corpus runs took 30s or longer");
}

void check_region_pair_baseline() {
    ModelGateway gateway(std::make_shared<MockBackend>(7, 16));
    const auto objects = load_vocabulary(kFixtures + "/objects.txt", gateway);
    const auto attrs = load_vocabulary(kFixtures + "/attributes.txt", gateway);
    const auto relations = load_vocabulary(kFixtures + "/relations.txt", gateway);
    const auto dir = testsup::unique_temp_dir("acceptance_naive");
    const auto image = load_image(testsup::write_corpus(dir, 1).front());

    for (const std::size_t n : {1u, 2u, 3u, 5u}) {
        std::vector<BoundingBox> regions;
        for (std::size_t i = 0; i < n; ++i) {
            const double x0 = 2.0 + 3.0 * static_cast<double>(i);
            const double y0 = 2.0 + 2.0 * static_cast<double>(i);
            regions.push_back({x0, y0, x0 + 18.0, y0 + 12.0, 0.9});
        }
        const auto graph = naive_baseline_graph(image, regions, objects, attrs, relations,
                                                gateway);
        expect(graph.attributes.size() == n,
               "baseline must emit one attribute per region (n=" + std::to_string(n) + ")");
        expect(graph.relations.size() == n * (n - 1) / 2,
               "baseline must emit one relation per region pair (n=" + std::to_string(n) + ")");
        for (const auto& o : graph.objects)
            expect(std::find(objects.entries.begin(), objects.entries.end(), o) !=
                       objects.entries.end(),
                   "baseline object outside its vocabulary");
        graph.validate();
    }
}

void check_answer_reformatting() {
    const std::string expected =
        "Question: What is this bird called?\n"
        "Long answer: The bird in this image is called a cockatoo.\n"
        "Short answer: Cockatoo.\n"
        "\n"
        "Question: Is the chair on the left or on the right of the desk?\n"
        "Long answer: The chair is on the left of the desk.\n"
        "Short answer: Left.\n"
        "\n"
        "Question: What color is the cup?\n"
        "Long answer: The cup on the table is blue.\n"
        "Short answer:";
    expect(vqa_reformat_prompt("What color is the cup?", "The cup on the table is blue.") ==
               expected,
           "answer-shortening prompt drifted from its frozen form");

    ModelGateway gateway(std::make_shared<MockBackend>(3, 16));
    const std::vector<std::string> pool{"cockatoo", "left",  "right", "two",   "three",
                                        "blue",     "red",   "yes",   "no",    "table",
                                        "kitchen",  "beach", "dog",   "woman", "skateboard"};
    const auto index = AnswerIndex::build(pool, gateway);
    const std::vector<std::string> words{"a",     "small", "bird", "on",   "the",  "left",
                                         "table", "two",   "red",  "dogs", "near", "water"};
    testsup::TestRng rng(0xd15c0u);
    for (int trial = 0; trial < 1000; ++trial) {
        std::string phrase;
        const std::size_t len = 1 + rng.below(4);
        for (std::size_t i = 0; i < len; ++i) {
            if (i) phrase += ' ';
            phrase += words[rng.below(words.size())];
        }
        const auto snapped = discriminative_answer(phrase, index, gateway);
        expect(std::find(pool.begin(), pool.end(), snapped) != pool.end(),
               "snapped answer left the candidate pool: " + snapped);
    }
}

}  // namespace

int main() {
    criterion("tuple matching always finds an optimal assignment",
              check_matching_against_oracle);
    criterion("graph scoring is perfect on itself and symmetric across sides",
              check_self_score_and_symmetry);
    criterion("the snowboard parse reduces to its expected propositions",
              check_snowboard_reduction);
    criterion("box suppression matches a brute-force reference on random inputs",
              check_box_suppression);
    criterion("selection primitives match their references on random inputs",
              check_selection_primitives);
    criterion("candidate judging is rescale-invariant and degrades to a fallback",
              check_candidate_judging_behavior);
    criterion("prompt rendering reproduces the frozen example byte for byte",
              check_frozen_prompt);
    criterion("standard settings carry their documented values", check_standard_settings);
    criterion("seeded corpus runs are reproducible through the command line",
              check_cli_reproducibility);
    criterion("the region-pair baseline emits the expected graph shape",
              check_region_pair_baseline);
    criterion("answer reformatting is frozen and snapping stays inside the index",
              check_answer_reformatting);

    if (failures != 0) {
        std::cout << failures << " criterion(s) failed\n";
        return 1;
    }
    std::cout << "all criteria passed\n";
    return 0;
}
