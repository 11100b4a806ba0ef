// Command-line front end: describe a corpus, score scene graphs, or run the
// VQA protocols. `--seed` swaps in the deterministic mock backends so whole
// runs reproduce bit-for-bit without any model services.
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include <best/best.hpp>

namespace {

best::RunConfig load_run_config(const std::string& config_path,
                                const std::optional<long long>& seed) {
    best::RunConfig config = best::load_config(config_path);
    if (seed) {
        config.backend.kind = best::BackendKind::mock;
        config.backend.seed = static_cast<std::uint64_t>(*seed);
    }
    return config;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Visual-clue prompting pipeline and scene-graph metric"};
    app.require_subcommand(1);

    std::optional<long long> seed;
    app.add_option("--seed", seed,
                   "Use deterministic mock backends seeded with this value");

    auto* describe = app.add_subcommand("describe", "Generate descriptions for a corpus");
    std::string describe_config, describe_images, describe_out;
    describe->add_option("--config", describe_config, "Run configuration file")->required();
    describe->add_option("--images", describe_images, "Image directory or list file")
        ->required();
    describe->add_option("--out", describe_out, "Output JSONL path")->required();

    auto* spipe = app.add_subcommand("spipe", "Score candidate scene graphs");
    std::string spipe_candidates, spipe_references, spipe_lexicon, spipe_out;
    spipe->add_option("--candidates", spipe_candidates,
                      "Candidate graphs (JSONL file or directory of .json/.conllu)")
        ->required();
    spipe->add_option("--references", spipe_references, "Directory of reference .json graphs")
        ->required();
    spipe->add_option("--lexicon", spipe_lexicon, "Synonym lexicon file")->required();
    spipe->add_option("--out", spipe_out, "Report JSON path")->required();

    auto* vqa = app.add_subcommand("vqa", "Run visual question answering");
    std::string vqa_config, vqa_data, vqa_mode, vqa_out;
    vqa->add_option("--config", vqa_config, "Run configuration file")->required();
    vqa->add_option("--data", vqa_data, "Dataset JSONL path")->required();
    vqa->add_option("--mode", vqa_mode, "generative or discriminative")->required();
    vqa->add_option("--out", vqa_out, "Optional report JSON path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (describe->parsed()) {
            const auto config = load_run_config(describe_config, seed);
            return best::cmd_describe(config, describe_images, describe_out);
        }
        if (spipe->parsed()) {
            return best::cmd_spipe(spipe_candidates, spipe_references, spipe_lexicon, spipe_out);
        }
        if (vqa->parsed()) {
            const auto config = load_run_config(vqa_config, seed);
            return best::cmd_vqa(config, vqa_data, best::vqa_mode_from_string(vqa_mode),
                                 vqa_out);
        }
    } catch (const best::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return best::exit_config_error;
    } catch (const best::InvalidInput& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return best::exit_config_error;
    } catch (const best::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return best::exit_config_error;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return best::exit_partial_failure;
    }
    return best::exit_config_error;
}
