#include <cstdint>
#include <cstdio>
#include <exception>
#include <map>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "toxprof/config.hpp"
#include "toxprof/pipeline.hpp"
#include "toxprof/synth.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitParseError = 1;
constexpr int kExitConfigError = 2;
constexpr int kExitRuntimeError = 3;

struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::string> dimension;
    std::optional<double> median_threshold;
    std::optional<double> gini_threshold;
    std::optional<std::size_t> min_tweets;
    std::optional<std::string> output_dir;
};

void add_override_flags(CLI::App* cmd, std::string& config_path, Overrides& overrides) {
    cmd->add_option("-c,--config", config_path, "pipeline config file (JSON)")->required();
    cmd->add_option("--seed", overrides.seed, "override rng_seed");
    cmd->add_option("--dimension", overrides.dimension,
                    "restrict active dimensions to one dimension");
    cmd->add_option("--median-threshold", overrides.median_threshold,
                    "override the focus median threshold");
    cmd->add_option("--gini-threshold", overrides.gini_threshold,
                    "override the focus Gini threshold");
    cmd->add_option("--min-tweets", overrides.min_tweets,
                    "override the eligibility tweet minimum");
    cmd->add_option("--output-dir", overrides.output_dir, "override the output directory");
}

toxprof::PipelineConfig load_config(const std::string& path, const Overrides& overrides) {
    toxprof::PipelineConfig cfg = toxprof::PipelineConfig::load(path);
    if (overrides.seed) cfg.rng_seed = *overrides.seed;
    if (overrides.median_threshold) cfg.median_threshold = *overrides.median_threshold;
    if (overrides.gini_threshold) cfg.gini_threshold = *overrides.gini_threshold;
    if (overrides.min_tweets) cfg.min_tweets = *overrides.min_tweets;
    if (overrides.output_dir) cfg.output_dir = *overrides.output_dir;
    if (overrides.dimension) {
        auto dim = toxprof::dimension_from_string(*overrides.dimension);
        if (!dim) {
            throw toxprof::ConfigError("unknown dimension: " + *overrides.dimension);
        }
        cfg.active_dimensions = {*dim};
    }
    return cfg;
}

int run_stage(const std::string& config_path, const Overrides& overrides,
              void (toxprof::Pipeline::*stage)(), bool write_manifest = true) {
    toxprof::Pipeline pipeline(load_config(config_path, overrides));
    (pipeline.*stage)();
    if (write_manifest) pipeline.write_manifest();
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"toxprof: consistently-toxic profile analysis pipeline"};
    app.require_subcommand(1);

    std::string config_path;
    Overrides overrides;

    struct StageCommand {
        const char* name;
        const char* description;
        void (toxprof::Pipeline::*fn)();
    };
    const StageCommand stage_commands[] = {
        {"ingest", "parse and index the corpus files", &toxprof::Pipeline::run_ingest},
        {"score", "attach misbehavior scores to every eligible tweet",
         &toxprof::Pipeline::run_score},
        {"summarize", "per-profile medians, Gini, binarized proportions",
         &toxprof::Pipeline::run_summarize},
        {"select", "select focus profiles and random baselines",
         &toxprof::Pipeline::run_select},
        {"characterize", "diversity, hashtags, topics, readability reports",
         &toxprof::Pipeline::run_characterize},
        {"compare", "similarity CDFs and KL divergence matrices",
         &toxprof::Pipeline::run_compare},
        {"temporal", "tweeting-pattern distributions and monthly trend",
         &toxprof::Pipeline::run_temporal},
        {"run-all", "execute every stage and write the manifest",
         &toxprof::Pipeline::run_all},
    };
    std::map<std::string, const StageCommand*> dispatch;
    for (const StageCommand& sc : stage_commands) {
        CLI::App* cmd = app.add_subcommand(sc.name, sc.description);
        add_override_flags(cmd, config_path, overrides);
        dispatch[sc.name] = &sc;
    }

    auto* synth = app.add_subcommand("synth", "generate a synthetic planted-profile corpus");
    toxprof::SynthParams synth_params;
    std::string synth_out = "synthetic_corpus.jsonl";
    synth->add_option("--n-focus", synth_params.n_focus, "number of planted focus profiles");
    synth->add_option("--n-random", synth_params.n_random, "number of diffuse random profiles");
    synth->add_option("--seed", synth_params.seed, "generator seed");
    synth->add_option("-o,--out", synth_out, "output corpus file");

    CLI11_PARSE(app, argc, argv);

    try {
        if (synth->parsed()) {
            toxprof::write_synthetic_corpus_file(synth_out, synth_params);
            std::printf("wrote %s (%zu focus + %zu random profiles, seed %llu)\n",
                        synth_out.c_str(), synth_params.n_focus, synth_params.n_random,
                        static_cast<unsigned long long>(synth_params.seed));
            return kExitOk;
        }
        for (const auto& [name, sc] : dispatch) {
            if (app.got_subcommand(name)) {
                const bool manifest_already = std::string(name) == "run-all";
                return run_stage(config_path, overrides, sc->fn, !manifest_already);
            }
        }
        std::fprintf(stderr, "no subcommand selected\n");
        return kExitRuntimeError;
    } catch (const toxprof::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfigError;
    } catch (const toxprof::ParseError& e) {
        std::fprintf(stderr, "parse error at %s:%llu: %s\n", e.source().c_str(),
                     static_cast<unsigned long long>(e.line_number()), e.what());
        return kExitParseError;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitRuntimeError;
    }
}
