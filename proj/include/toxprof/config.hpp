#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "toxprof/scorer.hpp"

namespace toxprof {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct LdaConfig {
    std::size_t topics = 3;
    double alpha = -1.0;  // <= 0 selects 50/K
    double beta = 0.01;
    std::size_t iterations = 1000;
};

struct RemoteConfig {
    std::string url;
    std::string api_key_env;
    double requests_per_minute = 60.0;
    std::size_t max_attempts = 5;
    double base_delay_seconds = 1.0;
    double backoff_factor = 2.0;
};

/// All pipeline inputs, thresholds, and seeds in one place. Paths in a config
/// file are resolved relative to the file's directory.
struct PipelineConfig {
    std::vector<std::filesystem::path> corpus_files;
    std::filesystem::path stopwords_file;
    std::filesystem::path obscene_lexicon_file;
    std::filesystem::path suffix_rules_file;
    std::filesystem::path category_map_file;
    std::filesystem::path lexicon_file;
    std::filesystem::path score_cache_file;  // defaults to <output_dir>/score_cache.jsonl

    std::string scorer_backend = "lexicon";  // "lexicon" | "remote"
    RemoteConfig remote;

    double median_threshold = 0.4;
    double gini_threshold = 0.25;
    double binarize_threshold = 0.4;
    double obscene_threshold = 0.8;
    std::size_t min_tweets = 10;

    std::string lang = "en";
    bool include_retweets_text = false;  // retweet text in topics/readability
    bool strict_ingest = false;

    std::vector<Dimension> active_dimensions{
        Dimension::identity_attack, Dimension::inflammatory,
        Dimension::insult, Dimension::threat};

    LdaConfig lda;
    std::uint64_t rng_seed = 1;
    std::filesystem::path output_dir = "out";

    static PipelineConfig load(const std::filesystem::path& path);

    /// Throws ConfigError on out-of-range thresholds or missing input files.
    void validate() const;

    /// Hash of the analytic configuration. The output directory is excluded
    /// so relocated runs stay comparable.
    std::string config_hash() const;

    std::filesystem::path effective_cache_file() const {
        return score_cache_file.empty() ? output_dir / "score_cache.jsonl" : score_cache_file;
    }
};

}  // namespace toxprof
