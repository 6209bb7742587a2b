#include "toxprof/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "toxprof/rng.hpp"

namespace toxprof {

namespace {

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
    std::filesystem::path path(p);
    if (path.is_absolute()) return path;
    return base / path;
}

void check_threshold(double v, const char* name) {
    if (v < 0.0 || v > 1.0) {
        throw ConfigError(std::string("config: ") + name + " must lie in [0,1]");
    }
}

void check_file(const std::filesystem::path& p, const char* name) {
    if (p.empty()) throw ConfigError(std::string("config: missing required path '") + name + "'");
    if (!std::filesystem::exists(p)) {
        throw ConfigError(std::string("config: ") + name + " not found: " + p.string());
    }
}

}  // namespace

PipelineConfig PipelineConfig::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path.string());
    nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
        throw ConfigError("config file is not a JSON object: " + path.string());
    }
    const std::filesystem::path base = path.has_parent_path()
                                           ? path.parent_path()
                                           : std::filesystem::path(".");

    PipelineConfig cfg;
    try {
        if (auto it = j.find("corpus_files"); it != j.end()) {
            for (const auto& f : *it) cfg.corpus_files.push_back(resolve(base, f.get<std::string>()));
        }
        auto path_field = [&](const char* key, std::filesystem::path& out) {
            if (auto it = j.find(key); it != j.end()) out = resolve(base, it->get<std::string>());
        };
        path_field("stopwords_file", cfg.stopwords_file);
        path_field("obscene_lexicon_file", cfg.obscene_lexicon_file);
        path_field("suffix_rules_file", cfg.suffix_rules_file);
        path_field("category_map_file", cfg.category_map_file);
        path_field("lexicon_file", cfg.lexicon_file);
        path_field("score_cache_file", cfg.score_cache_file);
        path_field("output_dir", cfg.output_dir);

        cfg.scorer_backend = j.value("scorer_backend", cfg.scorer_backend);
        if (auto it = j.find("remote"); it != j.end()) {
            cfg.remote.url = it->value("url", std::string{});
            cfg.remote.api_key_env = it->value("api_key_env", std::string{});
            cfg.remote.requests_per_minute =
                it->value("requests_per_minute", cfg.remote.requests_per_minute);
            cfg.remote.max_attempts = it->value("max_attempts", cfg.remote.max_attempts);
            cfg.remote.base_delay_seconds =
                it->value("base_delay_seconds", cfg.remote.base_delay_seconds);
            cfg.remote.backoff_factor = it->value("backoff_factor", cfg.remote.backoff_factor);
        }
        if (auto it = j.find("thresholds"); it != j.end()) {
            cfg.median_threshold = it->value("median", cfg.median_threshold);
            cfg.gini_threshold = it->value("gini", cfg.gini_threshold);
            cfg.binarize_threshold = it->value("binarize", cfg.binarize_threshold);
            cfg.obscene_threshold = it->value("obscene", cfg.obscene_threshold);
            cfg.min_tweets = it->value("min_tweets", cfg.min_tweets);
        }
        cfg.lang = j.value("lang", cfg.lang);
        cfg.include_retweets_text = j.value("include_retweets_text", cfg.include_retweets_text);
        cfg.strict_ingest = j.value("strict_ingest", cfg.strict_ingest);
        if (auto it = j.find("active_dimensions"); it != j.end()) {
            cfg.active_dimensions.clear();
            for (const auto& name : *it) {
                auto dim = dimension_from_string(name.get<std::string>());
                if (!dim) throw ConfigError("config: unknown dimension '" +
                                            name.get<std::string>() + "'");
                cfg.active_dimensions.push_back(*dim);
            }
        }
        if (auto it = j.find("lda"); it != j.end()) {
            cfg.lda.topics = it->value("topics", cfg.lda.topics);
            cfg.lda.alpha = it->value("alpha", cfg.lda.alpha);
            cfg.lda.beta = it->value("beta", cfg.lda.beta);
            cfg.lda.iterations = it->value("iterations", cfg.lda.iterations);
        }
        cfg.rng_seed = j.value("rng_seed", cfg.rng_seed);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config: malformed field: ") + e.what());
    }
    return cfg;
}

void PipelineConfig::validate() const {
    check_threshold(median_threshold, "median threshold");
    check_threshold(gini_threshold, "gini threshold");
    check_threshold(binarize_threshold, "binarize threshold");
    check_threshold(obscene_threshold, "obscene threshold");
    if (min_tweets < 1) throw ConfigError("config: min_tweets must be >= 1");
    if (scorer_backend != "lexicon" && scorer_backend != "remote") {
        throw ConfigError("config: scorer_backend must be 'lexicon' or 'remote'");
    }
    if (corpus_files.empty()) throw ConfigError("config: corpus_files must not be empty");
    for (const auto& f : corpus_files) check_file(f, "corpus file");
    check_file(stopwords_file, "stopwords_file");
    check_file(obscene_lexicon_file, "obscene_lexicon_file");
    check_file(suffix_rules_file, "suffix_rules_file");
    check_file(category_map_file, "category_map_file");
    if (scorer_backend == "lexicon") check_file(lexicon_file, "lexicon_file");
    if (scorer_backend == "remote" && remote.url.empty()) {
        throw ConfigError("config: remote scorer requires remote.url");
    }
    if (lda.topics < 1) throw ConfigError("config: lda.topics must be >= 1");
    if (active_dimensions.empty()) {
        throw ConfigError("config: active_dimensions must not be empty");
    }
    if (output_dir.empty()) throw ConfigError("config: output_dir must not be empty");
}

std::string PipelineConfig::config_hash() const {
    std::ostringstream canon;
    canon << "corpus=";
    for (const auto& f : corpus_files) canon << f.string() << ';';
    canon << "|stopwords=" << stopwords_file.string()
          << "|obscene=" << obscene_lexicon_file.string()
          << "|suffix=" << suffix_rules_file.string()
          << "|categories=" << category_map_file.string()
          << "|lexicon=" << lexicon_file.string()
          << "|backend=" << scorer_backend << "|remote_url=" << remote.url
          << "|median=" << median_threshold << "|gini=" << gini_threshold
          << "|binarize=" << binarize_threshold << "|obscene_t=" << obscene_threshold
          << "|min_tweets=" << min_tweets << "|lang=" << lang
          << "|rt_text=" << include_retweets_text << "|strict=" << strict_ingest
          << "|dims=";
    for (Dimension d : active_dimensions) canon << to_string(d) << ',';
    canon << "|lda=" << lda.topics << ',' << lda.alpha << ',' << lda.beta << ','
          << lda.iterations << "|seed=" << rng_seed;

    char buf[24];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(canon.str())));
    return buf;
}

}  // namespace toxprof
