#include "toxprof/pipeline.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "toxprof/compare.hpp"
#include "toxprof/remote_scorer.hpp"
#include "toxprof/rng.hpp"
#include "toxprof/temporal.hpp"
#include "toxprof/textstats.hpp"
#include "toxprof/webcontent.hpp"

namespace toxprof {

namespace {

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read file: " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::string hex64(std::uint64_t value) {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(value));
    return buf;
}

void write_json_file(const std::filesystem::path& path, const nlohmann::json& j) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path.string());
    out << j.dump(2) << '\n';
}

}  // namespace

Pipeline::Pipeline(PipelineConfig config) : config_(std::move(config)) {
    config_.validate();
    std::filesystem::create_directories(config_.output_dir);

    manifest_ = nlohmann::json::object();
    const auto manifest_path = config_.output_dir / "manifest.json";
    if (std::filesystem::exists(manifest_path)) {
        std::ifstream in(manifest_path);
        nlohmann::json existing = nlohmann::json::parse(in, nullptr, false);
        if (existing.is_object()) manifest_ = std::move(existing);
    }
    if (!manifest_.contains("stages")) manifest_["stages"] = nlohmann::json::object();
    if (!manifest_.contains("notes")) manifest_["notes"] = nlohmann::json::array();
    if (!manifest_.contains("sub_seeds")) manifest_["sub_seeds"] = nlohmann::json::object();
}

std::filesystem::path Pipeline::out(const std::string& name) const {
    return config_.output_dir / name;
}

void Pipeline::ensure_provenance() {
    if (provenance_ready_) return;
    provenance_.config_hash = config_.config_hash();
    provenance_.seed = config_.rng_seed;
    if (config_.scorer_backend == "lexicon") {
        provenance_.scorer_id = "lexicon-" + hex64(fnv1a64(read_file(config_.lexicon_file)));
    } else {
        provenance_.scorer_id = "remote-" + config_.remote.url;
    }
    provenance_ready_ = true;

    manifest_["config_hash"] = provenance_.config_hash;
    manifest_["seed"] = provenance_.seed;
    manifest_["scorer"] = provenance_.scorer_id;
    manifest_["lang"] = config_.lang;
    manifest_["thresholds"] = {
        {"median", config_.median_threshold},   {"gini", config_.gini_threshold},
        {"binarize", config_.binarize_threshold}, {"obscene", config_.obscene_threshold},
        {"min_tweets", config_.min_tweets},
    };
    nlohmann::json dims = nlohmann::json::array();
    for (Dimension d : config_.active_dimensions) dims.push_back(std::string(to_string(d)));
    manifest_["active_dimensions"] = std::move(dims);
    manifest_["trend_x_encoding"] = "month_index_0based";
}

const Provenance& Pipeline::provenance() {
    ensure_provenance();
    return provenance_;
}

void Pipeline::note(const std::string& stage, const std::string& message) {
    manifest_["notes"].push_back(stage + ": " + message);
}

void Pipeline::stage_done(const std::string& stage, std::vector<std::string> files,
                          nlohmann::json extra) {
    nlohmann::json entry = std::move(extra);
    entry["status"] = "ok";
    entry["files"] = files;
    manifest_["stages"][stage] = std::move(entry);
}

void Pipeline::ensure_corpus() {
    if (corpus_) return;
    const auto normalized = out("corpus.jsonl");
    CorpusBuilder builder;
    if (std::filesystem::exists(normalized)) {
        builder.add_file(normalized, /*strict=*/true);
    } else {
        for (const auto& file : config_.corpus_files) {
            builder.add_file(file, config_.strict_ingest);
        }
    }
    corpus_ = builder.build();
}

ScoringFn Pipeline::make_scorer() {
    if (config_.scorer_backend == "lexicon") {
        if (!lexicon_) lexicon_ = Lexicon::load(config_.lexicon_file);
        const Lexicon* lex = &*lexicon_;
        return [lex](const TweetRecord& r) { return score_text_lexicon(r.text, *lex); };
    }
    RemoteScorerOptions options;
    options.url = config_.remote.url;
    if (!config_.remote.api_key_env.empty()) {
        if (const char* key = std::getenv(config_.remote.api_key_env.c_str())) {
            options.api_key = key;
        }
    }
    options.requests_per_minute = config_.remote.requests_per_minute;
    options.retry.max_attempts = config_.remote.max_attempts;
    options.retry.base_delay = std::chrono::duration<double>(config_.remote.base_delay_seconds);
    options.retry.backoff_factor = config_.remote.backoff_factor;
    options.lang = config_.lang;
    auto scorer = std::make_shared<RemoteScorer>(std::move(options));
    return [scorer](const TweetRecord& r) { return scorer->score(r.text); };
}

void Pipeline::ensure_scores() {
    if (scores_) return;
    ensure_corpus();
    ensure_provenance();
    const auto cache_path = config_.effective_cache_file();
    ScoreCache cache =
        ScoreCache::load(cache_path, provenance_.scorer_id, &foreign_cache_entries_);
    score_failures_.clear();
    scores_ = score_corpus(*corpus_, content_filter(), make_scorer(), cache,
                           &score_failures_, &score_stats_);
    if (score_stats_.scorer_calls > 0) cache.save(cache_path);
}

void Pipeline::ensure_summaries() {
    if (summaries_) return;
    ensure_scores();
    eligible_ = filter_eligible_profiles(*corpus_, config_.min_tweets, content_filter());
    std::vector<std::string> excluded;
    summaries_ = summarize_profiles(*corpus_, *scores_, eligible_,
                                    config_.binarize_threshold, &excluded);
    for (const std::string& id : excluded) {
        note("summarize", "profile excluded (no scored tweets): " + id);
    }
}

void Pipeline::ensure_selections() {
    if (!selections_.empty()) return;
    ensure_summaries();
    const auto obscene = load_hashtag_lexicon_file(config_.obscene_lexicon_file);
    for (Dimension d : config_.active_dimensions) {
        const std::string seed_label = "select:" + std::string(to_string(d));
        const std::uint64_t sub_seed = derive_seed(config_.rng_seed, seed_label);
        manifest_["sub_seeds"][seed_label] = sub_seed;
        selections_[d] = run_selection(*summaries_, *corpus_, eligible_, d, obscene,
                                       config_.median_threshold, config_.gini_threshold,
                                       config_.obscene_threshold, sub_seed);
    }
}

const Corpus& Pipeline::corpus() {
    ensure_corpus();
    return *corpus_;
}

const ScoreMap& Pipeline::scores() {
    ensure_scores();
    return *scores_;
}

const std::vector<ProfileSummary>& Pipeline::summaries() {
    ensure_summaries();
    return *summaries_;
}

const SelectionResult& Pipeline::selection(Dimension d) {
    ensure_selections();
    return selections_.at(d);
}

void Pipeline::run_ingest() {
    ensure_provenance();
    CorpusBuilder builder;
    for (const auto& file : config_.corpus_files) {
        builder.add_file(file, config_.strict_ingest);
    }
    corpus_ = builder.build();

    std::ofstream corpus_out(out("corpus.jsonl"), std::ios::binary);
    serialize_corpus(*corpus_, corpus_out);
    corpus_out.close();

    const IngestionLog& log = corpus_->ingestion;
    nlohmann::json report;
    report["lines_read"] = log.lines_read;
    report["records_valid"] = log.records_valid;
    report["lines_skipped"] = log.lines_skipped;
    report["duplicates"] = log.duplicates;
    report["profiles"] = corpus_->profiles.size();
    nlohmann::json skipped = nlohmann::json::array();
    for (const SkippedLine& s : log.skipped) {
        skipped.push_back({{"source", s.source}, {"line", s.line_number}, {"reason", s.reason}});
    }
    report["skipped"] = std::move(skipped);
    nlohmann::json dups = nlohmann::json::array();
    for (const SkippedLine& s : log.duplicate_lines) {
        dups.push_back({{"source", s.source}, {"line", s.line_number}, {"tweet_id", s.reason}});
    }
    report["duplicate_lines"] = std::move(dups);
    write_json_file(out("ingest_report.json"), report);

    stage_done("ingest", {"corpus.jsonl", "ingest_report.json"},
               {{"records", log.records_valid}, {"profiles", corpus_->profiles.size()}});
}

void Pipeline::run_score() {
    ensure_scores();
    nlohmann::json report;
    report["eligible_tweets"] = score_stats_.eligible;
    report["cache_hits"] = score_stats_.cache_hits;
    report["scorer_calls"] = score_stats_.scorer_calls;
    report["failures"] = score_stats_.failures;
    report["clamped_scores"] = score_stats_.clamped;
    report["foreign_cache_entries"] = foreign_cache_entries_;
    nlohmann::json failures = nlohmann::json::array();
    for (const ScoreFailure& f : score_failures_) {
        failures.push_back({{"tweet_id", f.tweet_id}, {"reason", f.reason}});
    }
    report["failure_log"] = std::move(failures);
    write_json_file(out("score_report.json"), report);
    if (foreign_cache_entries_ > 0) {
        note("score", std::to_string(foreign_cache_entries_) +
                          " cache entries from another scorer were ignored");
    }
    stage_done("score", {"score_report.json"},
               {{"scored", score_stats_.eligible - score_stats_.failures},
                {"cache_hits", score_stats_.cache_hits}});
}

void Pipeline::run_summarize() {
    ensure_summaries();
    render_summaries_csv(out("summaries.csv"), provenance_, *summaries_);
    render_score_cdf_csv(out("score_cdf.csv"), provenance_, *scores_);
    render_binarized_cdf_csv(out("binarized_cdf.csv"), provenance_, *summaries_);
    render_pearson_csv(out("pearson.csv"), provenance_, pearson_matrix(*scores_));
    stage_done("summarize",
               {"summaries.csv", "score_cdf.csv", "binarized_cdf.csv", "pearson.csv"},
               {{"eligible_profiles", eligible_.size()},
                {"summarized_profiles", summaries_->size()}});
}

void Pipeline::run_select() {
    ensure_selections();
    std::vector<std::string> files;
    nlohmann::json dims = nlohmann::json::object();
    for (Dimension d : config_.active_dimensions) {
        const std::string name(to_string(d));
        const SelectionResult& sel = selections_.at(d);
        const std::string select_file = "select_" + name + ".csv";
        const std::string scatter_file = "scatter_" + name + ".csv";
        render_selection_csv(out(select_file), provenance_, *summaries_, sel);
        render_scatter_csv(out(scatter_file), provenance_, *summaries_, d,
                           config_.median_threshold, config_.gini_threshold);
        files.push_back(select_file);
        files.push_back(scatter_file);
        dims[name] = {{"focus", sel.focus.size()},
                      {"random", sel.random_baseline.size()},
                      {"removed_obscene", sel.removed_obscene.size()}};
        if (sel.focus.empty()) note("select", "empty focus set for dimension " + name);
    }
    stage_done("select", std::move(files), {{"dimensions", dims}});
}

GroupReport& Pipeline::report_for(Dimension d) {
    ensure_selections();
    GroupReport& report = group_reports_[d];
    report.dimension = d;
    report.selection = selections_.at(d);
    return report;
}

const GroupReport& Pipeline::group_report(Dimension d) {
    return report_for(d);
}

void Pipeline::run_characterize() {
    ensure_selections();
    const auto stopwords = load_stopwords_file(config_.stopwords_file);
    const auto rules = SuffixRuleSet::load(config_.suffix_rules_file);
    const auto categories = CategoryMap::load(config_.category_map_file);
    const TweetFilter content = content_filter();
    const TweetFilter text = text_filter();

    std::vector<std::string> files;
    for (Dimension d : config_.active_dimensions) {
        const std::string name(to_string(d));
        const SelectionResult& sel = selections_.at(d);
        if (sel.focus.empty()) {
            note("characterize", "skipped dimension " + name + ": empty focus set");
            continue;
        }
        GroupReport& report = report_for(d);

        auto fit_topics = [&](const std::set<std::string>& group,
                              const std::string& group_name) -> std::optional<TopicModel> {
            std::vector<TokenizedDoc> docs;
            std::size_t empty_docs = 0;
            for (const std::string& profile_id : group) {
                auto it = corpus_->profiles.find(profile_id);
                if (it == corpus_->profiles.end()) continue;
                TokenizedDoc doc = normalize(profile_id, it->second, text, stopwords);
                if (doc.tokens.empty()) {
                    ++empty_docs;
                    continue;
                }
                docs.push_back(std::move(doc));
            }
            if (empty_docs > 0) {
                note("characterize", name + "/" + group_name + ": " +
                                         std::to_string(empty_docs) +
                                         " profiles had no tokens after normalization");
            }
            if (docs.empty()) {
                note("characterize",
                     name + "/" + group_name + ": topics skipped, no usable documents");
                return std::nullopt;
            }
            const std::string seed_label = "lda:" + name + ":" + group_name;
            const std::uint64_t sub_seed = derive_seed(config_.rng_seed, seed_label);
            manifest_["sub_seeds"][seed_label] = sub_seed;
            return lda_fit(docs, config_.lda.topics, config_.lda.alpha, config_.lda.beta,
                           config_.lda.iterations, sub_seed);
        };
        auto analyze = [&](const std::set<std::string>& group,
                           const std::string& group_name, GroupAnalysis& analysis) {
            analysis.diversity = diversity_stats(group, *corpus_, content, rules, categories);
            analysis.top_hashtags = top_hashtags(group, *corpus_, content, 20);
            analysis.category_histogram =
                category_histogram(group, *corpus_, content, rules, categories, 20);
            analysis.topics = fit_topics(group, group_name);
            analysis.readability = readability_report(group, *corpus_, text);
        };
        analyze(sel.focus, "focus", report.focus);
        analyze(sel.random_baseline, "random", report.random);

        auto written = render_characterization(config_.output_dir, provenance_, report);
        files.insert(files.end(), written.begin(), written.end());
    }
    stage_done("characterize", std::move(files));
}

void Pipeline::run_compare() {
    ensure_selections();
    const auto rules = SuffixRuleSet::load(config_.suffix_rules_file);
    const TweetFilter content = content_filter();
    std::vector<std::string> files;

    // Per-dimension similarity CDFs (domains and hashtags).
    std::vector<std::string> kl_group_names;
    std::vector<std::vector<double>> domain_count_groups;
    std::vector<std::vector<double>> domain_similarity_groups;
    std::vector<std::vector<double>> hashtag_count_groups;
    std::vector<std::vector<double>> hashtag_similarity_groups;

    for (Dimension d : config_.active_dimensions) {
        const std::string name(to_string(d));
        const SelectionResult& sel = selections_.at(d);
        if (sel.focus.empty()) {
            note("compare", "skipped dimension " + name + ": empty focus set");
            continue;
        }
        GroupReport& report = report_for(d);
        const auto focus_domains = profile_domain_sets(sel.focus, *corpus_, content, rules);
        const auto random_domains =
            profile_domain_sets(sel.random_baseline, *corpus_, content, rules);
        report.domain_similarity = pairwise_similarity(focus_domains, random_domains);

        const auto focus_tags = profile_hashtag_sets(sel.focus, *corpus_, content);
        const auto random_tags = profile_hashtag_sets(sel.random_baseline, *corpus_, content);
        report.hashtag_similarity = pairwise_similarity(focus_tags, random_tags);

        auto written = render_similarity(config_.output_dir, provenance_, report);
        files.insert(files.end(), written.begin(), written.end());

        // Collections for the cross-dimension KL heat maps.
        const auto& domain_sim = *report.domain_similarity;
        const auto& tag_sim = *report.hashtag_similarity;
        std::vector<double> domain_counts, hashtag_counts;
        for (const auto& s : focus_domains) domain_counts.push_back(static_cast<double>(s.size()));
        for (const auto& s : focus_tags) hashtag_counts.push_back(static_cast<double>(s.size()));
        if (domain_sim[0].values.empty() || tag_sim[0].values.empty()) {
            note("compare", "dimension " + name +
                                " left out of KL matrices: fewer than two focus profiles");
            continue;
        }
        kl_group_names.push_back(name);
        domain_count_groups.push_back(std::move(domain_counts));
        domain_similarity_groups.push_back(domain_sim[0].values);
        hashtag_count_groups.push_back(std::move(hashtag_counts));
        hashtag_similarity_groups.push_back(tag_sim[0].values);
    }

    if (kl_group_names.size() >= 2) {
        auto count_range = [](const std::vector<std::vector<double>>& groups) {
            double hi = 1.0;
            for (const auto& g : groups) {
                for (double v : g) hi = std::max(hi, v);
            }
            return hi;
        };
        struct MatrixSpec {
            const char* file;
            const std::vector<std::vector<double>>* groups;
            double hi;
        };
        const double domain_hi = count_range(domain_count_groups);
        const double hashtag_hi = count_range(hashtag_count_groups);
        const MatrixSpec specs[] = {
            {"kl_domain_counts.csv", &domain_count_groups, domain_hi},
            {"kl_domain_similarity.csv", &domain_similarity_groups, 1.0},
            {"kl_hashtag_counts.csv", &hashtag_count_groups, hashtag_hi},
            {"kl_hashtag_similarity.csv", &hashtag_similarity_groups, 1.0},
        };
        constexpr std::size_t kBins = 101;
        for (const MatrixSpec& spec : specs) {
            const auto matrix = kl_matrix(*spec.groups, 0.0, spec.hi, kBins);
            render_kl_matrix_csv(out(spec.file), provenance_, kl_group_names, matrix, 0.0,
                                 spec.hi, kBins);
            files.emplace_back(spec.file);
        }
    } else {
        note("compare", "KL matrices skipped: fewer than two usable focus groups");
    }
    stage_done("compare", std::move(files));
}

void Pipeline::run_temporal() {
    ensure_selections();
    const TweetFilter content = content_filter();
    std::vector<std::string> files;

    for (Dimension d : config_.active_dimensions) {
        const std::string name(to_string(d));
        const SelectionResult& sel = selections_.at(d);
        if (sel.focus.empty()) {
            note("temporal", "skipped dimension " + name + ": empty focus set");
            continue;
        }
        GroupReport& report = report_for(d);
        report.focus.interval_values = pooled_intervals(*corpus_, sel.focus, content);
        report.random.interval_values =
            pooled_intervals(*corpus_, sel.random_baseline, content);
        if (report.focus.interval_values.empty() ||
            report.random.interval_values.empty()) {
            note("temporal", "skipped dimension " + name + ": empty interval series");
            continue;
        }
        report.focus.interval_pdf = interval_pdf(report.focus.interval_values);
        report.random.interval_pdf = interval_pdf(report.random.interval_values);
        report.focus.hour_pdf = hour_of_day_pdf(*corpus_, sel.focus, content);
        report.random.hour_pdf = hour_of_day_pdf(*corpus_, sel.random_baseline, content);
        report.focus.weekday_pdf = day_of_week_pdf(*corpus_, sel.focus, content);
        report.random.weekday_pdf =
            day_of_week_pdf(*corpus_, sel.random_baseline, content);

        auto written = render_temporal(config_.output_dir, provenance_, report);
        files.insert(files.end(), written.begin(), written.end());
    }

    // Corpus-wide monthly trend, all six dimensions.
    std::map<Dimension, std::vector<std::pair<YearMonth, double>>> monthly;
    std::map<Dimension, TrendFit> fits;
    for (Dimension d : kAllDimensions) {
        auto series = monthly_median_series(*corpus_, *scores_, d);
        if (series.size() >= 3) {
            fits[d] = ols_trend_monthly(series);
        } else {
            note("temporal", "trend skipped for " + std::string(to_string(d)) +
                                 ": fewer than 3 monthly points");
        }
        monthly[d] = std::move(series);
    }
    render_monthly_median_csv(out("monthly_median.csv"), provenance_, monthly);
    files.push_back("monthly_median.csv");
    if (!fits.empty()) {
        render_trend_csv(out("trend_table.csv"), provenance_, fits);
        files.push_back("trend_table.csv");
    }
    stage_done("temporal", std::move(files));
}

void Pipeline::write_manifest() {
    ensure_provenance();
    write_json_file(out("manifest.json"), manifest_);
}

void Pipeline::run_all() {
    manifest_["stages"] = nlohmann::json::object();
    manifest_["notes"] = nlohmann::json::array();
    manifest_["sub_seeds"] = nlohmann::json::object();

    struct Stage {
        const char* name;
        void (Pipeline::*fn)();
    };
    const Stage stages[] = {
        {"ingest", &Pipeline::run_ingest},       {"score", &Pipeline::run_score},
        {"summarize", &Pipeline::run_summarize}, {"select", &Pipeline::run_select},
        {"characterize", &Pipeline::run_characterize},
        {"compare", &Pipeline::run_compare},     {"temporal", &Pipeline::run_temporal},
    };
    for (const Stage& stage : stages) {
        try {
            (this->*stage.fn)();
        } catch (const ParseError&) {
            manifest_["stages"][stage.name] = {{"status", "error: parse failure"}};
            write_manifest();
            throw;  // keep the typed error so callers can map it to an exit code
        } catch (const std::exception& e) {
            manifest_["stages"][stage.name] = {{"status", std::string("error: ") + e.what()}};
            write_manifest();
            throw std::runtime_error("stage " + std::string(stage.name) + " failed: " +
                                     e.what());
        }
    }
    write_manifest();
}

}  // namespace toxprof
