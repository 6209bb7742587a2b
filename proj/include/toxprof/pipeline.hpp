#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "toxprof/config.hpp"
#include "toxprof/consistency.hpp"
#include "toxprof/corpus.hpp"
#include "toxprof/report.hpp"
#include "toxprof/scorer.hpp"

namespace toxprof {

/// Orchestrates the full workflow. Stages can run individually (each loads
/// what it needs from the config and persisted artifacts) or end to end via
/// run_all(). Every random draw is derived from the config seed through named
/// sub-seeds, so outputs are byte-deterministic for a given config.
class Pipeline {
public:
    explicit Pipeline(PipelineConfig config);

    void run_ingest();
    void run_score();
    void run_summarize();
    void run_select();
    void run_characterize();
    void run_compare();
    void run_temporal();
    void run_all();

    void write_manifest();

    const PipelineConfig& config() const { return config_; }
    const Corpus& corpus();
    const ScoreMap& scores();
    const std::vector<ProfileSummary>& summaries();
    const SelectionResult& selection(Dimension d);
    const GroupReport& group_report(Dimension d);
    const Provenance& provenance();

private:
    void ensure_corpus();
    void ensure_scores();
    void ensure_summaries();
    void ensure_selections();
    void ensure_provenance();
    GroupReport& report_for(Dimension d);
    ScoringFn make_scorer();
    TweetFilter content_filter() const { return {config_.lang, true}; }
    TweetFilter text_filter() const { return {config_.lang, config_.include_retweets_text}; }

    void note(const std::string& stage, const std::string& message);
    void stage_done(const std::string& stage, std::vector<std::string> files,
                    nlohmann::json extra = nlohmann::json::object());
    std::filesystem::path out(const std::string& name) const;

    PipelineConfig config_;
    Provenance provenance_;
    bool provenance_ready_ = false;

    std::optional<Corpus> corpus_;
    std::optional<ScoreMap> scores_;
    ScoreRunStats score_stats_;
    std::vector<ScoreFailure> score_failures_;
    std::uint64_t foreign_cache_entries_ = 0;
    std::optional<std::vector<ProfileSummary>> summaries_;
    std::set<std::string> eligible_;
    std::map<Dimension, SelectionResult> selections_;
    std::map<Dimension, GroupReport> group_reports_;
    std::optional<Lexicon> lexicon_;

    nlohmann::json manifest_;
};

}  // namespace toxprof
