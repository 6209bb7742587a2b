#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "toxprof/compare.hpp"
#include "toxprof/consistency.hpp"
#include "toxprof/scorer.hpp"
#include "toxprof/temporal.hpp"
#include "toxprof/textstats.hpp"
#include "toxprof/webcontent.hpp"

namespace toxprof {

/// Every report file opens with "# config_hash=... seed=... scorer=..." so
/// each number traces back to one configuration and scoring run.
struct Provenance {
    std::string config_hash;
    std::uint64_t seed = 0;
    std::string scorer_id;

    std::string comment_line() const;
};

/// Minimal CSV sink: comma separator, '\n' line endings, header row, fields
/// quoted only when they contain a comma, quote, or newline.
class CsvFile {
public:
    CsvFile(const std::filesystem::path& path, const Provenance& provenance,
            const std::vector<std::string>& header);
    ~CsvFile();

    void row(const std::vector<std::string>& fields);
    void comment(const std::string& text);

    CsvFile(const CsvFile&) = delete;
    CsvFile& operator=(const CsvFile&) = delete;

private:
    std::string buffer_;
    std::filesystem::path path_;
    std::size_t columns_ = 0;
};

std::string fmt_count(std::size_t n);
std::string fmt_ratio(double v);    // 4 decimals; NaN renders as "nan"
std::string fmt_weight(double v);   // 2 decimals
std::string fmt_score(double v);    // 6 decimals
std::string fmt_minutes(double v);  // 2 decimals
std::string fmt_pvalue(double v);   // scientific, 4 significant digits

/// Analysis results for one profile group (focus or random). Fields are
/// optional because the owning stages run independently; each stage fills
/// what it computed.
struct GroupAnalysis {
    std::optional<DiversityStats> diversity;
    std::vector<HashtagRank> top_hashtags;
    std::vector<std::pair<std::string, std::size_t>> category_histogram;
    std::optional<TopicModel> topics;
    std::optional<ReadabilityReport> readability;
    std::optional<IntervalPdf> interval_pdf;
    std::vector<double> interval_values;
    std::optional<std::array<double, 24>> hour_pdf;
    std::optional<std::array<double, 7>> weekday_pdf;
};

/// Per-dimension aggregate the report files are rendered from.
struct GroupReport {
    Dimension dimension = Dimension::toxicity;
    SelectionResult selection;
    GroupAnalysis focus;
    GroupAnalysis random;
    std::optional<std::array<SimilarityProfile, 3>> domain_similarity;
    std::optional<std::array<SimilarityProfile, 3>> hashtag_similarity;
};

// Table analogues -----------------------------------------------------------

void render_selection_csv(const std::filesystem::path& path, const Provenance& prov,
                          const std::vector<ProfileSummary>& summaries,
                          const SelectionResult& selection);

void render_summaries_csv(const std::filesystem::path& path, const Provenance& prov,
                          const std::vector<ProfileSummary>& summaries);

void render_trend_csv(const std::filesystem::path& path, const Provenance& prov,
                      const std::map<Dimension, TrendFit>& fits);

/// URL/domain/category breakdown table, readability table, hashtag tables,
/// topic table, and the per-profile count export for one dimension.
/// Returns the file names written under out_dir.
std::vector<std::string> render_characterization(const std::filesystem::path& out_dir,
                                                 const Provenance& prov,
                                                 const GroupReport& report);

/// Similarity CDF exports (domains and hashtags) for one dimension.
std::vector<std::string> render_similarity(const std::filesystem::path& out_dir,
                                           const Provenance& prov,
                                           const GroupReport& report);

/// Interval PDF/CDF, hour and weekday distributions, and the temporal
/// summary for one dimension.
std::vector<std::string> render_temporal(const std::filesystem::path& out_dir,
                                         const Provenance& prov,
                                         const GroupReport& report);

// Figure-data analogues ------------------------------------------------------

void render_score_cdf_csv(const std::filesystem::path& path, const Provenance& prov,
                          const ScoreMap& scores);

void render_binarized_cdf_csv(const std::filesystem::path& path, const Provenance& prov,
                              const std::vector<ProfileSummary>& summaries);

void render_monthly_median_csv(
    const std::filesystem::path& path, const Provenance& prov,
    const std::map<Dimension, std::vector<std::pair<YearMonth, double>>>& series);

void render_pearson_csv(const std::filesystem::path& path, const Provenance& prov,
                        const PearsonMatrix& matrix);

void render_scatter_csv(const std::filesystem::path& path, const Provenance& prov,
                        const std::vector<ProfileSummary>& summaries, Dimension dimension,
                        double median_threshold, double gini_threshold);

void render_kl_matrix_csv(const std::filesystem::path& path, const Provenance& prov,
                          const std::vector<std::string>& group_names,
                          const std::vector<std::vector<double>>& matrix,
                          double lo, double hi, std::size_t bins);

}  // namespace toxprof
