#include "toxprof/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace toxprof {

namespace {

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string quoted = "\"";
    for (char c : field) {
        if (c == '"') quoted += "\"\"";
        else quoted.push_back(c);
    }
    quoted.push_back('"');
    return quoted;
}

std::string fmt(const char* pattern, double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), pattern, v);
    return buf;
}

const char* kWeekdayNames[7] = {"mon", "tue", "wed", "thu", "fri", "sat", "sun"};

std::string grid_x(std::size_t i) { return fmt("%.2f", static_cast<double>(i) / 100.0); }

}  // namespace

std::string Provenance::comment_line() const {
    return "# config_hash=" + config_hash + " seed=" + std::to_string(seed) +
           " scorer=" + scorer_id;
}

CsvFile::CsvFile(const std::filesystem::path& path, const Provenance& provenance,
                 const std::vector<std::string>& header)
    : path_(path), columns_(header.size()) {
    buffer_ = provenance.comment_line();
    buffer_.push_back('\n');
    row(header);
}

void CsvFile::row(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i > 0) buffer_.push_back(',');
        buffer_ += csv_escape(fields[i]);
    }
    buffer_.push_back('\n');
}

void CsvFile::comment(const std::string& text) {
    buffer_ += "# " + text + "\n";
}

CsvFile::~CsvFile() {
    if (path_.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path_.parent_path(), ec);
    }
    std::ofstream out(path_, std::ios::binary);
    out << buffer_;
}

std::string fmt_count(std::size_t n) { return std::to_string(n); }

std::string fmt_ratio(double v) {
    if (std::isnan(v)) return "nan";
    return fmt("%.4f", v);
}

std::string fmt_weight(double v) { return fmt("%.2f", v); }
std::string fmt_score(double v) { return fmt("%.6f", v); }
std::string fmt_minutes(double v) { return fmt("%.2f", v); }

std::string fmt_pvalue(double v) {
    if (v <= 1e-15) return "<1e-15";
    return fmt("%.4e", v);
}

void render_selection_csv(const std::filesystem::path& path, const Provenance& prov,
                          const std::vector<ProfileSummary>& summaries,
                          const SelectionResult& selection) {
    std::map<std::string, const ProfileSummary*> by_id;
    for (const ProfileSummary& s : summaries) by_id[s.profile_id] = &s;

    CsvFile csv(path, prov,
                {"profile_id", "dimension", "n_tweets", "median", "gini",
                 "binarized_proportion", "group"});
    auto emit = [&](const std::string& profile_id, const char* group) {
        auto it = by_id.find(profile_id);
        if (it == by_id.end()) return;
        const DimensionSummary& ds = it->second->dim(selection.dimension);
        csv.row({profile_id, std::string(to_string(selection.dimension)),
                 fmt_count(ds.n_tweets), fmt_ratio(ds.median), fmt_ratio(ds.gini),
                 fmt_ratio(ds.binarized_proportion), group});
    };
    for (const std::string& id : selection.focus) emit(id, "focus");
    for (const std::string& id : selection.random_baseline) emit(id, "random");
    for (const auto& [id, fraction] : selection.removed_obscene) emit(id, "removed_obscene");
}

void render_summaries_csv(const std::filesystem::path& path, const Provenance& prov,
                          const std::vector<ProfileSummary>& summaries) {
    CsvFile csv(path, prov,
                {"profile_id", "dimension", "n_tweets", "median", "gini",
                 "binarized_proportion"});
    for (const ProfileSummary& s : summaries) {
        for (Dimension d : kAllDimensions) {
            const DimensionSummary& ds = s.dim(d);
            csv.row({s.profile_id, std::string(to_string(d)), fmt_count(ds.n_tweets),
                     fmt_ratio(ds.median), fmt_ratio(ds.gini),
                     fmt_ratio(ds.binarized_proportion)});
        }
    }
}

void render_trend_csv(const std::filesystem::path& path, const Provenance& prov,
                      const std::map<Dimension, TrendFit>& fits) {
    CsvFile csv(path, prov, {"dimension", "coeff", "r2", "p_f"});
    for (const auto& [dim, fit] : fits) {
        csv.row({std::string(to_string(dim)), fmt_ratio(fit.slope),
                 fmt_ratio(fit.r_squared), fmt_pvalue(fit.p_value)});
    }
}

std::vector<std::string> render_characterization(const std::filesystem::path& out_dir,
                                                 const Provenance& prov,
                                                 const GroupReport& report) {
    const std::string dim(to_string(report.dimension));
    std::vector<std::string> files;
    const DiversityStats& focus = report.focus.diversity.value();
    const DiversityStats& random = report.random.diversity.value();
    auto empty_group_footnote = [&](CsvFile& csv) {
        if (focus.n_profiles == 0) csv.comment("note: focus group is empty");
        if (random.n_profiles == 0) csv.comment("note: random group is empty");
    };

    {
        const std::string name = "diversity_" + dim + ".csv";
        CsvFile csv(out_dir / name, prov, {"metric", "focus", "random"});
        empty_group_footnote(csv);
        auto count_row = [&](const char* metric, std::size_t f, std::size_t r) {
            csv.row({metric, fmt_count(f), fmt_count(r)});
        };
        auto ratio_row = [&](const char* metric, double f, double r) {
            csv.row({metric, fmt_ratio(f), fmt_ratio(r)});
        };
        count_row("urls", focus.n_urls, random.n_urls);
        count_row("unique_urls", focus.n_unique_urls, random.n_unique_urls);
        ratio_row("avg_unique_urls_per_sharing_profile",
                  focus.avg_unique_urls_per_sharing_profile,
                  random.avg_unique_urls_per_sharing_profile);
        count_row("domains", focus.n_domains, random.n_domains);
        count_row("unique_domains", focus.n_unique_domains, random.n_unique_domains);
        ratio_row("avg_unique_domains_per_sharing_profile",
                  focus.avg_unique_domains_per_sharing_profile,
                  random.avg_unique_domains_per_sharing_profile);
        count_row("domain_categories", focus.n_domain_categories,
                  random.n_domain_categories);
        ratio_row("categorized_fraction", focus.categorized_fraction,
                  random.categorized_fraction);
        files.push_back(name);
    }
    {
        const std::string name = "hashtag_stats_" + dim + ".csv";
        CsvFile csv(out_dir / name, prov, {"metric", "focus", "random"});
        empty_group_footnote(csv);
        csv.row({"profiles", fmt_count(focus.n_profiles), fmt_count(random.n_profiles)});
        csv.row({"all_hashtags", fmt_count(focus.n_hashtags_total),
                 fmt_count(random.n_hashtags_total)});
        csv.row({"unique_hashtags", fmt_count(focus.n_hashtags_unique),
                 fmt_count(random.n_hashtags_unique)});
        csv.row({"avg_all_hashtags_per_sharing_profile",
                 fmt_ratio(focus.avg_hashtags_per_sharing_profile),
                 fmt_ratio(random.avg_hashtags_per_sharing_profile)});
        csv.row({"avg_unique_hashtags_per_sharing_profile",
                 fmt_ratio(focus.avg_unique_hashtags_per_sharing_profile),
                 fmt_ratio(random.avg_unique_hashtags_per_sharing_profile)});
        files.push_back(name);
    }
    {
        const std::string name = "content_counts_" + dim + ".csv";
        CsvFile csv(out_dir / name, prov,
                    {"group", "profile_id", "unique_urls", "unique_domains",
                     "total_hashtags", "unique_hashtags"});
        auto emit = [&](const char* group, const DiversityStats& stats) {
            for (const auto& [profile_id, pcs] : stats.per_profile) {
                csv.row({group, profile_id, fmt_count(pcs.unique_urls),
                         fmt_count(pcs.unique_domains), fmt_count(pcs.total_hashtags),
                         fmt_count(pcs.unique_hashtags)});
            }
        };
        emit("focus", focus);
        emit("random", random);
        files.push_back(name);
    }
    {
        const std::string name = "top_hashtags_" + dim + ".csv";
        CsvFile csv(out_dir / name, prov,
                    {"group", "rank", "hashtag", "occurrences", "pct_profiles_using"});
        auto emit = [&](const char* group, const std::vector<HashtagRank>& ranks) {
            std::size_t rank = 1;
            for (const HashtagRank& r : ranks) {
                csv.row({group, fmt_count(rank++), r.hashtag, fmt_count(r.occurrences),
                         fmt_ratio(r.pct_profiles_using)});
            }
        };
        emit("focus", report.focus.top_hashtags);
        emit("random", report.random.top_hashtags);
        files.push_back(name);
    }
    {
        const std::string name = "categories_" + dim + ".csv";
        CsvFile csv(out_dir / name, prov, {"group", "rank", "category", "references"});
        auto emit = [&](const char* group, const auto& histogram) {
            std::size_t rank = 1;
            for (const auto& [category, count] : histogram) {
                csv.row({group, fmt_count(rank++), category, fmt_count(count)});
            }
        };
        emit("focus", report.focus.category_histogram);
        emit("random", report.random.category_histogram);
        files.push_back(name);
    }
    {
        const std::string name = "topics_" + dim + ".csv";
        CsvFile csv(out_dir / name, prov, {"group", "topic", "rank", "word", "weight"});
        auto emit = [&](const char* group, const std::optional<TopicModel>& model) {
            if (!model) return;
            for (std::size_t topic = 0; topic < model->topic_count; ++topic) {
                const auto words = top_words(*model, topic, 5);
                std::size_t rank = 1;
                for (const auto& [word, weight] : words) {
                    csv.row({group, fmt_count(topic + 1), fmt_count(rank++), word,
                             fmt_weight(weight)});
                }
            }
        };
        emit("focus", report.focus.topics);
        emit("random", report.random.topics);
        files.push_back(name);
    }
    {
        const std::string name = "readability_" + dim + ".csv";
        CsvFile csv(out_dir / name, prov,
                    {"group", "n_profiles", "avg_sentences", "avg_richness",
                     "avg_flesch", "avg_ari"});
        auto emit = [&](const char* group, const std::optional<ReadabilityReport>& r) {
            if (!r) return;
            csv.row({group, fmt_count(r->n_profiles), fmt_minutes(r->avg_sentences),
                     fmt_ratio(r->avg_richness), fmt_minutes(r->avg_flesch),
                     fmt_minutes(r->avg_ari)});
        };
        emit("focus", report.focus.readability);
        emit("random", report.random.readability);
        files.push_back(name);
    }
    return files;
}

std::vector<std::string> render_similarity(const std::filesystem::path& out_dir,
                                           const Provenance& prov,
                                           const GroupReport& report) {
    const std::string dim(to_string(report.dimension));
    std::vector<std::string> files;
    auto emit = [&](const std::string& name,
                    const std::array<SimilarityProfile, 3>& profiles) {
        CsvFile csv(out_dir / name, prov, {"kind", "x", "cdf"});
        for (const SimilarityProfile& profile : profiles) {
            if (profile.degenerate) {
                csv.comment(std::string(to_string(profile.kind)) +
                            ": fewer than two members, no pairs");
            }
            for (std::size_t i = 0; i <= 100; ++i) {
                csv.row({std::string(to_string(profile.kind)), grid_x(i),
                         fmt_ratio(profile.cdf[i])});
            }
        }
        files.push_back(name);
    };
    if (report.domain_similarity) {
        emit("similarity_domains_" + dim + ".csv", *report.domain_similarity);
    }
    if (report.hashtag_similarity) {
        emit("similarity_hashtags_" + dim + ".csv", *report.hashtag_similarity);
    }
    return files;
}

std::vector<std::string> render_temporal(const std::filesystem::path& out_dir,
                                         const Provenance& prov,
                                         const GroupReport& report) {
    const std::string dim(to_string(report.dimension));
    std::vector<std::string> files;
    const IntervalPdf& focus_pdf = report.focus.interval_pdf.value();
    const IntervalPdf& random_pdf = report.random.interval_pdf.value();

    {
        const std::string name = "interval_pdf_" + dim + ".csv";
        CsvFile csv(out_dir / name, prov, {"group", "bin_start_minutes", "probability"});
        auto emit = [&](const char* group, const IntervalPdf& pdf) {
            for (std::size_t i = 0; i < pdf.pdf.bins(); ++i) {
                csv.row({group, fmt_minutes(pdf.pdf.bin_start(i)),
                         fmt_ratio(pdf.pdf.probabilities[i])});
            }
        };
        emit("focus", focus_pdf);
        emit("random", random_pdf);
        files.push_back(name);
    }
    {
        // one shared range so the two CDF series are comparable
        double hi = 1.0;
        for (double v : report.focus.interval_values) hi = std::max(hi, v);
        for (double v : report.random.interval_values) hi = std::max(hi, v);
        const std::string name = "interval_cdf_" + dim + ".csv";
        CsvFile csv(out_dir / name, prov, {"group", "x", "cdf"});
        auto emit = [&](const char* group, const std::vector<double>& values) {
            const auto cdf = cdf_grid(values, 0.0, hi);
            for (std::size_t i = 0; i <= 100; ++i) {
                csv.row({group, fmt_minutes(hi * static_cast<double>(i) / 100.0),
                         fmt_ratio(cdf[i])});
            }
        };
        emit("focus", report.focus.interval_values);
        emit("random", report.random.interval_values);
        files.push_back(name);
    }
    {
        const std::string name = "temporal_summary_" + dim + ".csv";
        CsvFile csv(out_dir / name, prov,
                    {"group", "n_intervals", "fraction_within_max", "quantile80_minutes",
                     "max_minutes"});
        auto emit = [&](const char* group, const IntervalPdf& pdf,
                        const std::vector<double>& values) {
            const IntervalCdf cdf(values);
            csv.row({group, fmt_count(pdf.n_total), fmt_ratio(pdf.fraction_within_max),
                     fmt_minutes(cdf.quantile(0.8)), fmt_minutes(cdf.max_value())});
        };
        emit("focus", focus_pdf, report.focus.interval_values);
        emit("random", random_pdf, report.random.interval_values);
        files.push_back(name);
    }
    {
        const std::string name = "hour_pdf_" + dim + ".csv";
        CsvFile csv(out_dir / name, prov, {"group", "hour_utc", "probability"});
        auto emit = [&](const char* group, const std::array<double, 24>& pdf) {
            for (std::size_t h = 0; h < 24; ++h) {
                csv.row({group, fmt_count(h), fmt_ratio(pdf[h])});
            }
        };
        emit("focus", report.focus.hour_pdf.value());
        emit("random", report.random.hour_pdf.value());
        files.push_back(name);
    }
    {
        const std::string name = "weekday_pdf_" + dim + ".csv";
        CsvFile csv(out_dir / name, prov, {"group", "weekday", "probability"});
        auto emit = [&](const char* group, const std::array<double, 7>& pdf) {
            for (std::size_t d = 0; d < 7; ++d) {
                csv.row({group, kWeekdayNames[d], fmt_ratio(pdf[d])});
            }
        };
        emit("focus", report.focus.weekday_pdf.value());
        emit("random", report.random.weekday_pdf.value());
        files.push_back(name);
    }
    return files;
}

void render_score_cdf_csv(const std::filesystem::path& path, const Provenance& prov,
                          const ScoreMap& scores) {
    std::array<std::vector<double>, kDimensionCount> per_dim;
    for (const auto& [tweet_id, vec] : scores) {
        for (std::size_t d = 0; d < kDimensionCount; ++d) {
            per_dim[d].push_back(vec.values[d]);
        }
    }
    CsvFile csv(path, prov, {"dimension", "x", "cdf"});
    for (std::size_t d = 0; d < kDimensionCount; ++d) {
        const auto cdf = cdf_grid_unit(per_dim[d]);
        for (std::size_t i = 0; i <= 100; ++i) {
            csv.row({std::string(to_string(static_cast<Dimension>(d))), grid_x(i),
                     fmt_ratio(cdf[i])});
        }
    }
}

void render_binarized_cdf_csv(const std::filesystem::path& path, const Provenance& prov,
                              const std::vector<ProfileSummary>& summaries) {
    std::array<std::vector<double>, kDimensionCount> per_dim;
    for (const ProfileSummary& s : summaries) {
        for (std::size_t d = 0; d < kDimensionCount; ++d) {
            per_dim[d].push_back(s.per_dimension[d].binarized_proportion);
        }
    }
    CsvFile csv(path, prov, {"dimension", "x", "cdf"});
    for (std::size_t d = 0; d < kDimensionCount; ++d) {
        const auto cdf = cdf_grid_unit(per_dim[d]);
        for (std::size_t i = 0; i <= 100; ++i) {
            csv.row({std::string(to_string(static_cast<Dimension>(d))), grid_x(i),
                     fmt_ratio(cdf[i])});
        }
    }
}

void render_monthly_median_csv(
    const std::filesystem::path& path, const Provenance& prov,
    const std::map<Dimension, std::vector<std::pair<YearMonth, double>>>& series) {
    CsvFile csv(path, prov, {"dimension", "month", "median"});
    for (const auto& [dim, points] : series) {
        for (const auto& [ym, value] : points) {
            csv.row({std::string(to_string(dim)), to_string(ym), fmt_ratio(value)});
        }
    }
}

void render_pearson_csv(const std::filesystem::path& path, const Provenance& prov,
                        const PearsonMatrix& matrix) {
    std::vector<std::string> header{"dimension"};
    for (Dimension d : kAllDimensions) header.emplace_back(to_string(d));
    CsvFile csv(path, prov, header);
    for (std::size_t i = 0; i < kDimensionCount; ++i) {
        std::vector<std::string> row{std::string(to_string(static_cast<Dimension>(i)))};
        for (std::size_t j = 0; j < kDimensionCount; ++j) {
            row.push_back(fmt_ratio(matrix[i][j]));
        }
        csv.row(row);
    }
}

void render_scatter_csv(const std::filesystem::path& path, const Provenance& prov,
                        const std::vector<ProfileSummary>& summaries, Dimension dimension,
                        double median_threshold, double gini_threshold) {
    CsvFile csv(path, prov, {"profile_id", "gini", "median", "in_box"});
    for (const ProfileSummary& s : summaries) {
        const DimensionSummary& ds = s.dim(dimension);
        const bool in_box = ds.median >= median_threshold && ds.gini <= gini_threshold;
        csv.row({s.profile_id, fmt_ratio(ds.gini), fmt_ratio(ds.median),
                 in_box ? "1" : "0"});
    }
}

void render_kl_matrix_csv(const std::filesystem::path& path, const Provenance& prov,
                          const std::vector<std::string>& group_names,
                          const std::vector<std::vector<double>>& matrix,
                          double lo, double hi, std::size_t bins) {
    std::vector<std::string> header{"group"};
    header.insert(header.end(), group_names.begin(), group_names.end());
    CsvFile csv(path, prov, header);
    char note[96];
    std::snprintf(note, sizeof(note), "binning: %zu uniform bins over [%.4f, %.4f]",
                  bins, lo, hi);
    csv.comment(note);
    for (std::size_t i = 0; i < matrix.size(); ++i) {
        std::vector<std::string> row{group_names[i]};
        for (double v : matrix[i]) row.push_back(fmt_ratio(v));
        csv.row(row);
    }
}

}  // namespace toxprof
