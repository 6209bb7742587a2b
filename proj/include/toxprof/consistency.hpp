#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "toxprof/corpus.hpp"
#include "toxprof/scorer.hpp"

namespace toxprof {

/// Middle order statistic; mean of the two central values for even n.
double median(std::span<const double> values);

/// Gini coefficient, population form: sum_ij |xi - xj| / (2 n^2 mu).
/// Computed via the sorted form sum_i (2i - n - 1) x_(i) / (n^2 mu).
/// All values must be >= 0; mu == 0 yields 0. Result lies in [0, 1 - 1/n].
double gini(std::span<const double> values);

/// Fraction of values >= threshold (boundary inclusive).
double binarized_proportion(std::span<const double> values, double threshold = 0.4);

struct DimensionSummary {
    std::size_t n_tweets = 0;
    double median = 0.0;
    double gini = 0.0;
    double binarized_proportion = 0.0;
};

struct ProfileSummary {
    std::string profile_id;
    std::array<DimensionSummary, kDimensionCount> per_dimension;

    const DimensionSummary& dim(Dimension d) const {
        return per_dimension[static_cast<std::size_t>(d)];
    }
};

/// One summary per eligible profile, over that profile's scored tweets.
/// Profiles with zero scored tweets are excluded and reported via
/// excluded_log.
std::vector<ProfileSummary> summarize_profiles(
    const Corpus& corpus, const ScoreMap& scores,
    const std::set<std::string>& eligible, double binarize_threshold = 0.4,
    std::vector<std::string>* excluded_log = nullptr);

/// Profiles whose median >= median_threshold and gini <= gini_threshold for
/// the dimension. Both boundaries closed.
std::set<std::string> select_focus(const std::vector<ProfileSummary>& summaries,
                                   Dimension dimension,
                                   double median_threshold = 0.4,
                                   double gini_threshold = 0.25);

/// Uniform sample without replacement from eligible minus exclude.
/// Deterministic given seed; throws when the pool is too small, naming the
/// deficit.
std::set<std::string> sample_random_baseline(const std::set<std::string>& eligible,
                                             const std::set<std::string>& exclude,
                                             std::size_t n, std::uint64_t seed);

/// 6x6 Pearson correlation over all tweet score vectors. Symmetric with unit
/// diagonal. A dimension with constant scores gets NaN off-diagonal entries.
using PearsonMatrix = std::array<std::array<double, kDimensionCount>, kDimensionCount>;
PearsonMatrix pearson_matrix(const ScoreMap& scores);

struct ObsceneFilterResult {
    std::set<std::string> retained;
    std::map<std::string, double> removed;  // profile_id -> obscene fraction
};

/// Removes profiles whose obscene hashtag occurrences exceed
/// fraction_threshold of all their hashtag occurrences (strict inequality).
/// Profiles with zero hashtag occurrences are retained.
ObsceneFilterResult obscene_filter(const std::set<std::string>& focus,
                                   const Corpus& corpus,
                                   const std::set<std::string>& lexicon,
                                   double fraction_threshold = 0.8);

/// Newline-separated lowercase hashtags, '#'-prefixed lines are comments.
std::set<std::string> load_hashtag_lexicon(std::istream& in);
std::set<std::string> load_hashtag_lexicon_file(const std::filesystem::path& path);

struct SelectionResult {
    Dimension dimension = Dimension::toxicity;
    double median_threshold = 0.4;
    double gini_threshold = 0.25;
    std::set<std::string> focus;
    std::set<std::string> random_baseline;
    std::uint64_t rng_seed = 0;
    std::map<std::string, double> removed_obscene;
};

/// Full selection for one dimension: threshold box, obscene removal, then an
/// equinumerous random baseline drawn from eligible profiles outside the
/// original box.
SelectionResult run_selection(const std::vector<ProfileSummary>& summaries,
                              const Corpus& corpus,
                              const std::set<std::string>& eligible,
                              Dimension dimension,
                              const std::set<std::string>& obscene_lexicon,
                              double median_threshold, double gini_threshold,
                              double obscene_threshold, std::uint64_t seed);

}  // namespace toxprof
