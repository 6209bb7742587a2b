#include "toxprof/consistency.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "toxprof/rng.hpp"

namespace toxprof {

double median(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("median of empty list");
    std::vector<double> v(values.begin(), values.end());
    const std::size_t n = v.size();
    const std::size_t mid = n / 2;
    std::nth_element(v.begin(), v.begin() + mid, v.end());
    if (n % 2 == 1) return v[mid];
    const double upper = v[mid];
    const double lower = *std::max_element(v.begin(), v.begin() + mid);
    return (lower + upper) / 2.0;
}

double gini(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("gini of empty list");
    std::vector<double> v(values.begin(), values.end());
    double sum = 0.0;
    for (double x : v) {
        if (x < 0.0) throw std::invalid_argument("gini requires non-negative values");
        sum += x;
    }
    if (sum == 0.0) return 0.0;
    std::sort(v.begin(), v.end());
    const double n = static_cast<double>(v.size());
    double weighted = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        weighted += (2.0 * static_cast<double>(i + 1) - n - 1.0) * v[i];
    }
    // n^2 * mu == n * sum
    return weighted / (n * sum);
}

double binarized_proportion(std::span<const double> values, double threshold) {
    if (values.empty()) throw std::invalid_argument("binarized_proportion of empty list");
    std::size_t hits = 0;
    for (double v : values) {
        if (v >= threshold) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(values.size());
}

std::vector<ProfileSummary> summarize_profiles(const Corpus& corpus,
                                               const ScoreMap& scores,
                                               const std::set<std::string>& eligible,
                                               double binarize_threshold,
                                               std::vector<std::string>* excluded_log) {
    std::vector<ProfileSummary> out;
    out.reserve(eligible.size());
    for (const std::string& profile_id : eligible) {
        auto it = corpus.profiles.find(profile_id);
        if (it == corpus.profiles.end()) {
            if (excluded_log) excluded_log->push_back(profile_id);
            continue;
        }
        std::array<std::vector<double>, kDimensionCount> per_dim;
        for (const TweetRecord& r : it->second) {
            auto sc = scores.find(r.tweet_id);
            if (sc == scores.end()) continue;
            for (std::size_t d = 0; d < kDimensionCount; ++d) {
                per_dim[d].push_back(sc->second.values[d]);
            }
        }
        if (per_dim[0].empty()) {
            if (excluded_log) excluded_log->push_back(profile_id);
            continue;
        }
        ProfileSummary summary;
        summary.profile_id = profile_id;
        for (std::size_t d = 0; d < kDimensionCount; ++d) {
            DimensionSummary& ds = summary.per_dimension[d];
            ds.n_tweets = per_dim[d].size();
            ds.median = median(per_dim[d]);
            ds.gini = gini(per_dim[d]);
            ds.binarized_proportion = binarized_proportion(per_dim[d], binarize_threshold);
        }
        out.push_back(std::move(summary));
    }
    return out;
}

std::set<std::string> select_focus(const std::vector<ProfileSummary>& summaries,
                                   Dimension dimension, double median_threshold,
                                   double gini_threshold) {
    std::set<std::string> focus;
    for (const ProfileSummary& s : summaries) {
        const DimensionSummary& ds = s.dim(dimension);
        if (ds.median >= median_threshold && ds.gini <= gini_threshold) {
            focus.insert(s.profile_id);
        }
    }
    return focus;
}

std::set<std::string> sample_random_baseline(const std::set<std::string>& eligible,
                                             const std::set<std::string>& exclude,
                                             std::size_t n, std::uint64_t seed) {
    std::vector<std::string> pool;
    pool.reserve(eligible.size());
    for (const std::string& id : eligible) {
        if (!exclude.contains(id)) pool.push_back(id);
    }
    if (pool.size() < n) {
        std::ostringstream msg;
        msg << "baseline pool too small: need " << n << ", have " << pool.size()
            << " (deficit " << n - pool.size() << ")";
        throw std::runtime_error(msg.str());
    }
    // partial Fisher-Yates over the id-sorted pool
    Rng rng(seed);
    std::set<std::string> sample;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = i + rng.uniform_index(pool.size() - i);
        std::swap(pool[i], pool[j]);
        sample.insert(pool[i]);
    }
    return sample;
}

PearsonMatrix pearson_matrix(const ScoreMap& scores) {
    constexpr std::size_t D = kDimensionCount;
    std::array<double, D> sum{}, sum_sq{};
    std::array<double, D> lo{}, hi{};
    lo.fill(std::numeric_limits<double>::infinity());
    hi.fill(-std::numeric_limits<double>::infinity());
    std::array<std::array<double, D>, D> cross{};
    double n = 0.0;
    for (const auto& [tweet_id, vec] : scores) {
        n += 1.0;
        for (std::size_t i = 0; i < D; ++i) {
            const double v = vec.values[i];
            sum[i] += v;
            sum_sq[i] += v * v;
            lo[i] = std::min(lo[i], v);
            hi[i] = std::max(hi[i], v);
            for (std::size_t j = 0; j < D; ++j) {
                cross[i][j] += v * vec.values[j];
            }
        }
    }

    PearsonMatrix out;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::array<bool, D> constant{};
    std::array<double, D> variance{};
    for (std::size_t i = 0; i < D; ++i) {
        constant[i] = n < 1.0 || lo[i] == hi[i];
        variance[i] = n > 0 ? sum_sq[i] - sum[i] * sum[i] / n : 0.0;
    }
    for (std::size_t i = 0; i < D; ++i) {
        for (std::size_t j = 0; j < D; ++j) {
            if (i == j) {
                out[i][j] = 1.0;
                continue;
            }
            if (n < 2.0 || constant[i] || constant[j] || variance[i] <= 0.0 ||
                variance[j] <= 0.0) {
                out[i][j] = nan;  // undefined, not zero
                continue;
            }
            const double cov = cross[i][j] - sum[i] * sum[j] / n;
            out[i][j] = std::clamp(cov / std::sqrt(variance[i] * variance[j]), -1.0, 1.0);
        }
    }
    return out;
}

ObsceneFilterResult obscene_filter(const std::set<std::string>& focus,
                                   const Corpus& corpus,
                                   const std::set<std::string>& lexicon,
                                   double fraction_threshold) {
    ObsceneFilterResult result;
    for (const std::string& profile_id : focus) {
        auto it = corpus.profiles.find(profile_id);
        std::size_t total = 0, obscene = 0;
        if (it != corpus.profiles.end()) {
            for (const TweetRecord& r : it->second) {
                for (const std::string& tag : r.hashtags) {
                    ++total;
                    if (lexicon.contains(tag)) ++obscene;
                }
            }
        }
        if (total == 0) {
            result.retained.insert(profile_id);
            continue;
        }
        const double fraction = static_cast<double>(obscene) / static_cast<double>(total);
        if (fraction > fraction_threshold) {
            result.removed[profile_id] = fraction;
        } else {
            result.retained.insert(profile_id);
        }
    }
    return result;
}

std::set<std::string> load_hashtag_lexicon(std::istream& in) {
    std::set<std::string> lexicon;
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        std::string lower;
        lower.reserve(line.size());
        for (char c : line) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        lexicon.insert(std::move(lower));
    }
    return lexicon;
}

std::set<std::string> load_hashtag_lexicon_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open hashtag lexicon: " + path.string());
    return load_hashtag_lexicon(in);
}

SelectionResult run_selection(const std::vector<ProfileSummary>& summaries,
                              const Corpus& corpus,
                              const std::set<std::string>& eligible,
                              Dimension dimension,
                              const std::set<std::string>& obscene_lexicon,
                              double median_threshold, double gini_threshold,
                              double obscene_threshold, std::uint64_t seed) {
    SelectionResult result;
    result.dimension = dimension;
    result.median_threshold = median_threshold;
    result.gini_threshold = gini_threshold;
    result.rng_seed = seed;

    const std::set<std::string> box =
        select_focus(summaries, dimension, median_threshold, gini_threshold);
    ObsceneFilterResult filtered = obscene_filter(box, corpus, obscene_lexicon, obscene_threshold);
    result.focus = std::move(filtered.retained);
    result.removed_obscene = std::move(filtered.removed);

    // Baseline pool excludes everything inside the original box, removed
    // profiles included, so the contrast group shares no selected behavior.
    result.random_baseline =
        sample_random_baseline(eligible, box, result.focus.size(), seed);
    return result;
}

}  // namespace toxprof
