#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "toxprof/corpus.hpp"

namespace toxprof {

/// The six misbehavior dimensions, in fixed order.
enum class Dimension : std::size_t {
    toxicity = 0,
    severe_toxicity,
    identity_attack,
    inflammatory,
    insult,
    threat,
};

inline constexpr std::size_t kDimensionCount = 6;

inline constexpr std::array<Dimension, kDimensionCount> kAllDimensions{
    Dimension::toxicity,        Dimension::severe_toxicity,
    Dimension::identity_attack, Dimension::inflammatory,
    Dimension::insult,          Dimension::threat,
};

std::string_view to_string(Dimension d);
std::optional<Dimension> dimension_from_string(std::string_view name);

/// Six unit-interval scores for one tweet.
struct ScoreVector {
    std::array<double, kDimensionCount> values{};

    double operator[](Dimension d) const { return values[static_cast<std::size_t>(d)]; }
    double& operator[](Dimension d) { return values[static_cast<std::size_t>(d)]; }
    bool operator==(const ScoreVector&) const = default;
};

using ScoreMap = std::map<std::string, ScoreVector>;  // tweet_id -> scores

/// Clamps into [0,1] and rounds to 6 decimals (ties to even). Every score the
/// pipeline stores or serializes passes through this, so cache round-trips are
/// exact. Increments *clamped for each component that was out of range.
ScoreVector sanitize_scores(const ScoreVector& raw, std::uint64_t* clamped = nullptr);

double quantize_score(double value);

/// Token -> per-dimension weights, all in [0,1].
struct Lexicon {
    std::map<std::string, ScoreVector> weights;

    static Lexicon parse(std::istream& in);
    static Lexicon load(const std::filesystem::path& path);
};

/// Noisy-or lexicon scorer: per dimension, 1 - prod over matched token
/// occurrences of (1 - weight). Tokens are matched case-insensitively on word
/// boundaries; repeated occurrences compound. Pure and deterministic.
ScoreVector score_text_lexicon(std::string_view text, const Lexicon& lexicon);

class ScoreError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Persistent tweet_id -> ScoreVector map. JSON-lines on disk, one record per
/// line with the six score keys in Dimension order plus the scorer identifier.
/// Thread-safe: behaves as a linearizable map.
class ScoreCache {
public:
    explicit ScoreCache(std::string scorer_id) : scorer_id_(std::move(scorer_id)) {}

    ScoreCache(ScoreCache&& other) noexcept
        : scorer_id_(std::move(other.scorer_id_)), entries_(std::move(other.entries_)) {}

    /// Loads entries whose scorer id matches expected_scorer_id; entries from
    /// other scorers are counted in foreign_entries and ignored. A missing
    /// file yields an empty cache.
    static ScoreCache load(const std::filesystem::path& path,
                           std::string expected_scorer_id,
                           std::uint64_t* foreign_entries = nullptr);

    std::optional<ScoreVector> lookup(const std::string& tweet_id) const;
    void insert(const std::string& tweet_id, const ScoreVector& scores);
    void save(const std::filesystem::path& path) const;

    std::size_t size() const;
    const std::string& scorer_id() const { return scorer_id_; }

private:
    std::string scorer_id_;
    mutable std::mutex mutex_;
    ScoreMap entries_;
};

using ScoringFn = std::function<ScoreVector(const TweetRecord&)>;

struct ScoreFailure {
    std::string tweet_id;
    std::string reason;
};

struct ScoreRunStats {
    std::uint64_t eligible = 0;
    std::uint64_t cache_hits = 0;
    std::uint64_t scorer_calls = 0;
    std::uint64_t failures = 0;
    std::uint64_t clamped = 0;
};

/// Scores every tweet matching the filter. Cache hits skip the scorer; misses
/// are scored, sanitized, and inserted. A scorer failure excludes the tweet
/// and is logged; the run continues. Idempotent with a warm cache.
ScoreMap score_corpus(const Corpus& corpus, const TweetFilter& filter,
                      const ScoringFn& scorer, ScoreCache& cache,
                      std::vector<ScoreFailure>* failures = nullptr,
                      ScoreRunStats* stats = nullptr);

}  // namespace toxprof
