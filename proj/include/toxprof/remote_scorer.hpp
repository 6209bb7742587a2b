#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <string>

#include "toxprof/scorer.hpp"

namespace toxprof {

/// Token bucket with a configurable clock and sleep hook so tests can run
/// without wall-clock delays. Capacity equals the per-minute budget.
class TokenBucket {
public:
    using Clock = std::function<std::chrono::steady_clock::time_point()>;
    using Sleeper = std::function<void(std::chrono::duration<double>)>;

    TokenBucket(double tokens_per_minute, Clock clock = {}, Sleeper sleeper = {});

    /// Blocks (via the sleep hook) until one token is available, then takes it.
    void acquire();

    double available() const;

private:
    void refill();

    double rate_per_second_;
    double capacity_;
    double tokens_;
    std::chrono::steady_clock::time_point last_refill_;
    Clock clock_;
    Sleeper sleeper_;
};

struct RetryPolicy {
    std::size_t max_attempts = 5;
    std::chrono::duration<double> base_delay{1.0};
    double backoff_factor = 2.0;
};

struct RemoteScorerOptions {
    std::string url;           // http(s)://host[:port][/path]
    std::string api_key;       // appended as ?key=... when non-empty
    double requests_per_minute = 60.0;
    RetryPolicy retry;
    std::string lang = "en";
};

/// Client for a Perspective-style scoring endpoint. One POST per tweet:
///   request  {"comment":{"text":...},"requestedAttributes":{"TOXICITY":{},...},
///             "languages":[...]}
///   response {"attributeScores":{"TOXICITY":{"summaryScore":{"value":0.9}},...}}
/// Transient failures (connection errors, 429, 5xx) are retried with
/// exponential backoff; other HTTP errors fail immediately. All attempts pass
/// through the rate limiter. Throws ScoreError once retries are exhausted.
class RemoteScorer {
public:
    explicit RemoteScorer(RemoteScorerOptions options,
                          TokenBucket::Clock clock = {},
                          TokenBucket::Sleeper sleeper = {});

    ScoreVector score(std::string_view text);

    /// Adapter for score_corpus.
    ScoringFn as_scoring_fn();

    std::uint64_t requests_sent() const { return requests_sent_; }

private:
    RemoteScorerOptions options_;
    std::string host_base_;  // scheme://host[:port]
    std::string path_;
    TokenBucket bucket_;
    TokenBucket::Sleeper sleeper_;
    std::uint64_t requests_sent_ = 0;
};

/// Perspective attribute name for a dimension (e.g. IDENTITY_ATTACK).
std::string remote_attribute_name(Dimension d);

}  // namespace toxprof
