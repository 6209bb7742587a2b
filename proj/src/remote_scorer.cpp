#include "toxprof/remote_scorer.hpp"

#include <cctype>
#include <thread>

#include "httplib.h"
#include "json.hpp"

namespace toxprof {

namespace {

std::chrono::steady_clock::time_point default_now() {
    return std::chrono::steady_clock::now();
}

void default_sleep(std::chrono::duration<double> d) {
    std::this_thread::sleep_for(d);
}

}  // namespace

TokenBucket::TokenBucket(double tokens_per_minute, Clock clock, Sleeper sleeper)
    : rate_per_second_(tokens_per_minute / 60.0),
      capacity_(tokens_per_minute),
      tokens_(tokens_per_minute),
      clock_(clock ? std::move(clock) : default_now),
      sleeper_(sleeper ? std::move(sleeper) : default_sleep) {
    last_refill_ = clock_();
}

void TokenBucket::refill() {
    const auto now = clock_();
    const double elapsed = std::chrono::duration<double>(now - last_refill_).count();
    if (elapsed > 0) {
        tokens_ = std::min(capacity_, tokens_ + elapsed * rate_per_second_);
        last_refill_ = now;
    }
}

void TokenBucket::acquire() {
    refill();
    while (tokens_ < 1.0) {
        const double deficit = 1.0 - tokens_;
        sleeper_(std::chrono::duration<double>(deficit / rate_per_second_));
        refill();
    }
    tokens_ -= 1.0;
}

double TokenBucket::available() const {
    return tokens_;
}

std::string remote_attribute_name(Dimension d) {
    std::string name(to_string(d));
    for (char& c : name) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return name;
}

RemoteScorer::RemoteScorer(RemoteScorerOptions options, TokenBucket::Clock clock,
                           TokenBucket::Sleeper sleeper)
    : options_(std::move(options)),
      bucket_(options_.requests_per_minute, clock, sleeper),
      sleeper_(sleeper ? std::move(sleeper) : default_sleep) {
    const std::string& url = options_.url;
    auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) {
        throw std::invalid_argument("remote scorer URL must include a scheme: " + url);
    }
    auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) {
        host_base_ = url;
        path_ = "/";
    } else {
        host_base_ = url.substr(0, path_start);
        path_ = url.substr(path_start);
    }
}

ScoreVector RemoteScorer::score(std::string_view text) {
    nlohmann::json request;
    request["comment"]["text"] = std::string(text);
    for (Dimension d : kAllDimensions) {
        request["requestedAttributes"][remote_attribute_name(d)] = nlohmann::json::object();
    }
    request["languages"] = {options_.lang};
    const std::string body = request.dump();

    std::string target = path_;
    if (!options_.api_key.empty()) {
        target += (target.find('?') == std::string::npos ? "?" : "&");
        target += "key=" + options_.api_key;
    }

    std::chrono::duration<double> delay = options_.retry.base_delay;
    std::string last_error;
    for (std::size_t attempt = 1; attempt <= options_.retry.max_attempts; ++attempt) {
        if (attempt > 1) {
            sleeper_(delay);
            delay *= options_.retry.backoff_factor;
        }
        bucket_.acquire();
        ++requests_sent_;

        httplib::Client client(host_base_);
        client.set_connection_timeout(10, 0);
        client.set_read_timeout(30, 0);
        auto res = client.Post(target, body, "application/json");

        if (!res) {
            last_error = "connection failure: " + httplib::to_string(res.error());
            continue;  // transient
        }
        if (res->status == 429 || res->status >= 500) {
            last_error = "HTTP " + std::to_string(res->status);
            continue;  // transient
        }
        if (res->status != 200) {
            throw ScoreError("remote scorer rejected request: HTTP " +
                             std::to_string(res->status));
        }

        nlohmann::json response = nlohmann::json::parse(res->body, nullptr, false);
        if (response.is_discarded()) throw ScoreError("remote scorer returned invalid JSON");
        auto attrs = response.find("attributeScores");
        if (attrs == response.end()) throw ScoreError("remote response missing attributeScores");

        ScoreVector out;
        for (Dimension d : kAllDimensions) {
            auto it = attrs->find(remote_attribute_name(d));
            if (it == attrs->end()) {
                throw ScoreError("remote response missing attribute " + remote_attribute_name(d));
            }
            out[d] = (*it)["summaryScore"]["value"].get<double>();
        }
        return out;
    }
    throw ScoreError("remote scorer failed after " +
                     std::to_string(options_.retry.max_attempts) +
                     " attempts; last error: " + last_error);
}

ScoringFn RemoteScorer::as_scoring_fn() {
    return [this](const TweetRecord& r) { return score(r.text); };
}

}  // namespace toxprof
