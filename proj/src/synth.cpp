#include "toxprof/synth.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <fstream>
#include <ostream>

#include "json.hpp"
#include "toxprof/civil_time.hpp"
#include "toxprof/rng.hpp"

namespace toxprof {

namespace {

// 2020-01-06T00:00:00Z, a Monday, so day index mod 7 is the ISO weekday.
constexpr std::int64_t kBaseEpoch = 1578268800;
constexpr std::size_t kTimelineDays = 120;

constexpr std::size_t kFocusSessions = 24;
constexpr std::size_t kFocusTweetsPerSession = 7;
// gaps within a session, minutes: peaks at 5, 10, 15 and one sub-minute gap
constexpr std::array<double, 6> kFocusGapsMinutes{5, 10, 15, 5, 10, 0.5};

const std::vector<std::string> kFocusTokens{
    "vermin",     "traitor", "parasite", "eradicate", "worthless", "menace",
    "degenerate", "infest",  "scum",     "loathsome", "grifter",   "purge",
};

const std::vector<std::string> kMildTokens{
    "idiot", "clown", "stupid", "pathetic", "annoying", "trash", "loser", "awful",
};

const std::vector<std::string> kBenignWords{
    "coffee", "morning",  "weekend", "friends", "movie",   "music",  "game",
    "lunch",  "sunny",    "travel",  "book",    "photo",   "family", "dinner",
    "garden", "football", "recipe",  "beach",   "puppy",   "concert",
    "paint",  "hiking",   "coding",  "bakery",  "museum",  "river",  "cycling",
    "piano",  "autumn",   "market",
};

const std::vector<std::string> kFocusHashtags{"awaken", "reclaim", "standfirm"};
const std::vector<std::string> kFocusDomains{
    "unitedfrontnews.net", "truthbeacon.org", "dailysiren.info"};

// diurnal hour weights with a deep 02:00-05:00 trough
constexpr std::array<double, 24> kDiurnalWeights{
    0.30, 0.20, 0.12, 0.10, 0.10, 0.14, 0.25, 0.45, 0.65, 0.85, 0.95, 1.00,
    1.05, 1.10, 1.05, 1.00, 0.95, 1.00, 1.10, 1.20, 1.15, 0.90, 0.65, 0.45,
};

constexpr std::array<double, 7> kWeekdayWeights{1.0, 1.0, 1.0, 1.0, 1.0, 0.55, 0.50};

class WeightedPicker {
public:
    explicit WeightedPicker(std::vector<double> weights) : cumulative_(std::move(weights)) {
        for (std::size_t i = 1; i < cumulative_.size(); ++i) {
            cumulative_[i] += cumulative_[i - 1];
        }
    }

    std::size_t pick(Rng& rng) const {
        const double u = rng.uniform01() * cumulative_.back();
        const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
        const auto idx = static_cast<std::size_t>(it - cumulative_.begin());
        return idx < cumulative_.size() ? idx : cumulative_.size() - 1;
    }

private:
    std::vector<double> cumulative_;
};

struct RecordOut {
    std::string tweet_id;
    std::string profile_id;
    std::int64_t created_at;
    std::string text;
    std::string lang;
    bool is_retweet;
    std::vector<std::string> hashtags;
    std::vector<std::string> urls;
};

void emit(std::ostream& out, const RecordOut& r) {
    nlohmann::json j;
    j["tweet_id"] = r.tweet_id;
    j["profile_id"] = r.profile_id;
    j["created_at"] = format_iso8601_utc(r.created_at);
    j["text"] = r.text;
    j["lang"] = r.lang;
    j["is_retweet"] = r.is_retweet;
    j["hashtags"] = r.hashtags;
    j["urls"] = r.urls;
    out << j.dump() << '\n';
}

std::string label(const char* prefix, std::size_t index) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%s_%03zu", prefix, index);
    return buf;
}

}  // namespace

const std::vector<std::string>& synth_focus_tokens() { return kFocusTokens; }
const std::vector<std::string>& synth_mild_tokens() { return kMildTokens; }

void write_synthetic_corpus(std::ostream& out, const SynthParams& params) {
    Rng rng(derive_seed(params.seed, "synth"));
    std::uint64_t tweet_counter = 0;
    std::uint64_t url_counter = 0;
    auto next_tweet_id = [&] {
        char buf[24];
        std::snprintf(buf, sizeof(buf), "t%08llu",
                      static_cast<unsigned long long>(tweet_counter++));
        return std::string(buf);
    };

    // Focus profiles: session k starts on day k*5 at hour (k+p) mod 24, so
    // each profile covers every hour of the day and every weekday evenly.
    for (std::size_t p = 0; p < params.n_focus; ++p) {
        const std::string profile_id = label("focus", p);
        const bool uses_hashtags = p % 5 < 2;
        for (std::size_t k = 0; k < kFocusSessions; ++k) {
            const std::size_t day = k * 5;
            const std::size_t hour = (k + p) % 24;
            const std::size_t minute = (k * 13 + p * 7) % 60;
            std::int64_t t = kBaseEpoch +
                             static_cast<std::int64_t>(day) * 86400 +
                             static_cast<std::int64_t>(hour) * 3600 +
                             static_cast<std::int64_t>(minute) * 60;
            for (std::size_t i = 0; i < kFocusTweetsPerSession; ++i) {
                RecordOut rec;
                rec.tweet_id = next_tweet_id();
                rec.profile_id = profile_id;
                rec.created_at = t;
                rec.lang = "en";
                rec.is_retweet = false;

                const std::string& tok1 = kFocusTokens[rng.uniform_index(kFocusTokens.size())];
                const std::string& tok2 = kFocusTokens[rng.uniform_index(kFocusTokens.size())];
                std::string text = tok1 + " " + tok2;
                const std::size_t fillers = 2 + rng.uniform_index(3);
                for (std::size_t f = 0; f < fillers; ++f) {
                    text += " " + kBenignWords[rng.uniform_index(kBenignWords.size())];
                }
                rec.text = std::move(text);

                if (uses_hashtags && rng.uniform01() < 0.15) {
                    rec.hashtags.push_back(
                        kFocusHashtags[rng.uniform_index(kFocusHashtags.size())]);
                }
                if (rng.uniform01() < 0.8) {
                    rec.urls.push_back(
                        "https://" + kFocusDomains[rng.uniform_index(kFocusDomains.size())] +
                        "/article/" + std::to_string(url_counter++));
                }
                emit(out, rec);
                if (i + 1 < kFocusTweetsPerSession) {
                    t += static_cast<std::int64_t>(kFocusGapsMinutes[i] * 60.0);
                }
            }
        }
    }

    // Random profiles: diffuse diurnal posting with weekday skew.
    std::vector<double> day_weights(kTimelineDays);
    for (std::size_t d = 0; d < kTimelineDays; ++d) {
        day_weights[d] = kWeekdayWeights[d % 7];
    }
    const WeightedPicker day_picker(day_weights);
    const WeightedPicker hour_picker(
        std::vector<double>(kDiurnalWeights.begin(), kDiurnalWeights.end()));

    for (std::size_t p = 0; p < params.n_random; ++p) {
        const std::string profile_id = label("random", p);
        const std::size_t n_tweets = 50 + rng.uniform_index(70);
        std::vector<std::int64_t> timestamps;
        timestamps.reserve(n_tweets);
        for (std::size_t i = 0; i < n_tweets; ++i) {
            const std::size_t day = day_picker.pick(rng);
            const std::size_t hour = hour_picker.pick(rng);
            timestamps.push_back(kBaseEpoch + static_cast<std::int64_t>(day) * 86400 +
                                 static_cast<std::int64_t>(hour) * 3600 +
                                 static_cast<std::int64_t>(rng.uniform_index(60)) * 60 +
                                 static_cast<std::int64_t>(rng.uniform_index(60)));
        }
        std::sort(timestamps.begin(), timestamps.end());

        for (std::int64_t ts : timestamps) {
            RecordOut rec;
            rec.tweet_id = next_tweet_id();
            rec.profile_id = profile_id;
            rec.created_at = ts;
            rec.lang = rng.uniform01() < 0.05 ? "es" : "en";
            rec.is_retweet = rng.uniform01() < 0.15;

            std::string text;
            const std::size_t words = 5 + rng.uniform_index(6);
            for (std::size_t w = 0; w < words; ++w) {
                if (!text.empty()) text += " ";
                text += kBenignWords[rng.uniform_index(kBenignWords.size())];
            }
            if (rng.uniform01() < 0.15) {
                text += " " + kMildTokens[rng.uniform_index(kMildTokens.size())];
            }
            if (rng.uniform01() < 0.03) {
                text += " " + kFocusTokens[rng.uniform_index(kFocusTokens.size())];
            }
            rec.text = std::move(text);

            if (rng.uniform01() < 0.5) {
                const std::size_t n_tags = 1 + rng.uniform_index(3);
                for (std::size_t h = 0; h < n_tags; ++h) {
                    char tag[16];
                    std::snprintf(tag, sizeof(tag), "tag%03zu", rng.uniform_index(400));
                    rec.hashtags.emplace_back(tag);
                }
            }
            if (rng.uniform01() < 0.4) {
                if (rng.uniform01() < 0.1) {
                    rec.urls.push_back("https://qlnk.io/" + std::to_string(url_counter++));
                } else {
                    char domain[24];
                    std::snprintf(domain, sizeof(domain), "site%03zu.com",
                                  rng.uniform_index(120));
                    rec.urls.push_back("https://" + std::string(domain) + "/p/" +
                                       std::to_string(url_counter++));
                }
            }
            emit(out, rec);
        }
    }
}

void write_synthetic_corpus_file(const std::filesystem::path& path,
                                 const SynthParams& params) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write synthetic corpus: " + path.string());
    write_synthetic_corpus(out, params);
}

}  // namespace toxprof
