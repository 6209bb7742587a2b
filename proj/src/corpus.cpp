#include "toxprof/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>

#include "json.hpp"
#include "toxprof/civil_time.hpp"

namespace toxprof {

namespace {

std::string ascii_lower(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

bool has_whitespace(std::string_view s) {
    return std::any_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

/// Parses one JSON line into a record. Returns an error reason on failure.
std::string parse_record(const std::string& line, TweetRecord& rec) {
    nlohmann::json j = nlohmann::json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded() || !j.is_object()) return "invalid JSON object";

    auto require_string = [&](const char* key, std::string& out) -> std::string {
        auto it = j.find(key);
        if (it == j.end() || !it->is_string()) return std::string("missing or non-string field '") + key + "'";
        out = it->get<std::string>();
        return {};
    };

    if (auto e = require_string("tweet_id", rec.tweet_id); !e.empty()) return e;
    if (rec.tweet_id.empty()) return "empty tweet_id";
    if (auto e = require_string("profile_id", rec.profile_id); !e.empty()) return e;
    if (rec.profile_id.empty()) return "empty profile_id";

    std::string created;
    if (auto e = require_string("created_at", created); !e.empty()) return e;
    auto ts = parse_iso8601_utc(created);
    if (!ts) return "unparseable created_at '" + created + "'";
    rec.created_at = *ts;

    if (auto e = require_string("text", rec.text); !e.empty()) return e;
    if (auto e = require_string("lang", rec.lang); !e.empty()) return e;

    auto rt = j.find("is_retweet");
    if (rt == j.end() || !rt->is_boolean()) return "missing or non-boolean field 'is_retweet'";
    rec.is_retweet = rt->get<bool>();

    // Structured fields take precedence; text extraction fills absent ones.
    auto ht = j.find("hashtags");
    if (ht != j.end()) {
        if (!ht->is_array()) return "field 'hashtags' is not an array";
        rec.hashtags.clear();
        for (const auto& item : *ht) {
            if (!item.is_string()) return "non-string hashtag entry";
            std::string tag = item.get<std::string>();
            if (!tag.empty() && tag.front() == '#') tag.erase(tag.begin());
            if (has_whitespace(tag)) return "hashtag contains whitespace: '" + tag + "'";
            rec.hashtags.push_back(ascii_lower(tag));
        }
    } else {
        rec.hashtags = extract_hashtags(rec.text);
    }

    auto ur = j.find("urls");
    if (ur != j.end()) {
        if (!ur->is_array()) return "field 'urls' is not an array";
        rec.urls.clear();
        for (const auto& item : *ur) {
            if (!item.is_string()) return "non-string url entry";
            rec.urls.push_back(item.get<std::string>());
        }
    } else {
        rec.urls = extract_urls(rec.text);
    }

    return {};
}

}  // namespace

std::size_t Corpus::tweet_count() const {
    std::size_t n = 0;
    for (const auto& [id, records] : profiles) n += records.size();
    return n;
}

std::vector<std::string> Corpus::profile_ids() const {
    std::vector<std::string> out;
    out.reserve(profiles.size());
    for (const auto& [id, records] : profiles) out.push_back(id);
    return out;
}

void CorpusBuilder::add_stream(std::istream& in, const std::string& source_name, bool strict) {
    corpus_.source_files.push_back(source_name);
    IngestionLog& log = corpus_.ingestion;

    std::string line;
    std::uint64_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        ++log.lines_read;
        if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;  // blank lines are not records
        }
        TweetRecord rec;
        std::string err = parse_record(line, rec);
        if (!err.empty()) {
            if (strict) throw ParseError(source_name, line_no, err);
            ++log.lines_skipped;
            log.skipped.push_back({source_name, line_no, err});
            continue;
        }
        if (!seen_tweet_ids_.insert(rec.tweet_id).second) {
            if (strict) {
                throw ParseError(source_name, line_no,
                                 "duplicate tweet_id '" + rec.tweet_id + "'");
            }
            ++log.duplicates;
            log.duplicate_lines.push_back({source_name, line_no, rec.tweet_id});
            continue;
        }
        ++log.records_valid;
        corpus_.profiles[rec.profile_id].push_back(std::move(rec));
    }
}

void CorpusBuilder::add_file(const std::filesystem::path& path, bool strict) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open corpus file: " + path.string());
    add_stream(in, path.string(), strict);
}

Corpus CorpusBuilder::build() {
    for (auto& [id, records] : corpus_.profiles) {
        std::sort(records.begin(), records.end(),
                  [](const TweetRecord& a, const TweetRecord& b) {
                      if (a.created_at != b.created_at) return a.created_at < b.created_at;
                      return a.tweet_id < b.tweet_id;
                  });
    }
    return std::move(corpus_);
}

std::pair<Corpus, IngestionLog> parse_timeline_stream(std::istream& in, bool strict) {
    CorpusBuilder builder;
    builder.add_stream(in, "<stream>", strict);
    Corpus corpus = builder.build();
    IngestionLog log = corpus.ingestion;
    return {std::move(corpus), std::move(log)};
}

void serialize_corpus(const Corpus& corpus, std::ostream& out) {
    for (const auto& [profile_id, records] : corpus.profiles) {
        for (const TweetRecord& r : records) {
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
    }
}

std::set<std::string> filter_eligible_profiles(const Corpus& corpus,
                                               std::size_t min_tweets,
                                               const TweetFilter& filter) {
    if (min_tweets < 1) throw std::invalid_argument("min_tweets must be >= 1");
    std::set<std::string> eligible;
    for (const auto& [id, records] : corpus.profiles) {
        std::size_t n = 0;
        for (const TweetRecord& r : records) {
            if (filter.matches(r)) ++n;
        }
        if (n >= min_tweets) eligible.insert(id);
    }
    return eligible;
}

std::set<std::string> filter_eligible_profiles(const Corpus& corpus,
                                               std::size_t min_tweets,
                                               const std::string& lang,
                                               bool include_retweets) {
    return filter_eligible_profiles(corpus, min_tweets, TweetFilter{lang, include_retweets});
}

std::vector<std::string> extract_hashtags(std::string_view text) {
    std::vector<std::string> tags;
    auto is_word = [](unsigned char c) {
        return std::isalnum(c) || c == '_';
    };
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] != '#') continue;
        std::size_t j = i + 1;
        while (j < text.size() && is_word(static_cast<unsigned char>(text[j]))) ++j;
        if (j > i + 1) tags.push_back(ascii_lower(text.substr(i + 1, j - i - 1)));
        i = j - 1;
    }
    return tags;
}

std::vector<std::string> extract_urls(std::string_view text) {
    std::vector<std::string> urls;
    for (std::size_t i = 0; i < text.size();) {
        const bool http = text.substr(i).starts_with("http://");
        const bool https = text.substr(i).starts_with("https://");
        if (!http && !https) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
        urls.emplace_back(text.substr(i, j - i));
        i = j;
    }
    return urls;
}

}  // namespace toxprof
