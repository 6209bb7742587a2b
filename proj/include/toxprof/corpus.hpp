#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace toxprof {

/// One tweet as ingested from a JSON-lines timeline file.
struct TweetRecord {
    std::string tweet_id;
    std::string profile_id;
    std::int64_t created_at = 0;  // unix seconds, UTC
    std::string text;
    std::string lang;
    bool is_retweet = false;
    std::vector<std::string> hashtags;  // lowercase, no leading '#'
    std::vector<std::string> urls;
};

/// Predicate shared by every analysis stage: which tweets count.
struct TweetFilter {
    std::string lang = "en";
    bool include_retweets = true;

    bool matches(const TweetRecord& r) const {
        return r.lang == lang && (include_retweets || !r.is_retweet);
    }
};

struct SkippedLine {
    std::string source;
    std::uint64_t line_number = 0;
    std::string reason;
};

struct IngestionLog {
    std::uint64_t lines_read = 0;
    std::uint64_t records_valid = 0;
    std::uint64_t lines_skipped = 0;
    std::uint64_t duplicates = 0;
    std::vector<SkippedLine> skipped;
    std::vector<SkippedLine> duplicate_lines;
};

/// Raised in strict mode; line_number is 1-based within the offending source.
class ParseError : public std::runtime_error {
public:
    ParseError(std::string source, std::uint64_t line, const std::string& what)
        : std::runtime_error(what), source_(std::move(source)), line_(line) {}
    const std::string& source() const { return source_; }
    std::uint64_t line_number() const { return line_; }

private:
    std::string source_;
    std::uint64_t line_;
};

/// Immutable after build. Records per profile are sorted ascending by
/// created_at, ties broken by tweet_id.
struct Corpus {
    std::map<std::string, std::vector<TweetRecord>> profiles;
    std::vector<std::string> source_files;
    IngestionLog ingestion;

    std::size_t tweet_count() const;
    std::vector<std::string> profile_ids() const;
};

/// Accumulates records from one or more JSON-lines streams, deduplicates by
/// tweet_id (first occurrence wins in lenient mode; strict mode rejects the
/// duplicate line), then sorts each profile timeline.
class CorpusBuilder {
public:
    void add_stream(std::istream& in, const std::string& source_name, bool strict);
    void add_file(const std::filesystem::path& path, bool strict);
    Corpus build();

private:
    Corpus corpus_;
    std::set<std::string> seen_tweet_ids_;
};

std::pair<Corpus, IngestionLog> parse_timeline_stream(std::istream& in, bool strict);

/// Canonical JSON-lines form: profiles in id order, records in timeline order,
/// keys alphabetical. Re-parsing the output reproduces the corpus exactly.
void serialize_corpus(const Corpus& corpus, std::ostream& out);

/// Profiles with at least min_tweets records matching (lang, retweet policy).
std::set<std::string> filter_eligible_profiles(const Corpus& corpus,
                                               std::size_t min_tweets,
                                               const std::string& lang,
                                               bool include_retweets);

std::set<std::string> filter_eligible_profiles(const Corpus& corpus,
                                               std::size_t min_tweets,
                                               const TweetFilter& filter);

/// Maximal runs of word characters ([A-Za-z0-9_]) following '#', lowercased,
/// in order of appearance. Fallback for records without a hashtags field.
std::vector<std::string> extract_hashtags(std::string_view text);

/// Substrings beginning "http://" or "https://" up to the next whitespace.
std::vector<std::string> extract_urls(std::string_view text);

}  // namespace toxprof
