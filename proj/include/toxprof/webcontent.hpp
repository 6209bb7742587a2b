#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "toxprof/corpus.hpp"

namespace toxprof {

/// Public-suffix rules: exact entries, "*." wildcards (one label), and "!"
/// exceptions, as in the Public Suffix List. "//" lines are comments.
class SuffixRuleSet {
public:
    static SuffixRuleSet parse(std::istream& in);
    static SuffixRuleSet load(const std::filesystem::path& path);

    /// Registrable domain (public suffix plus one label) for a bare lowercase
    /// host. Longest matching rule prevails, exceptions beat wildcards, and
    /// unmatched hosts fall back to the last two labels. Hosts equal to a
    /// public suffix yield nullopt.
    std::optional<std::string> registrable_domain(std::string_view host) const;

    bool empty() const { return exact_.empty() && wildcard_.empty() && exception_.empty(); }
    std::size_t rule_count() const { return exact_.size() + wildcard_.size() + exception_.size(); }

private:
    std::set<std::string, std::less<>> exact_;
    std::set<std::string, std::less<>> wildcard_;   // stored without the "*." prefix
    std::set<std::string, std::less<>> exception_;  // stored without the "!" prefix
};

/// Lowercased host part of a URL, or nullopt when the URL has no recognizable
/// scheme://host shape or the host is an IP literal.
std::optional<std::string> url_host(std::string_view url);

/// Registrable domain of a URL; nullopt for unparsable URLs, IP literals, and
/// hosts that are themselves a public suffix.
std::optional<std::string> extract_sld(std::string_view url, const SuffixRuleSet& rules);

/// URL identity used for uniqueness counts: scheme and host lowercased, one
/// trailing '/' trimmed, path and query otherwise preserved.
std::string normalize_url(std::string_view url);

/// domain -> category map loaded from a two-column CSV with header
/// "domain,category". Lookup misses categorize as "None".
class CategoryMap {
public:
    static CategoryMap parse(std::istream& in);
    static CategoryMap load(const std::filesystem::path& path);

    std::string categorize(std::string_view domain) const;
    std::size_t size() const { return map_.size(); }

private:
    std::map<std::string, std::string, std::less<>> map_;
};

struct ProfileContentStats {
    std::size_t unique_urls = 0;
    std::size_t unique_domains = 0;
    std::size_t total_hashtags = 0;
    std::size_t unique_hashtags = 0;
};

struct DiversityStats {
    std::size_t n_profiles = 0;
    std::size_t n_urls = 0;
    std::size_t n_unique_urls = 0;
    double avg_unique_urls_per_sharing_profile = 0.0;
    std::size_t n_domains = 0;  // URL references with an extractable domain
    std::size_t n_unique_domains = 0;
    double avg_unique_domains_per_sharing_profile = 0.0;
    std::size_t n_domain_categories = 0;
    double categorized_fraction = 0.0;  // domain references mapped to a real category
    std::size_t n_hashtags_total = 0;
    std::size_t n_hashtags_unique = 0;
    double avg_hashtags_per_sharing_profile = 0.0;
    double avg_unique_hashtags_per_sharing_profile = 0.0;
    std::map<std::string, ProfileContentStats> per_profile;
};

/// Counts as in the URL/domain/hashtag breakdown tables. Averages are over
/// profiles that shared at least one item of that kind.
DiversityStats diversity_stats(const std::set<std::string>& group, const Corpus& corpus,
                               const TweetFilter& filter, const SuffixRuleSet& rules,
                               const CategoryMap& categories);

struct HashtagRank {
    std::string hashtag;
    std::size_t occurrences = 0;
    double pct_profiles_using = 0.0;  // share of group profiles using it, in percent
};

/// Hashtags ranked by occurrence count descending, ties lexicographic.
std::vector<HashtagRank> top_hashtags(const std::set<std::string>& group,
                                      const Corpus& corpus, const TweetFilter& filter,
                                      std::size_t n);

/// Domain-category reference counts over every URL with an extractable
/// domain, ranked descending, ties lexicographic, truncated to top_k.
std::vector<std::pair<std::string, std::size_t>> category_histogram(
    const std::set<std::string>& group, const Corpus& corpus, const TweetFilter& filter,
    const SuffixRuleSet& rules, const CategoryMap& categories, std::size_t top_k = 20);

/// Per-profile unique domain / unique hashtag sets, used by the similarity
/// analyses. Ordered by profile id.
std::vector<std::set<std::string>> profile_domain_sets(const std::set<std::string>& group,
                                                       const Corpus& corpus,
                                                       const TweetFilter& filter,
                                                       const SuffixRuleSet& rules);
std::vector<std::set<std::string>> profile_hashtag_sets(const std::set<std::string>& group,
                                                        const Corpus& corpus,
                                                        const TweetFilter& filter);

}  // namespace toxprof
