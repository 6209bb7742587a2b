#include "toxprof/webcontent.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace toxprof {

namespace {

std::string ascii_lower(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

std::vector<std::string_view> split_labels(std::string_view host) {
    std::vector<std::string_view> labels;
    std::size_t start = 0;
    while (start <= host.size()) {
        const std::size_t dot = host.find('.', start);
        if (dot == std::string_view::npos) {
            labels.push_back(host.substr(start));
            break;
        }
        labels.push_back(host.substr(start, dot - start));
        start = dot + 1;
    }
    return labels;
}

std::string join_tail(const std::vector<std::string_view>& labels, std::size_t count) {
    std::string out;
    for (std::size_t i = labels.size() - count; i < labels.size(); ++i) {
        if (!out.empty()) out.push_back('.');
        out.append(labels[i]);
    }
    return out;
}

bool is_ipv4(std::string_view host) {
    int parts = 0;
    std::size_t start = 0;
    while (start <= host.size()) {
        const std::size_t dot = host.find('.', start);
        const std::string_view part =
            host.substr(start, dot == std::string_view::npos ? host.size() - start : dot - start);
        if (part.empty() || part.size() > 3) return false;
        int value = 0;
        for (char c : part) {
            if (c < '0' || c > '9') return false;
            value = value * 10 + (c - '0');
        }
        if (value > 255) return false;
        ++parts;
        if (dot == std::string_view::npos) break;
        start = dot + 1;
    }
    return parts == 4;
}

}  // namespace

SuffixRuleSet SuffixRuleSet::parse(std::istream& in) {
    SuffixRuleSet rules;
    std::string line;
    while (std::getline(in, line)) {
        const std::size_t end = line.find_first_of(" \t\r");
        std::string rule = end == std::string::npos ? line : line.substr(0, end);
        if (rule.empty() || rule.starts_with("//")) continue;
        rule = ascii_lower(rule);
        if (rule.front() == '!') {
            rules.exception_.insert(rule.substr(1));
        } else if (rule.starts_with("*.")) {
            rules.wildcard_.insert(rule.substr(2));
        } else {
            rules.exact_.insert(rule);
        }
    }
    return rules;
}

SuffixRuleSet SuffixRuleSet::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open suffix rules file: " + path.string());
    return parse(in);
}

std::optional<std::string> SuffixRuleSet::registrable_domain(std::string_view host) const {
    if (host.empty() || is_ipv4(host) || host.front() == '[') return std::nullopt;
    const auto labels = split_labels(host);
    for (const auto& label : labels) {
        if (label.empty()) return std::nullopt;
    }

    // Exceptions prevail: the public suffix is the exception rule minus its
    // leftmost label.
    for (std::size_t take = labels.size(); take >= 1; --take) {
        const std::string tail = join_tail(labels, take);
        if (exception_.contains(tail)) {
            const std::size_t suffix_labels = take - 1;
            if (labels.size() < suffix_labels + 1) return std::nullopt;
            return join_tail(labels, suffix_labels + 1);
        }
    }

    // Otherwise the longest matching rule wins. A wildcard rule "*.x" makes
    // any single label plus x a public suffix.
    std::size_t suffix_labels = 0;
    for (std::size_t take = 1; take <= labels.size(); ++take) {
        const std::string tail = join_tail(labels, take);
        if (exact_.contains(tail)) suffix_labels = std::max(suffix_labels, take);
        if (take >= 2 && wildcard_.contains(join_tail(labels, take - 1))) {
            suffix_labels = std::max(suffix_labels, take);
        }
    }
    if (suffix_labels == 0) {
        // default rule: TLD is the last label
        suffix_labels = 1;
        if (labels.size() < 2) return std::nullopt;
    }
    if (labels.size() == suffix_labels) return std::nullopt;  // host is a public suffix
    return join_tail(labels, suffix_labels + 1);
}

std::optional<std::string> url_host(std::string_view url) {
    const std::size_t scheme_end = url.find("://");
    if (scheme_end == std::string_view::npos || scheme_end == 0) return std::nullopt;
    std::string_view rest = url.substr(scheme_end + 3);
    const std::size_t path_start = rest.find_first_of("/?#");
    std::string_view authority =
        path_start == std::string_view::npos ? rest : rest.substr(0, path_start);
    const std::size_t at = authority.rfind('@');
    if (at != std::string_view::npos) authority = authority.substr(at + 1);
    if (authority.empty()) return std::nullopt;
    if (authority.front() == '[') return std::nullopt;  // IPv6 literal
    const std::size_t colon = authority.find(':');
    if (colon != std::string_view::npos) authority = authority.substr(0, colon);
    if (authority.empty()) return std::nullopt;
    std::string host = ascii_lower(authority);
    while (!host.empty() && host.back() == '.') host.pop_back();
    if (host.empty()) return std::nullopt;
    return host;
}

std::optional<std::string> extract_sld(std::string_view url, const SuffixRuleSet& rules) {
    auto host = url_host(url);
    if (!host) return std::nullopt;
    return rules.registrable_domain(*host);
}

std::string normalize_url(std::string_view url) {
    std::string out(url);
    const std::size_t scheme_end = out.find("://");
    if (scheme_end != std::string::npos) {
        std::size_t authority_end = out.find_first_of("/?#", scheme_end + 3);
        if (authority_end == std::string::npos) authority_end = out.size();
        for (std::size_t i = 0; i < authority_end; ++i) {
            out[i] = static_cast<char>(std::tolower(static_cast<unsigned char>(out[i])));
        }
    }
    if (!out.empty() && out.back() == '/') out.pop_back();
    return out;
}

CategoryMap CategoryMap::parse(std::istream& in) {
    CategoryMap map;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        while (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::size_t comma = line.find(',');
        if (comma == std::string::npos) continue;
        std::string domain = ascii_lower(std::string_view(line).substr(0, comma));
        std::string category = line.substr(comma + 1);
        if (first) {
            first = false;
            if (domain == "domain") continue;  // header row
        }
        map.map_[std::move(domain)] = std::move(category);
    }
    return map;
}

CategoryMap CategoryMap::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open category map: " + path.string());
    return parse(in);
}

std::string CategoryMap::categorize(std::string_view domain) const {
    auto it = map_.find(ascii_lower(domain));
    if (it == map_.end()) return "None";
    return it->second;
}

DiversityStats diversity_stats(const std::set<std::string>& group, const Corpus& corpus,
                               const TweetFilter& filter, const SuffixRuleSet& rules,
                               const CategoryMap& categories) {
    DiversityStats stats;
    stats.n_profiles = group.size();

    std::set<std::string> group_urls;
    std::set<std::string> group_domains;
    std::set<std::string> group_hashtags;
    std::set<std::string> group_categories;
    std::size_t categorized_refs = 0;

    std::size_t url_sharing = 0, domain_sharing = 0, hashtag_sharing = 0;
    std::size_t sum_unique_urls = 0, sum_unique_domains = 0;
    std::size_t sum_total_hashtags = 0, sum_unique_hashtags = 0;

    for (const std::string& profile_id : group) {
        auto it = corpus.profiles.find(profile_id);
        std::set<std::string> urls, domains, hashtags;
        std::size_t total_hashtags = 0;
        if (it != corpus.profiles.end()) {
            for (const TweetRecord& r : it->second) {
                if (!filter.matches(r)) continue;
                for (const std::string& raw_url : r.urls) {
                    ++stats.n_urls;
                    urls.insert(normalize_url(raw_url));
                    if (auto sld = extract_sld(raw_url, rules)) {
                        ++stats.n_domains;
                        domains.insert(*sld);
                        const std::string category = categories.categorize(*sld);
                        group_categories.insert(category);
                        if (category != "None") ++categorized_refs;
                    }
                }
                for (const std::string& tag : r.hashtags) {
                    ++total_hashtags;
                    hashtags.insert(tag);
                }
            }
        }
        ProfileContentStats& pcs = stats.per_profile[profile_id];
        pcs.unique_urls = urls.size();
        pcs.unique_domains = domains.size();
        pcs.total_hashtags = total_hashtags;
        pcs.unique_hashtags = hashtags.size();

        if (!urls.empty()) {
            ++url_sharing;
            sum_unique_urls += urls.size();
        }
        if (!domains.empty()) {
            ++domain_sharing;
            sum_unique_domains += domains.size();
        }
        if (total_hashtags > 0) {
            ++hashtag_sharing;
            sum_total_hashtags += total_hashtags;
            sum_unique_hashtags += hashtags.size();
        }
        group_urls.merge(urls);
        group_domains.merge(domains);
        group_hashtags.merge(hashtags);
    }

    stats.n_unique_urls = group_urls.size();
    stats.n_unique_domains = group_domains.size();
    stats.n_domain_categories = group_categories.size();
    stats.n_hashtags_total = sum_total_hashtags;
    stats.n_hashtags_unique = group_hashtags.size();
    stats.categorized_fraction =
        stats.n_domains > 0 ? static_cast<double>(categorized_refs) / static_cast<double>(stats.n_domains)
                            : 0.0;
    if (url_sharing > 0) {
        stats.avg_unique_urls_per_sharing_profile =
            static_cast<double>(sum_unique_urls) / static_cast<double>(url_sharing);
    }
    if (domain_sharing > 0) {
        stats.avg_unique_domains_per_sharing_profile =
            static_cast<double>(sum_unique_domains) / static_cast<double>(domain_sharing);
    }
    if (hashtag_sharing > 0) {
        stats.avg_hashtags_per_sharing_profile =
            static_cast<double>(sum_total_hashtags) / static_cast<double>(hashtag_sharing);
        stats.avg_unique_hashtags_per_sharing_profile =
            static_cast<double>(sum_unique_hashtags) / static_cast<double>(hashtag_sharing);
    }
    return stats;
}

std::vector<HashtagRank> top_hashtags(const std::set<std::string>& group,
                                      const Corpus& corpus, const TweetFilter& filter,
                                      std::size_t n) {
    if (n < 1) throw std::invalid_argument("top_hashtags requires n >= 1");
    std::map<std::string, std::size_t> counts;
    std::map<std::string, std::set<std::string>> users;
    for (const std::string& profile_id : group) {
        auto it = corpus.profiles.find(profile_id);
        if (it == corpus.profiles.end()) continue;
        for (const TweetRecord& r : it->second) {
            if (!filter.matches(r)) continue;
            for (const std::string& tag : r.hashtags) {
                ++counts[tag];
                users[tag].insert(profile_id);
            }
        }
    }

    std::vector<HashtagRank> ranked;
    ranked.reserve(counts.size());
    for (const auto& [tag, count] : counts) {
        HashtagRank rank;
        rank.hashtag = tag;
        rank.occurrences = count;
        rank.pct_profiles_using = group.empty()
                                      ? 0.0
                                      : 100.0 * static_cast<double>(users[tag].size()) /
                                            static_cast<double>(group.size());
        ranked.push_back(std::move(rank));
    }
    std::sort(ranked.begin(), ranked.end(), [](const HashtagRank& a, const HashtagRank& b) {
        if (a.occurrences != b.occurrences) return a.occurrences > b.occurrences;
        return a.hashtag < b.hashtag;
    });
    if (ranked.size() > n) ranked.resize(n);
    return ranked;
}

std::vector<std::pair<std::string, std::size_t>> category_histogram(
    const std::set<std::string>& group, const Corpus& corpus, const TweetFilter& filter,
    const SuffixRuleSet& rules, const CategoryMap& categories, std::size_t top_k) {
    if (top_k < 1) throw std::invalid_argument("category_histogram requires top_k >= 1");
    std::map<std::string, std::size_t> counts;
    for (const std::string& profile_id : group) {
        auto it = corpus.profiles.find(profile_id);
        if (it == corpus.profiles.end()) continue;
        for (const TweetRecord& r : it->second) {
            if (!filter.matches(r)) continue;
            for (const std::string& raw_url : r.urls) {
                if (auto sld = extract_sld(raw_url, rules)) {
                    ++counts[categories.categorize(*sld)];
                }
            }
        }
    }
    std::vector<std::pair<std::string, std::size_t>> ranked(counts.begin(), counts.end());
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    if (ranked.size() > top_k) ranked.resize(top_k);
    return ranked;
}

std::vector<std::set<std::string>> profile_domain_sets(const std::set<std::string>& group,
                                                       const Corpus& corpus,
                                                       const TweetFilter& filter,
                                                       const SuffixRuleSet& rules) {
    std::vector<std::set<std::string>> out;
    out.reserve(group.size());
    for (const std::string& profile_id : group) {
        std::set<std::string> domains;
        auto it = corpus.profiles.find(profile_id);
        if (it != corpus.profiles.end()) {
            for (const TweetRecord& r : it->second) {
                if (!filter.matches(r)) continue;
                for (const std::string& url : r.urls) {
                    if (auto sld = extract_sld(url, rules)) domains.insert(*sld);
                }
            }
        }
        out.push_back(std::move(domains));
    }
    return out;
}

std::vector<std::set<std::string>> profile_hashtag_sets(const std::set<std::string>& group,
                                                        const Corpus& corpus,
                                                        const TweetFilter& filter) {
    std::vector<std::set<std::string>> out;
    out.reserve(group.size());
    for (const std::string& profile_id : group) {
        std::set<std::string> tags;
        auto it = corpus.profiles.find(profile_id);
        if (it != corpus.profiles.end()) {
            for (const TweetRecord& r : it->second) {
                if (!filter.matches(r)) continue;
                tags.insert(r.hashtags.begin(), r.hashtags.end());
            }
        }
        out.push_back(std::move(tags));
    }
    return out;
}

}  // namespace toxprof
