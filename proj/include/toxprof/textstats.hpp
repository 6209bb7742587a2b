#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "toxprof/corpus.hpp"

namespace toxprof {

/// One profile's tweets reduced to a bag of stemmed tokens, with the raw
/// tallies readability needs.
struct TokenizedDoc {
    std::string profile_id;
    std::vector<std::string> tokens;
    std::size_t sentence_count = 0;
    std::size_t raw_word_count = 0;
    std::size_t raw_char_count = 0;  // alphanumeric characters in raw words
};

std::set<std::string> load_stopwords(std::istream& in);
std::set<std::string> load_stopwords_file(const std::filesystem::path& path);

/// Rule-based suffix stripper. Applied to a lowercase token, first matching
/// rule wins:
///   -sses -> -ss; -ies -> -y; -es after s/x/z/ch/sh stripped; trailing -s
///   stripped (not -ss); -ing and -ed stripped when a vowel remains, with a
///   final doubled consonant undone (unless l, s, or z).
std::string stem(std::string token);

/// Sentence count of one tweet text: runs of . ! ? each end a sentence, and
/// trailing content without terminal punctuation ends one more.
std::size_t sentence_count(std::string_view text);

/// Concatenates a profile's matching tweets into one document: sentence
/// tally first, then URL stripping, non-alphanumeric stripping, lowercasing,
/// whitespace tokenization, stop-word removal, stemming.
TokenizedDoc normalize(const std::string& profile_id,
                       std::span<const TweetRecord> records,
                       const TweetFilter& filter,
                       const std::set<std::string>& stopwords);

struct TopicModel {
    std::size_t topic_count = 0;
    std::vector<std::string> vocabulary;
    std::vector<std::vector<double>> topic_word;  // [topic][word], rows sum to 1
    std::vector<std::vector<double>> doc_topic;   // [doc][topic], rows sum to 1
    double alpha = 0.0;
    double beta = 0.0;
    std::uint64_t seed = 0;
    std::size_t iterations = 0;
};

/// Collapsed Gibbs sampling for `iterations` full sweeps; deterministic given
/// seed. alpha <= 0 selects the 50/K default. Every document must be
/// non-empty. sweep_hook, when set, receives (sweep index, total assigned
/// tokens) after each sweep.
TopicModel lda_fit(const std::vector<TokenizedDoc>& docs, std::size_t topic_count,
                   double alpha = -1.0, double beta = 0.01,
                   std::size_t iterations = 1000, std::uint64_t seed = 1,
                   const std::function<void(std::size_t, std::size_t)>& sweep_hook = {});

/// n highest-weight words of one topic, ties broken lexicographically.
std::vector<std::pair<std::string, double>> top_words(const TopicModel& model,
                                                      std::size_t topic,
                                                      std::size_t n = 5);

/// Maximal vowel-group runs (a e i o u y), minus one for a lone silent
/// trailing 'e' (kept for consonant+"le"), floored at 1.
std::size_t count_syllables(std::string_view word);

struct ReadabilityScores {
    std::size_t sentences = 0;
    std::size_t words = 0;
    double richness = 0.0;  // unique words / total words
    double flesch = 0.0;
    double ari = 0.0;
};

/// Readability of one profile's matching tweets. Words are whitespace tokens
/// after URL removal; word length counts alphanumeric characters.
ReadabilityScores readability(std::span<const TweetRecord> records,
                              const TweetFilter& filter);

struct ReadabilityReport {
    std::size_t n_profiles = 0;  // profiles with at least one word
    double avg_sentences = 0.0;
    double avg_richness = 0.0;
    double avg_flesch = 0.0;
    double avg_ari = 0.0;
};

ReadabilityReport readability_report(const std::set<std::string>& group,
                                     const Corpus& corpus, const TweetFilter& filter);

}  // namespace toxprof
