#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "toxprof/rng.hpp"
#include "toxprof/textstats.hpp"

using namespace toxprof;

namespace {

TweetRecord tweet(const std::string& text, bool retweet = false) {
    static int counter = 0;
    TweetRecord r;
    r.tweet_id = "t" + std::to_string(counter++);
    r.profile_id = "p";
    r.text = text;
    r.lang = "en";
    r.is_retweet = retweet;
    return r;
}

TokenizedDoc doc_of(const std::string& id, std::vector<std::string> tokens) {
    TokenizedDoc d;
    d.profile_id = id;
    d.tokens = std::move(tokens);
    return d;
}

}  // namespace

TEST_CASE("normalize strips urls, punctuation, stopwords, then stems") {
    const std::set<std::string> no_stopwords;
    std::vector<TweetRecord> records{tweet("Vote!! https://x.io #Now")};
    TokenizedDoc doc = normalize("p", records, {}, no_stopwords);
    CHECK(doc.tokens == std::vector<std::string>{"vote", "now"});
    // sentences are tallied on the raw text, before URL stripping, so the
    // dot inside the URL also terminates a run: "Vote!!", "https://x.", rest
    CHECK(doc.sentence_count == 3);

    SUBCASE("stopword-only text leaves no tokens") {
        std::vector<TweetRecord> r2{tweet("the and of")};
        TokenizedDoc d2 = normalize("p", r2, {}, {"the", "and", "of"});
        CHECK(d2.tokens.empty());
    }
    SUBCASE("inflected forms share a stem") {
        std::vector<TweetRecord> r3{tweet("Running runs")};
        TokenizedDoc d3 = normalize("p", r3, {}, no_stopwords);
        REQUIRE(d3.tokens.size() == 2);
        CHECK(d3.tokens[0] == d3.tokens[1]);
        CHECK(d3.tokens[0] == "run");
    }
    SUBCASE("retweets are dropped unless included") {
        std::vector<TweetRecord> r4{tweet("original text"), tweet("echoed text", true)};
        CHECK(normalize("p", r4, TweetFilter{"en", false}, no_stopwords).tokens ==
              std::vector<std::string>{"original", "text"});
        CHECK(normalize("p", r4, TweetFilter{"en", true}, no_stopwords).tokens.size() == 4);
    }
}

TEST_CASE("stemmer rules") {
    CHECK(stem("runs") == "run");
    CHECK(stem("running") == "run");
    CHECK(stem("stopped") == "stop");
    CHECK(stem("boxes") == "box");
    CHECK(stem("classes") == "class");
    CHECK(stem("cities") == "city");
    CHECK(stem("falling") == "fall");  // doubled l is kept
    CHECK(stem("vote") == "vote");
    CHECK(stem("is") == "is");  // too short to strip
    CHECK(stem("miss") == "miss");
}

TEST_CASE("sentence counting on terminator runs") {
    CHECK(sentence_count("One. Two! Three?") == 3);
    CHECK(sentence_count("No terminator") == 1);
    CHECK(sentence_count("Wow!!! Really...") == 2);
    CHECK(sentence_count("") == 0);
    CHECK(sentence_count("   ") == 0);
    CHECK(sentence_count("Tail. fragment") == 2);
}

TEST_CASE("lda with one topic reproduces smoothed corpus frequencies") {
    const std::vector<TokenizedDoc> docs{
        doc_of("d1", {"apple", "apple", "pear"}),
        doc_of("d2", {"apple", "plum"}),
    };
    const TopicModel model = lda_fit(docs, 1, -1.0, 0.01, 50, 7);
    REQUIRE(model.vocabulary == std::vector<std::string>{"apple", "pear", "plum"});
    const double v_beta = 3 * 0.01;
    CHECK(model.topic_word[0][0] == doctest::Approx((3 + 0.01) / (5 + v_beta)).epsilon(1e-12));
    CHECK(model.topic_word[0][1] == doctest::Approx((1 + 0.01) / (5 + v_beta)).epsilon(1e-12));
    CHECK(model.topic_word[0][2] == doctest::Approx((1 + 0.01) / (5 + v_beta)).epsilon(1e-12));
}

TEST_CASE("lda is deterministic given the seed") {
    Rng rng(55);
    std::vector<TokenizedDoc> docs;
    for (int d = 0; d < 6; ++d) {
        std::vector<std::string> tokens;
        for (int i = 0; i < 30; ++i) {
            tokens.push_back("w" + std::to_string(rng.uniform_index(40)));
        }
        docs.push_back(doc_of("d" + std::to_string(d), std::move(tokens)));
    }
    const TopicModel a = lda_fit(docs, 3, -1.0, 0.01, 200, 99);
    const TopicModel b = lda_fit(docs, 3, -1.0, 0.01, 200, 99);
    CHECK(a.topic_word == b.topic_word);
    CHECK(a.doc_topic == b.doc_topic);
    const TopicModel c = lda_fit(docs, 3, -1.0, 0.01, 200, 100);
    CHECK(a.topic_word != c.topic_word);
}

TEST_CASE("lda distributions are normalized and counts are conserved") {
    Rng rng(66);
    std::vector<TokenizedDoc> docs;
    std::size_t total_tokens = 0;
    for (int d = 0; d < 5; ++d) {
        std::vector<std::string> tokens;
        const std::size_t n = 10 + rng.uniform_index(30);
        for (std::size_t i = 0; i < n; ++i) {
            tokens.push_back("w" + std::to_string(rng.uniform_index(25)));
        }
        total_tokens += n;
        docs.push_back(doc_of("d" + std::to_string(d), std::move(tokens)));
    }
    std::size_t hook_calls = 0;
    const TopicModel model = lda_fit(
        docs, 4, -1.0, 0.01, 60, 3, [&](std::size_t, std::size_t assigned) {
            ++hook_calls;
            CHECK(assigned == total_tokens);  // every sweep conserves assignments
        });
    CHECK(hook_calls == 60);
    for (const auto& topic : model.topic_word) {
        double sum = 0.0;
        for (double w : topic) sum += w;
        CHECK(std::fabs(sum - 1.0) <= 1e-9);
    }
    for (const auto& doc : model.doc_topic) {
        double sum = 0.0;
        for (double w : doc) sum += w;
        CHECK(std::fabs(sum - 1.0) <= 1e-9);
    }
}

TEST_CASE("lda rejects degenerate inputs") {
    CHECK_THROWS_AS(lda_fit({}, 2), std::invalid_argument);
    CHECK_THROWS_AS(lda_fit({doc_of("d", {})}, 2), std::invalid_argument);
    CHECK_THROWS_AS(lda_fit({doc_of("d", {"x"})}, 0), std::invalid_argument);
}

TEST_CASE("disjoint vocabularies separate into distinct topics") {
    // two 20-doc collections over disjoint 30-word vocabularies
    std::size_t passes = 0;
    for (std::uint64_t seed : {11u, 22u, 33u, 44u, 55u}) {
        Rng rng(seed);
        std::vector<TokenizedDoc> docs;
        for (int d = 0; d < 20; ++d) {
            std::vector<std::string> tokens;
            for (int i = 0; i < 80; ++i) {
                tokens.push_back("aaa" + std::to_string(rng.uniform_index(30)));
            }
            docs.push_back(doc_of("a" + std::to_string(d), std::move(tokens)));
        }
        for (int d = 0; d < 20; ++d) {
            std::vector<std::string> tokens;
            for (int i = 0; i < 80; ++i) {
                tokens.push_back("bbb" + std::to_string(rng.uniform_index(30)));
            }
            docs.push_back(doc_of("b" + std::to_string(d), std::move(tokens)));
        }
        const TopicModel model = lda_fit(docs, 2, -1.0, 0.01, 800, seed);
        bool separated = true;
        for (std::size_t topic = 0; topic < 2; ++topic) {
            const auto words = top_words(model, topic, 5);
            std::size_t from_a = 0;
            for (const auto& [word, weight] : words) {
                if (word.starts_with("aaa")) ++from_a;
            }
            const std::size_t majority = std::max(from_a, words.size() - from_a);
            if (majority * 10 < words.size() * 9) separated = false;
        }
        if (separated) ++passes;
    }
    CHECK(passes >= 4);
}

TEST_CASE("top_words ranks by weight with lexicographic ties") {
    const std::vector<TokenizedDoc> docs{doc_of("d", {"zeta", "alpha"})};
    const TopicModel model = lda_fit(docs, 1, -1.0, 0.01, 10, 1);

    SUBCASE("uniform two-word corpus splits 0.5/0.5 up to smoothing") {
        const auto words = top_words(model, 0, 5);
        REQUIRE(words.size() == 2);  // n beyond vocabulary returns everything
        CHECK(words[0].second == doctest::Approx(0.5).epsilon(0.01));
        CHECK(words[1].second == doctest::Approx(0.5).epsilon(0.01));
        // exact tie resolves lexicographically
        CHECK(words[0].first == "alpha");
        CHECK(words[1].first == "zeta");
    }
    SUBCASE("weights are non-increasing") {
        const auto words = top_words(model, 0, 2);
        for (std::size_t i = 1; i < words.size(); ++i) {
            CHECK(words[i - 1].second >= words[i].second);
        }
    }
    SUBCASE("out-of-range topic throws") {
        CHECK_THROWS_AS(top_words(model, 5, 2), std::out_of_range);
    }
}

TEST_CASE("syllable counting heuristic") {
    CHECK(count_syllables("cat") == 1);
    CHECK(count_syllables("hello") == 2);
    CHECK(count_syllables("table") == 2);  // consonant + "le" keeps its syllable
    CHECK(count_syllables("stone") == 1);  // silent trailing e
    CHECK(count_syllables("tree") == 1);
    CHECK(count_syllables("rhythm") == 1);  // y as the only vowel
    CHECK(count_syllables("b") == 1);       // floor at one
    CHECK(count_syllables("window") == 2);
    CHECK_THROWS_AS(count_syllables(""), std::invalid_argument);
}

TEST_CASE("readability formulas match direct arithmetic") {
    SUBCASE("ari on 'the cat sat'") {
        std::vector<TweetRecord> records{tweet("the cat sat")};
        const ReadabilityScores scores = readability(records, {});
        CHECK(scores.sentences == 1);
        CHECK(scores.words == 3);
        CHECK(scores.ari == doctest::Approx(4.71 * 3 + 0.5 * 3 - 21.43).epsilon(1e-9));
        CHECK(scores.ari == doctest::Approx(-5.80).epsilon(0.001));
        CHECK(scores.richness == 1.0);  // all words distinct
    }
    SUBCASE("flesch with 10 words, 1 sentence, 15 syllables") {
        // five 2-syllable and five 1-syllable words, no terminator: one sentence
        const std::string text =
            "window sunset paper rocket music cat dog sun lamp tree";
        // confirm the syllable tally the formula will see
        std::size_t syllables = 0;
        std::istringstream words(text);
        std::string word;
        while (words >> word) syllables += count_syllables(word);
        REQUIRE(syllables == 15);

        std::vector<TweetRecord> records{tweet(text)};
        const ReadabilityScores scores = readability(records, {});
        CHECK(scores.sentences == 1);
        CHECK(scores.words == 10);
        CHECK(scores.flesch ==
              doctest::Approx(206.835 - 1.015 * 10.0 - 84.6 * 1.5).epsilon(1e-9));
        CHECK(scores.flesch == doctest::Approx(69.785).epsilon(1e-6));
    }
    SUBCASE("no usable words is an error") {
        std::vector<TweetRecord> records{tweet("https://only.a.link")};
        CHECK_THROWS_AS(readability(records, {}), std::invalid_argument);
    }
}

TEST_CASE("readability is invariant to tweet order") {
    std::vector<TweetRecord> records{
        tweet("First message here. And more!"),
        tweet("Second piece of text?"),
        tweet("Third thought, entirely new words."),
    };
    const ReadabilityScores forward = readability(records, {});
    std::reverse(records.begin(), records.end());
    const ReadabilityScores backward = readability(records, {});
    CHECK(forward.richness == backward.richness);
    CHECK(forward.flesch == backward.flesch);
    CHECK(forward.ari == backward.ari);
    CHECK(forward.sentences == backward.sentences);
}

TEST_CASE("duplicating a corpus halves richness") {
    Rng rng(14);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<TweetRecord> records;
        const std::size_t n_tweets = 1 + rng.uniform_index(5);
        std::set<std::string> used;
        for (std::size_t t = 0; t < n_tweets; ++t) {
            std::string text;
            const std::size_t n_words = 3 + rng.uniform_index(8);
            for (std::size_t w = 0; w < n_words; ++w) {
                // distinct words so unique count equals total in the base corpus
                std::string word = "word" + std::to_string(trial) + "x" +
                                   std::to_string(t) + "x" + std::to_string(w);
                text += (text.empty() ? "" : " ") + word;
            }
            records.push_back(tweet(text));
        }
        const ReadabilityScores base = readability(records, {});
        REQUIRE(base.richness == 1.0);

        std::vector<TweetRecord> doubled = records;
        doubled.insert(doubled.end(), records.begin(), records.end());
        const ReadabilityScores twice = readability(doubled, {});
        CHECK(twice.richness == doctest::Approx(base.richness / 2.0).epsilon(1e-12));
    }
}

TEST_CASE("group readability report averages per-profile scores") {
    Corpus corpus;
    for (int p = 0; p < 2; ++p) {
        TweetRecord r = tweet("Simple words here. More text!");
        r.profile_id = "p" + std::to_string(p);
        corpus.profiles[r.profile_id].push_back(r);
    }
    TweetRecord empty = tweet("");
    empty.profile_id = "empty";
    corpus.profiles["empty"].push_back(empty);

    const ReadabilityReport report =
        readability_report({"p0", "p1", "empty"}, corpus, {});
    CHECK(report.n_profiles == 2);  // the empty profile is skipped
    CHECK(report.avg_sentences == doctest::Approx(2.0));
}
