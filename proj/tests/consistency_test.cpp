#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "toxprof/consistency.hpp"
#include "toxprof/rng.hpp"

using namespace toxprof;

namespace {

// Independent oracle: the O(n^2) pairwise definition, sum |xi-xj| / (2 n^2 mu).
double gini_bruteforce(const std::vector<double>& values) {
    const double n = static_cast<double>(values.size());
    double sum = 0.0;
    for (double v : values) sum += v;
    if (sum == 0.0) return 0.0;
    const double mu = sum / n;
    double pairwise = 0.0;
    for (double a : values) {
        for (double b : values) pairwise += std::fabs(a - b);
    }
    return pairwise / (2.0 * n * n * mu);
}

ProfileSummary summary_with(const std::string& id, Dimension dim, double median_v,
                            double gini_v) {
    ProfileSummary s;
    s.profile_id = id;
    auto& ds = s.per_dimension[static_cast<std::size_t>(dim)];
    ds.median = median_v;
    ds.gini = gini_v;
    ds.n_tweets = 20;
    return s;
}

Corpus corpus_with_hashtags(const std::map<std::string, std::vector<std::string>>& tags) {
    Corpus corpus;
    int counter = 0;
    for (const auto& [profile, tag_list] : tags) {
        for (const std::string& tag : tag_list) {
            TweetRecord r;
            r.tweet_id = "t" + std::to_string(counter++);
            r.profile_id = profile;
            r.lang = "en";
            if (!tag.empty()) r.hashtags.push_back(tag);
            corpus.profiles[profile].push_back(std::move(r));
        }
    }
    return corpus;
}

}  // namespace

TEST_CASE("median order statistics") {
    CHECK(median(std::vector<double>{1, 2, 3}) == 2.0);
    CHECK(median(std::vector<double>{1, 2, 3, 4}) == 2.5);
    CHECK(median(std::vector<double>{0.4}) == 0.4);
    CHECK(median(std::vector<double>{3, 1, 2}) == 2.0);
    CHECK_THROWS_AS(median(std::vector<double>{}), std::invalid_argument);
}

TEST_CASE("gini fixed points") {
    CHECK(gini(std::vector<double>{0.5, 0.5, 0.5}) == 0.0);
    CHECK(gini(std::vector<double>{0, 1}) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(gini(std::vector<double>{0, 0, 0}) == 0.0);
    CHECK_THROWS_AS(gini(std::vector<double>{}), std::invalid_argument);
    CHECK_THROWS_AS(gini(std::vector<double>{0.5, -0.1}), std::invalid_argument);
}

TEST_CASE("gini equals the brute-force pairwise oracle") {
    Rng rng(4242);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 1 + rng.uniform_index(50);
        std::vector<double> values(n);
        for (double& v : values) v = rng.uniform01();
        const double fast = gini(values);
        const double oracle = gini_bruteforce(values);
        CHECK(std::fabs(fast - oracle) <= 1e-12);
        CHECK(fast >= 0.0);
        CHECK(fast <= 1.0 - 1.0 / static_cast<double>(n) + 1e-12);
    }
}

TEST_CASE("gini is scale and permutation invariant") {
    Rng rng(777);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 2 + rng.uniform_index(30);
        std::vector<double> values(n);
        for (double& v : values) v = rng.uniform01();
        const double base = gini(values);

        const double c = 0.1 + 10.0 * rng.uniform01();
        std::vector<double> scaled = values;
        for (double& v : scaled) v *= c;
        CHECK(gini(scaled) == doctest::Approx(base).epsilon(1e-9));

        std::vector<double> shuffled = values;
        for (std::size_t i = shuffled.size(); i > 1; --i) {
            std::swap(shuffled[i - 1], shuffled[rng.uniform_index(i)]);
        }
        CHECK(gini(shuffled) == doctest::Approx(base).epsilon(1e-12));
    }
}

TEST_CASE("binarized_proportion counts inclusively") {
    CHECK(binarized_proportion(std::vector<double>{0.1, 0.5, 0.9}, 0.4) ==
          doctest::Approx(2.0 / 3.0));
    CHECK(binarized_proportion(std::vector<double>{0.1, 0.2, 0.39}, 0.4) == 0.0);
    CHECK(binarized_proportion(std::vector<double>{0.4}, 0.4) == 1.0);
    CHECK_THROWS_AS(binarized_proportion(std::vector<double>{}, 0.4),
                    std::invalid_argument);
}

TEST_CASE("summarize_profiles computes per-dimension stats") {
    Corpus corpus;
    ScoreMap scores;
    for (int p = 0; p < 2; ++p) {
        const std::string profile = "p" + std::to_string(p);
        for (int i = 0; i < 2; ++i) {
            TweetRecord r;
            r.tweet_id = profile + "t" + std::to_string(i);
            r.profile_id = profile;
            r.lang = "en";
            corpus.profiles[profile].push_back(r);
            ScoreVector v;
            for (double& s : v.values) s = 0.5;
            scores[r.tweet_id] = v;
        }
    }
    std::set<std::string> eligible{"p0", "p1", "ghost"};
    std::vector<std::string> excluded;
    const auto summaries = summarize_profiles(corpus, scores, eligible, 0.4, &excluded);
    REQUIRE(summaries.size() == 2);
    for (const auto& s : summaries) {
        for (Dimension d : kAllDimensions) {
            CHECK(s.dim(d).median == 0.5);
            CHECK(s.dim(d).gini == 0.0);
            CHECK(s.dim(d).binarized_proportion == 1.0);
            CHECK(s.dim(d).n_tweets == 2);
        }
    }
    CHECK(excluded == std::vector<std::string>{"ghost"});
}

TEST_CASE("select_focus applies closed thresholds") {
    const Dimension dim = Dimension::insult;
    std::vector<ProfileSummary> summaries{
        summary_with("selected", dim, 0.5, 0.20),
        summary_with("low_median", dim, 0.39, 0.10),
        summary_with("boundary", dim, 0.40, 0.25),
        summary_with("high_gini", dim, 0.9, 0.26),
    };
    const auto focus = select_focus(summaries, dim, 0.4, 0.25);
    CHECK(focus == std::set<std::string>{"selected", "boundary"});
}

TEST_CASE("select_focus is monotone in thresholds") {
    Rng rng(31);
    std::vector<ProfileSummary> summaries;
    for (int i = 0; i < 200; ++i) {
        summaries.push_back(summary_with("p" + std::to_string(i), Dimension::threat,
                                         rng.uniform01(), rng.uniform01()));
    }
    auto base = select_focus(summaries, Dimension::threat, 0.5, 0.3);
    // loosening either threshold never drops a selected profile
    for (const auto& [dm, dg] : std::vector<std::pair<double, double>>{
             {-0.1, 0.0}, {0.0, 0.1}, {-0.2, 0.2}}) {
        auto looser = select_focus(summaries, Dimension::threat, 0.5 + dm, 0.3 + dg);
        for (const auto& id : base) CHECK(looser.contains(id));
    }
}

TEST_CASE("planted consistent-toxic profiles are recovered exactly") {
    Rng rng(88);
    std::vector<ProfileSummary> summaries;
    std::set<std::string> planted;
    for (int i = 0; i < 8; ++i) {
        // scores drawn >= 0.6 with tiny spread: median >= 0.6, gini < 0.1
        std::vector<double> values;
        for (int k = 0; k < 40; ++k) values.push_back(0.6 + 0.05 * rng.uniform01());
        ProfileSummary s;
        s.profile_id = "planted" + std::to_string(i);
        auto& ds = s.per_dimension[static_cast<std::size_t>(Dimension::identity_attack)];
        ds.median = median(values);
        ds.gini = gini(values);
        CHECK(ds.gini < 0.1);
        summaries.push_back(s);
        planted.insert(s.profile_id);
    }
    for (int i = 0; i < 150; ++i) {
        // diffuse profiles: mixture of low and high draws
        std::vector<double> values;
        for (int k = 0; k < 40; ++k) {
            values.push_back(rng.uniform01() < 0.7 ? 0.05 * rng.uniform01()
                                                   : 0.5 + 0.5 * rng.uniform01());
        }
        ProfileSummary s;
        s.profile_id = "diffuse" + std::to_string(i);
        auto& ds = s.per_dimension[static_cast<std::size_t>(Dimension::identity_attack)];
        ds.median = median(values);
        ds.gini = gini(values);
        summaries.push_back(s);
    }
    CHECK(select_focus(summaries, Dimension::identity_attack, 0.4, 0.25) == planted);
}

TEST_CASE("sample_random_baseline is deterministic and bounded") {
    std::set<std::string> eligible;
    for (int i = 0; i < 100; ++i) eligible.insert("p" + std::to_string(i));
    std::set<std::string> exclude{"p0", "p1", "p2"};

    const auto a = sample_random_baseline(eligible, exclude, 10, 42);
    const auto b = sample_random_baseline(eligible, exclude, 10, 42);
    CHECK(a == b);
    CHECK(a.size() == 10);
    for (const auto& id : a) CHECK_FALSE(exclude.contains(id));

    const auto c = sample_random_baseline(eligible, exclude, 10, 43);
    CHECK(a != c);  // different seed, different draw (overwhelmingly likely)

    CHECK(sample_random_baseline(eligible, exclude, 0, 1).empty());
    CHECK_THROWS_WITH_AS(sample_random_baseline(eligible, exclude, 98, 1),
                         doctest::Contains("deficit"), std::runtime_error);
}

TEST_CASE("pearson matrix on exact relationships") {
    ScoreMap scores;
    const std::vector<double> xs{0.0, 0.5, 1.0};
    for (std::size_t i = 0; i < xs.size(); ++i) {
        ScoreVector v;
        v[Dimension::toxicity] = xs[i];
        v[Dimension::severe_toxicity] = xs[i];          // y = x
        v[Dimension::identity_attack] = 1.0 - xs[i];    // y = -x + 1
        v[Dimension::inflammatory] = 0.3;               // constant
        v[Dimension::insult] = xs[i] * 0.5;
        v[Dimension::threat] = 0.1 + 0.2 * xs[i];
        scores["t" + std::to_string(i)] = v;
    }
    const PearsonMatrix m = pearson_matrix(scores);
    const auto at = [&](Dimension a, Dimension b) {
        return m[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
    };
    for (std::size_t i = 0; i < kDimensionCount; ++i) CHECK(m[i][i] == 1.0);
    CHECK(at(Dimension::toxicity, Dimension::severe_toxicity) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(at(Dimension::toxicity, Dimension::identity_attack) ==
          doctest::Approx(-1.0).epsilon(1e-12));
    // constant dimension: undefined sentinel, not zero
    CHECK(std::isnan(at(Dimension::inflammatory, Dimension::toxicity)));
    CHECK(std::isnan(at(Dimension::toxicity, Dimension::inflammatory)));
}

TEST_CASE("pearson matrix is symmetric on random data") {
    Rng rng(12);
    ScoreMap scores;
    for (int i = 0; i < 500; ++i) {
        ScoreVector v;
        for (double& s : v.values) s = rng.uniform01();
        scores["t" + std::to_string(i)] = v;
    }
    const PearsonMatrix m = pearson_matrix(scores);
    for (std::size_t i = 0; i < kDimensionCount; ++i) {
        CHECK(m[i][i] == 1.0);
        for (std::size_t j = 0; j < kDimensionCount; ++j) {
            CHECK(std::fabs(m[i][j] - m[j][i]) <= 1e-12);
            CHECK(m[i][j] <= 1.0 + 1e-12);
            CHECK(m[i][j] >= -1.0 - 1e-12);
        }
    }
}

TEST_CASE("obscene filter uses strict occurrence fractions") {
    std::map<std::string, std::vector<std::string>> tags;
    tags["nine_of_ten"] = {"xxx", "xxx", "xxx", "xxx", "xxx", "xxx", "xxx", "xxx", "xxx", "ok"};
    tags["eight_of_ten"] = {"xxx", "xxx", "xxx", "xxx", "xxx", "xxx", "xxx", "xxx", "ok", "ok"};
    tags["no_tags"] = {""};
    const Corpus corpus = corpus_with_hashtags(tags);
    const std::set<std::string> lexicon{"xxx"};
    const std::set<std::string> focus{"nine_of_ten", "eight_of_ten", "no_tags"};

    const auto result = obscene_filter(focus, corpus, lexicon, 0.8);
    CHECK(result.removed.count("nine_of_ten") == 1);
    CHECK(result.removed.at("nine_of_ten") == doctest::Approx(0.9));
    CHECK(result.retained.contains("eight_of_ten"));  // 0.8 is not > 0.8
    CHECK(result.retained.contains("no_tags"));
}

TEST_CASE("hashtag lexicon loader strips comments and lowercases") {
    std::istringstream in("# comment line\nXXX\nnsfw\n\n#another comment\nAdult\n");
    const auto lexicon = load_hashtag_lexicon(in);
    CHECK(lexicon == std::set<std::string>{"xxx", "nsfw", "adult"});
}

TEST_CASE("run_selection composes box, obscene removal, and baseline") {
    const Dimension dim = Dimension::identity_attack;
    std::vector<ProfileSummary> summaries;
    std::set<std::string> eligible;
    for (int i = 0; i < 30; ++i) {
        const std::string id = "clean" + std::to_string(i);
        summaries.push_back(summary_with(id, dim, 0.1, 0.6));
        eligible.insert(id);
    }
    summaries.push_back(summary_with("toxic_keep", dim, 0.7, 0.1));
    summaries.push_back(summary_with("toxic_obscene", dim, 0.8, 0.05));
    eligible.insert("toxic_keep");
    eligible.insert("toxic_obscene");

    std::map<std::string, std::vector<std::string>> tags;
    tags["toxic_obscene"] = {"xxx", "xxx", "xxx", "xxx", "xxx"};
    tags["toxic_keep"] = {"politics"};
    const Corpus corpus = corpus_with_hashtags(tags);

    const auto sel = run_selection(summaries, corpus, eligible, dim, {"xxx"}, 0.4, 0.25,
                                   0.8, 9001);
    CHECK(sel.focus == std::set<std::string>{"toxic_keep"});
    CHECK(sel.removed_obscene.count("toxic_obscene") == 1);
    CHECK(sel.random_baseline.size() == sel.focus.size());
    for (const auto& id : sel.random_baseline) {
        CHECK_FALSE(sel.focus.contains(id));
        CHECK_FALSE(sel.removed_obscene.contains(id));
    }
}
