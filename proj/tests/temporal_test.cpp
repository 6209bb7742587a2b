#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <sstream>

#include "toxprof/rng.hpp"
#include "toxprof/temporal.hpp"

using namespace toxprof;

namespace {

Corpus corpus_at(const std::map<std::string, std::vector<std::int64_t>>& timelines) {
    Corpus corpus;
    int counter = 0;
    for (const auto& [profile, timestamps] : timelines) {
        for (std::int64_t t : timestamps) {
            TweetRecord r;
            r.tweet_id = "t" + std::to_string(counter++);
            r.profile_id = profile;
            r.lang = "en";
            r.created_at = t;
            corpus.profiles[profile].push_back(std::move(r));
        }
    }
    return corpus;
}

// textbook normal-equation OLS used as an independent oracle
std::pair<double, double> ols_oracle(const std::vector<double>& x,
                                     const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double intercept = (sy - slope * sx) / n;
    return {slope, intercept};
}

}  // namespace

TEST_CASE("inter-tweet intervals in minutes") {
    const std::int64_t t = 1577836800;
    CHECK(inter_tweet_intervals(std::vector<std::int64_t>{t, t + 300, t + 600}) ==
          std::vector<double>{5.0, 5.0});
    CHECK(inter_tweet_intervals(std::vector<std::int64_t>{t, t}) ==
          std::vector<double>{0.0});
    CHECK(inter_tweet_intervals(std::vector<std::int64_t>{t}).empty());
    CHECK(inter_tweet_intervals(std::vector<std::int64_t>{t, t + 90}) ==
          std::vector<double>{1.5});
}

TEST_CASE("interval pdf windows and fractions") {
    SUBCASE("constant five-minute poster puts all mass in the [5,6) bin") {
        const std::vector<double> intervals(40, 5.0);
        const IntervalPdf pdf = interval_pdf(intervals);
        CHECK(pdf.pdf.probabilities[5] == doctest::Approx(1.0));
        CHECK(pdf.fraction_within_max == 1.0);
    }
    SUBCASE("intervals beyond the window only affect the fraction") {
        std::vector<double> intervals(10, 5.0);
        intervals.insert(intervals.end(), 10, 120.0);
        const IntervalPdf pdf = interval_pdf(intervals);
        CHECK(pdf.fraction_within_max == doctest::Approx(0.5));
        CHECK(pdf.pdf.probabilities[5] == doctest::Approx(1.0));  // conditional on <= max
        CHECK(pdf.n_within == 10);
        CHECK(pdf.n_total == 20);
    }
    SUBCASE("a planted periodic poster dominates its bin") {
        Rng rng(17);
        std::vector<double> intervals;
        for (int i = 0; i < 200; ++i) intervals.push_back(10.0 + 0.2 * rng.uniform01());
        for (int i = 0; i < 100; ++i) intervals.push_back(60.0 * rng.uniform01());
        const IntervalPdf pdf = interval_pdf(intervals);
        const double planted_bin = pdf.pdf.probabilities[10];
        for (std::size_t b = 0; b < pdf.pdf.bins(); ++b) {
            if (b != 10) CHECK(planted_bin > pdf.pdf.probabilities[b]);
        }
    }
    SUBCASE("empty series is an error") {
        CHECK_THROWS_AS(interval_pdf(std::vector<double>{}), std::invalid_argument);
    }
}

TEST_CASE("interval cdf quantiles use order statistics") {
    std::vector<double> values;
    for (int i = 1; i <= 10; ++i) values.push_back(static_cast<double>(i));
    const IntervalCdf cdf(values);
    CHECK(cdf.quantile(1.0) == 10.0);
    CHECK(cdf.quantile(0.8) == 8.0);
    CHECK(cdf.quantile(0.0) == 1.0);
    CHECK_THROWS_AS(cdf.quantile(1.5), std::invalid_argument);

    const IntervalCdf constant(std::vector<double>{4.0, 4.0, 4.0});
    CHECK(constant.quantile(0.2) == 4.0);
    CHECK(constant.quantile(1.0) == 4.0);
    const auto binned = constant.binned(8, 8.0);
    double sum = 0.0;
    for (double p : binned.probabilities) sum += p;
    CHECK(sum == doctest::Approx(1.0));
    CHECK(binned.probabilities[3] == doctest::Approx(1.0));  // 4.0 falls in (3,4]
}

TEST_CASE("hour and weekday pdfs") {
    const std::int64_t monday = 1578268800;  // 2020-01-06T00:00:00Z
    SUBCASE("single-hour poster concentrates at that hour") {
        const Corpus corpus = corpus_at({{"p", {monday + 13 * 3600, monday + 13 * 3600 + 60,
                                                monday + 86400 + 13 * 3600}}});
        const auto pdf = hour_of_day_pdf(corpus, {"p"}, {});
        CHECK(pdf[13] == doctest::Approx(1.0));
    }
    SUBCASE("sunday-only poster has all weekday mass at index 6") {
        const std::int64_t sunday = monday + 6 * 86400;
        const Corpus corpus = corpus_at({{"p", {sunday, sunday + 3600, sunday + 7200}}});
        const auto pdf = day_of_week_pdf(corpus, {"p"}, {});
        CHECK(pdf[6] == doctest::Approx(1.0));
    }
    SUBCASE("even coverage over seven days is uniform") {
        std::vector<std::int64_t> timestamps;
        for (int d = 0; d < 7; ++d) timestamps.push_back(monday + d * 86400);
        const Corpus corpus = corpus_at({{"p", timestamps}});
        const auto pdf = day_of_week_pdf(corpus, {"p"}, {});
        for (double p : pdf) CHECK(p == doctest::Approx(1.0 / 7.0).epsilon(1e-9));
    }
    SUBCASE("pdfs sum to one and shifting by 24h changes nothing") {
        Rng rng(3);
        std::vector<std::int64_t> timestamps;
        for (int i = 0; i < 300; ++i) {
            timestamps.push_back(monday + static_cast<std::int64_t>(rng.uniform_below(30 * 86400)));
        }
        const Corpus corpus = corpus_at({{"p", timestamps}});
        const auto pdf = hour_of_day_pdf(corpus, {"p"}, {});
        double sum = 0.0;
        for (double p : pdf) sum += p;
        CHECK(std::fabs(sum - 1.0) <= 1e-9);

        std::vector<std::int64_t> shifted;
        for (std::int64_t t : timestamps) shifted.push_back(t + 86400);
        const Corpus corpus2 = corpus_at({{"p", shifted}});
        const auto pdf2 = hour_of_day_pdf(corpus2, {"p"}, {});
        for (int h = 0; h < 24; ++h) CHECK(pdf[h] == pdf2[h]);
    }
    SUBCASE("empty group is an error") {
        const Corpus corpus = corpus_at({{"p", {monday}}});
        CHECK_THROWS_AS(hour_of_day_pdf(corpus, {"other"}, {}), std::invalid_argument);
    }
}

TEST_CASE("monthly median series") {
    const std::int64_t jan = *parse_iso8601_utc("2020-01-10T00:00:00Z");
    const std::int64_t mar = *parse_iso8601_utc("2020-03-05T00:00:00Z");

    Corpus corpus = corpus_at({{"p", {jan, jan + 60, mar}}});
    ScoreMap scores;
    auto set_score = [&](const std::string& id, double v) {
        ScoreVector vec;
        vec[Dimension::toxicity] = v;
        scores[id] = vec;
    };
    const auto& records = corpus.profiles.at("p");
    set_score(records[0].tweet_id, 0.2);
    set_score(records[1].tweet_id, 0.4);
    set_score(records[2].tweet_id, 0.6);

    const auto series = monthly_median_series(corpus, scores, Dimension::toxicity);
    REQUIRE(series.size() == 2);  // february absent
    CHECK(to_string(series[0].first) == "2020-01");
    CHECK(series[0].second == doctest::Approx(0.3));
    CHECK(to_string(series[1].first) == "2020-03");
    CHECK(series[1].second == doctest::Approx(0.6));
}

TEST_CASE("ols on an exact line") {
    std::vector<double> x, y;
    for (int i = 0; i < 10; ++i) {
        x.push_back(i);
        y.push_back(2.0 * i + 1.0);
    }
    const TrendFit fit = ols_trend(x, y);
    CHECK(std::fabs(fit.slope - 2.0) <= 1e-12);
    CHECK(std::fabs(fit.intercept - 1.0) <= 1e-12);
    CHECK(fit.r_squared == 1.0);
    CHECK(fit.p_value < 1e-15);
}

TEST_CASE("ols degenerate cases") {
    std::vector<double> x{0, 1, 2, 3};
    const TrendFit flat = ols_trend(x, std::vector<double>{5, 5, 5, 5});
    CHECK(flat.slope == 0.0);
    CHECK(flat.r_squared == 0.0);
    CHECK(flat.p_value == 1.0);

    CHECK_THROWS_AS(ols_trend(std::vector<double>{0, 1}, std::vector<double>{1, 2}),
                    std::invalid_argument);
    CHECK_THROWS_AS(ols_trend(std::vector<double>{1, 1, 1}, std::vector<double>{1, 2, 3}),
                    std::invalid_argument);
}

TEST_CASE("ols matches the normal-equation oracle and recovers a noisy slope") {
    Rng rng(2718);
    int within_two_se = 0;
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> x, y;
        for (int i = 0; i < 48; ++i) {
            x.push_back(i);
            // slope 0.1 plus centered uniform noise
            y.push_back(0.1 * i + 0.7 + (rng.uniform01() - 0.5) * 2.0);
        }
        const TrendFit fit = ols_trend(x, y);
        const auto [oracle_slope, oracle_intercept] = ols_oracle(x, y);
        CHECK(fit.slope == doctest::Approx(oracle_slope).epsilon(1e-9));
        CHECK(fit.intercept == doctest::Approx(oracle_intercept).epsilon(1e-9));
        if (std::fabs(fit.slope - 0.1) <= 2.0 * fit.slope_stderr) ++within_two_se;
    }
    // two standard errors cover ~95% of draws; allow sampling slack
    CHECK(within_two_se >= 90);
}

TEST_CASE("ols is translation equivariant") {
    Rng rng(13);
    std::vector<double> x, y;
    for (int i = 0; i < 30; ++i) {
        x.push_back(i);
        y.push_back(0.3 * i + rng.uniform01());
    }
    const TrendFit base = ols_trend(x, y);
    std::vector<double> shifted = y;
    for (double& v : shifted) v += 2.5;
    const TrendFit moved = ols_trend(x, shifted);
    CHECK(moved.slope == doctest::Approx(base.slope).epsilon(1e-9));
    CHECK(moved.intercept == doctest::Approx(base.intercept + 2.5).epsilon(1e-9));
    CHECK(moved.r_squared == doctest::Approx(base.r_squared).epsilon(1e-9));
    CHECK(moved.f_statistic == doctest::Approx(base.f_statistic).epsilon(1e-9));
    CHECK(moved.p_value == doctest::Approx(base.p_value).epsilon(1e-9));
}

TEST_CASE("regularized incomplete beta reference values") {
    CHECK(regularized_incomplete_beta(1, 1, 0.8) == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(regularized_incomplete_beta(2, 2, 0.8) == doctest::Approx(0.896).epsilon(1e-12));
    CHECK(regularized_incomplete_beta(3, 2, 0.8) == doctest::Approx(0.8192).epsilon(1e-12));
    CHECK(regularized_incomplete_beta(2, 3, 0.8) == doctest::Approx(0.9728).epsilon(1e-12));
    CHECK(regularized_incomplete_beta(2, 2, 0.4) == doctest::Approx(0.352).epsilon(1e-12));
    CHECK(regularized_incomplete_beta(3, 2, 0.001) ==
          doctest::Approx(3.997e-9).epsilon(1e-4));
    CHECK(regularized_incomplete_beta(0.9, 0.9, 0.1) ==
          doctest::Approx(0.11464699677582).epsilon(1e-10));
    CHECK(regularized_incomplete_beta(5, 3, 0.0) == 0.0);
    CHECK(regularized_incomplete_beta(5, 3, 1.0) == 1.0);
}

TEST_CASE("incomplete beta symmetry identity on a random grid") {
    Rng rng(424242);
    for (int i = 0; i < 100; ++i) {
        const double a = 0.5 + 10.0 * rng.uniform01();
        const double b = 0.5 + 10.0 * rng.uniform01();
        const double x = rng.uniform01();
        const double lhs = regularized_incomplete_beta(a, b, x) +
                           regularized_incomplete_beta(b, a, 1.0 - x);
        CHECK(std::fabs(lhs - 1.0) <= 1e-10);
    }
}

TEST_CASE("f distribution upper tail") {
    // from a published F-table: Q(1.25 | 25, 15) = 0.332373
    CHECK(f_distribution_upper_tail(1.25, 25, 15) ==
          doctest::Approx(0.332373).epsilon(1e-5));
    CHECK(f_distribution_upper_tail(0.0, 1, 10) == 1.0);
    CHECK(f_distribution_upper_tail(1e9, 1, 10) < 1e-12);
}

TEST_CASE("intervals are invariant to ingestion order") {
    Rng rng(808);
    std::vector<std::string> lines;
    for (int i = 0; i < 40; ++i) {
        char ts[40];
        std::snprintf(ts, sizeof(ts), "2020-02-%02dT%02d:%02d:00Z",
                      1 + static_cast<int>(rng.uniform_index(28)),
                      static_cast<int>(rng.uniform_index(24)),
                      static_cast<int>(rng.uniform_index(60)));
        lines.push_back("{\"tweet_id\":\"t" + std::to_string(i) +
                        "\",\"profile_id\":\"p" + std::to_string(i % 2) +
                        "\",\"created_at\":\"" + ts +
                        "\",\"text\":\"x\",\"lang\":\"en\",\"is_retweet\":false}");
    }
    auto pooled_of = [](const std::vector<std::string>& input) {
        std::string joined;
        for (const auto& l : input) joined += l + "\n";
        std::istringstream in(joined);
        auto [corpus, log] = parse_timeline_stream(in, true);
        return pooled_intervals(corpus, {"p0", "p1"}, {});
    };
    const auto base = pooled_of(lines);
    for (int shuffle = 0; shuffle < 3; ++shuffle) {
        for (std::size_t i = lines.size(); i > 1; --i) {
            std::swap(lines[i - 1], lines[rng.uniform_index(i)]);
        }
        CHECK(pooled_of(lines) == base);
    }
}

TEST_CASE("pooled intervals concatenate per-profile series in id order") {
    const std::int64_t t0 = 1578268800;
    const Corpus corpus = corpus_at({
        {"a", {t0, t0 + 60}},
        {"b", {t0, t0 + 120, t0 + 180}},
    });
    const auto pooled = pooled_intervals(corpus, {"a", "b"}, {});
    CHECK(pooled == std::vector<double>{1.0, 2.0, 1.0});
    // profile boundaries contribute no interval
    CHECK(pooled.size() == 3);
}
