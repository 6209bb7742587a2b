#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "toxprof/civil_time.hpp"
#include "toxprof/compare.hpp"
#include "toxprof/corpus.hpp"
#include "toxprof/scorer.hpp"

namespace toxprof {

/// Successive differences of sorted timestamps, in minutes. Fewer than two
/// timestamps yield an empty list.
std::vector<double> inter_tweet_intervals(std::span<const std::int64_t> sorted_timestamps);

/// All inter-tweet intervals of a profile group, per-profile series
/// concatenated in profile id order.
std::vector<double> pooled_intervals(const Corpus& corpus, const std::set<std::string>& group,
                                     const TweetFilter& filter);

struct IntervalPdf {
    EmpiricalDistribution pdf;       // over intervals <= max_minutes only
    double fraction_within_max = 0;  // share of all intervals <= max_minutes
    std::size_t n_within = 0;
    std::size_t n_total = 0;
};

/// PDF of intervals up to max_minutes in bin_width-minute bins, plus the
/// share of the full series that falls within the window.
IntervalPdf interval_pdf(std::span<const double> intervals, double bin_width = 1.0,
                         double max_minutes = 60.0);

/// Empirical CDF of an interval series with exact order-statistic quantiles.
class IntervalCdf {
public:
    explicit IntervalCdf(std::span<const double> intervals);

    /// Smallest series value whose empirical CDF reaches q.
    double quantile(double q) const;
    double max_value() const { return sorted_.back(); }

    /// Binned CDF over [0, hi] at `bins` points (defaults to this series' max).
    EmpiricalDistribution binned(std::size_t bins = 101, double hi = -1.0) const;

    const std::vector<double>& sorted_values() const { return sorted_; }

private:
    std::vector<double> sorted_;
};

/// Normalized tweet counts by UTC hour of day.
std::array<double, 24> hour_of_day_pdf(const Corpus& corpus,
                                       const std::set<std::string>& group,
                                       const TweetFilter& filter);

/// Normalized tweet counts by ISO weekday (Monday = 0).
std::array<double, 7> day_of_week_pdf(const Corpus& corpus,
                                      const std::set<std::string>& group,
                                      const TweetFilter& filter);

/// Median score per calendar month, chronological; months without tweets are
/// omitted.
std::vector<std::pair<YearMonth, double>> monthly_median_series(const Corpus& corpus,
                                                                const ScoreMap& scores,
                                                                Dimension dimension);

struct TrendFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    double f_statistic = 0.0;
    double p_value = 1.0;
    double slope_stderr = 0.0;
    std::size_t n = 0;
    std::string x_encoding;
};

/// Simple OLS with an F-test on the slope. Requires n >= 3 and non-constant
/// x. Constant y yields slope 0, R^2 = 0, p = 1; a numerically perfect fit
/// yields R^2 = 1 and p = 0 (reported below 1e-15).
TrendFit ols_trend(std::span<const double> x, std::span<const double> y);

/// OLS over (month index 0..M-1, median) of a monthly series.
TrendFit ols_trend_monthly(const std::vector<std::pair<YearMonth, double>>& series);

/// Regularized incomplete beta I_x(a, b) via Lentz's continued fraction,
/// tolerance 1e-12.
double regularized_incomplete_beta(double a, double b, double x);

/// Upper tail of the F(d1, d2) distribution at f.
double f_distribution_upper_tail(double f, double d1, double d2);

}  // namespace toxprof
