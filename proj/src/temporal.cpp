#include "toxprof/temporal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "toxprof/consistency.hpp"

namespace toxprof {

std::vector<double> inter_tweet_intervals(std::span<const std::int64_t> timestamps) {
    std::vector<double> gaps;
    if (timestamps.size() < 2) return gaps;
    gaps.reserve(timestamps.size() - 1);
    for (std::size_t i = 1; i < timestamps.size(); ++i) {
        gaps.push_back(static_cast<double>(timestamps[i] - timestamps[i - 1]) / 60.0);
    }
    return gaps;
}

std::vector<double> pooled_intervals(const Corpus& corpus, const std::set<std::string>& group,
                                     const TweetFilter& filter) {
    std::vector<double> pooled;
    for (const std::string& profile_id : group) {
        auto it = corpus.profiles.find(profile_id);
        if (it == corpus.profiles.end()) continue;
        std::vector<std::int64_t> timestamps;
        timestamps.reserve(it->second.size());
        for (const TweetRecord& r : it->second) {
            if (filter.matches(r)) timestamps.push_back(r.created_at);
        }
        auto gaps = inter_tweet_intervals(timestamps);
        pooled.insert(pooled.end(), gaps.begin(), gaps.end());
    }
    return pooled;
}

IntervalPdf interval_pdf(std::span<const double> intervals, double bin_width,
                         double max_minutes) {
    if (intervals.empty()) throw std::invalid_argument("interval_pdf of empty series");
    std::vector<double> within;
    for (double v : intervals) {
        if (v <= max_minutes) within.push_back(v);
    }
    IntervalPdf out;
    out.n_total = intervals.size();
    out.n_within = within.size();
    out.fraction_within_max =
        static_cast<double>(within.size()) / static_cast<double>(intervals.size());
    const auto bins = static_cast<std::size_t>(std::llround(max_minutes / bin_width));
    if (!within.empty()) {
        out.pdf = histogram(within, 0.0, max_minutes, bins);
    } else {
        out.pdf.lo = 0.0;
        out.pdf.hi = max_minutes;
        out.pdf.probabilities.assign(bins, 0.0);
    }
    return out;
}

IntervalCdf::IntervalCdf(std::span<const double> intervals)
    : sorted_(intervals.begin(), intervals.end()) {
    if (sorted_.empty()) throw std::invalid_argument("IntervalCdf of empty series");
    std::sort(sorted_.begin(), sorted_.end());
}

double IntervalCdf::quantile(double q) const {
    if (q < 0.0 || q > 1.0) throw std::invalid_argument("quantile requires q in [0,1]");
    const double n = static_cast<double>(sorted_.size());
    std::size_t idx = 0;
    if (q > 0.0) {
        idx = static_cast<std::size_t>(std::ceil(q * n)) - 1;
        if (idx >= sorted_.size()) idx = sorted_.size() - 1;
    }
    return sorted_[idx];
}

EmpiricalDistribution IntervalCdf::binned(std::size_t bins, double hi) const {
    if (hi <= 0.0) hi = std::max(sorted_.back(), 1e-9);
    EmpiricalDistribution dist;
    dist.lo = 0.0;
    dist.hi = hi;
    dist.probabilities.assign(bins, 0.0);
    const double n = static_cast<double>(sorted_.size());
    for (std::size_t i = 0; i < bins; ++i) {
        const double edge = hi * static_cast<double>(i + 1) / static_cast<double>(bins);
        const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), edge);
        dist.probabilities[i] = static_cast<double>(it - sorted_.begin()) / n;
    }
    // convert cumulative to per-bin mass
    for (std::size_t i = bins; i-- > 1;) {
        dist.probabilities[i] -= dist.probabilities[i - 1];
    }
    return dist;
}

namespace {

template <std::size_t N>
std::array<double, N> normalized_counts(const Corpus& corpus,
                                        const std::set<std::string>& group,
                                        const TweetFilter& filter,
                                        unsigned (*bucket)(std::int64_t)) {
    std::array<double, N> counts{};
    double total = 0.0;
    for (const std::string& profile_id : group) {
        auto it = corpus.profiles.find(profile_id);
        if (it == corpus.profiles.end()) continue;
        for (const TweetRecord& r : it->second) {
            if (!filter.matches(r)) continue;
            counts[bucket(r.created_at)] += 1.0;
            total += 1.0;
        }
    }
    if (total == 0.0) throw std::invalid_argument("group has no matching tweets");
    for (double& c : counts) c /= total;
    return counts;
}

}  // namespace

std::array<double, 24> hour_of_day_pdf(const Corpus& corpus,
                                       const std::set<std::string>& group,
                                       const TweetFilter& filter) {
    return normalized_counts<24>(corpus, group, filter,
                                 [](std::int64_t t) { return hour_of_day(t); });
}

std::array<double, 7> day_of_week_pdf(const Corpus& corpus,
                                      const std::set<std::string>& group,
                                      const TweetFilter& filter) {
    return normalized_counts<7>(
        corpus, group, filter,
        [](std::int64_t t) { return static_cast<unsigned>(weekday_monday0(t)); });
}

std::vector<std::pair<YearMonth, double>> monthly_median_series(const Corpus& corpus,
                                                                const ScoreMap& scores,
                                                                Dimension dimension) {
    std::map<YearMonth, std::vector<double>> by_month;
    for (const auto& [profile_id, records] : corpus.profiles) {
        for (const TweetRecord& r : records) {
            auto it = scores.find(r.tweet_id);
            if (it == scores.end()) continue;
            by_month[year_month_of(r.created_at)].push_back(it->second[dimension]);
        }
    }
    std::vector<std::pair<YearMonth, double>> series;
    series.reserve(by_month.size());
    for (const auto& [ym, values] : by_month) {
        series.emplace_back(ym, median(values));
    }
    return series;
}

double regularized_incomplete_beta(double a, double b, double x) {
    if (a <= 0.0 || b <= 0.0) throw std::invalid_argument("incomplete beta requires a, b > 0");
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;

    // continued fraction converges fastest for x < (a+1)/(a+b+2); otherwise
    // use the symmetry I_x(a,b) = 1 - I_{1-x}(b,a)
    if (x > (a + 1.0) / (a + b + 2.0)) {
        return 1.0 - regularized_incomplete_beta(b, a, 1.0 - x);
    }

    const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                             a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(log_front) / a;

    // modified Lentz's algorithm
    constexpr double kTiny = 1e-30;
    constexpr double kTolerance = 1e-12;
    constexpr int kMaxIterations = 500;

    double c = 1.0;
    double d = 1.0 - (a + b) * x / (a + 1.0);
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;

    for (int m = 1; m <= kMaxIterations; ++m) {
        const double dm = static_cast<double>(m);
        const double m2 = 2.0 * dm;

        double numerator = dm * (b - dm) * x / ((a + m2 - 1.0) * (a + m2));
        d = 1.0 + numerator * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + numerator / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;

        numerator = -(a + dm) * (a + b + dm) * x / ((a + m2) * (a + m2 + 1.0));
        d = 1.0 + numerator * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + numerator / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;

        if (std::fabs(delta - 1.0) < kTolerance) break;
    }
    return front * h;
}

double f_distribution_upper_tail(double f, double d1, double d2) {
    if (f <= 0.0) return 1.0;
    return regularized_incomplete_beta(d2 / 2.0, d1 / 2.0, d2 / (d2 + d1 * f));
}

TrendFit ols_trend(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    if (n != y.size()) throw std::invalid_argument("ols_trend: size mismatch");
    if (n < 3) throw std::invalid_argument("ols_trend requires n >= 3");

    const double dn = static_cast<double>(n);
    double sum_x = 0, sum_y = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sum_x += x[i];
        sum_y += y[i];
    }
    const double mean_x = sum_x / dn;
    const double mean_y = sum_y / dn;

    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mean_x;
        const double dy = y[i] - mean_y;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx <= 0.0) throw std::invalid_argument("ols_trend: x values are all equal");

    TrendFit fit;
    fit.n = n;
    fit.x_encoding = "as_given";

    if (syy <= 0.0) {
        // constant y: flat fit, no explained variance
        fit.slope = 0.0;
        fit.intercept = mean_y;
        fit.r_squared = 0.0;
        fit.f_statistic = 0.0;
        fit.p_value = 1.0;
        fit.slope_stderr = 0.0;
        return fit;
    }

    fit.slope = sxy / sxx;
    fit.intercept = mean_y - fit.slope * mean_x;

    double sse = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double resid = y[i] - (fit.intercept + fit.slope * x[i]);
        sse += resid * resid;
    }
    fit.r_squared = 1.0 - sse / syy;
    if (fit.r_squared < 0.0) fit.r_squared = 0.0;
    if (fit.r_squared > 1.0) fit.r_squared = 1.0;

    const double df = dn - 2.0;
    fit.slope_stderr = std::sqrt(sse / df / sxx);
    if (1.0 - fit.r_squared <= 1e-15) {
        fit.r_squared = 1.0;
        fit.f_statistic = std::numeric_limits<double>::infinity();
        fit.p_value = 0.0;  // reported as < 1e-15
    } else {
        fit.f_statistic = fit.r_squared / (1.0 - fit.r_squared) * df;
        fit.p_value = f_distribution_upper_tail(fit.f_statistic, 1.0, df);
    }
    return fit;
}

TrendFit ols_trend_monthly(const std::vector<std::pair<YearMonth, double>>& series) {
    std::vector<double> x, y;
    x.reserve(series.size());
    y.reserve(series.size());
    for (std::size_t i = 0; i < series.size(); ++i) {
        x.push_back(static_cast<double>(i));
        y.push_back(series[i].second);
    }
    TrendFit fit = ols_trend(x, y);
    fit.x_encoding = "month_index_0based";
    return fit;
}

}  // namespace toxprof
