#pragma once

#include <array>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace toxprof {

/// Discrete distribution over uniform bins spanning [lo, hi].
struct EmpiricalDistribution {
    double lo = 0.0;
    double hi = 1.0;
    std::vector<double> probabilities;

    std::size_t bins() const { return probabilities.size(); }
    double bin_width() const { return (hi - lo) / static_cast<double>(probabilities.size()); }
    double bin_start(std::size_t i) const { return lo + bin_width() * static_cast<double>(i); }
};

/// Values are clamped into [lo, hi] and counted into uniform bins; a value at
/// hi lands in the last bin. Probabilities sum to 1.
EmpiricalDistribution histogram(std::span<const double> values, double lo, double hi,
                                std::size_t bins);

/// Intersection over union; both sets empty yields 0.
double jaccard(const std::set<std::string>& a, const std::set<std::string>& b);

/// D(p||q) in nats after additive-epsilon smoothing and renormalization of
/// both sides. Requires identical bin edges.
double kl_divergence(const EmpiricalDistribution& p, const EmpiricalDistribution& q,
                     double epsilon = 1e-10);

/// CDF sampled at 101 grid points 0.00, 0.01, ..., 1.00.
std::vector<double> cdf_grid_unit(std::span<const double> values);

/// CDF of arbitrary-range values at 101 evenly spaced points over [lo, hi].
std::vector<double> cdf_grid(std::span<const double> values, double lo, double hi);

enum class PairKind { focus_focus, random_random, focus_random };
std::string_view to_string(PairKind kind);

struct SimilarityProfile {
    PairKind kind = PairKind::focus_focus;
    std::vector<double> values;
    std::vector<double> cdf;  // 101 points on [0,1]
    bool degenerate = false;  // underlying group had fewer than 2 members
};

/// Pairwise Jaccard over all unordered within-A, within-B, and cross A x B
/// pairs of per-profile item sets.
std::array<SimilarityProfile, 3> pairwise_similarity(
    const std::vector<std::set<std::string>>& a_sets,
    const std::vector<std::set<std::string>>& b_sets);

/// Entry (i, j) = KL(hist(group_i) || hist(group_j)) over shared bins.
std::vector<std::vector<double>> kl_matrix(const std::vector<std::vector<double>>& groups,
                                           double lo, double hi, std::size_t bins);

}  // namespace toxprof
