#include "toxprof/compare.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace toxprof {

EmpiricalDistribution histogram(std::span<const double> values, double lo, double hi,
                                std::size_t bins) {
    if (bins < 1) throw std::invalid_argument("histogram requires bins >= 1");
    if (!(lo < hi)) throw std::invalid_argument("histogram requires lo < hi");
    if (values.empty()) throw std::invalid_argument("histogram of empty input");

    EmpiricalDistribution dist;
    dist.lo = lo;
    dist.hi = hi;
    dist.probabilities.assign(bins, 0.0);
    const double width = (hi - lo) / static_cast<double>(bins);
    for (double v : values) {
        const double clamped = std::clamp(v, lo, hi);
        auto idx = static_cast<std::size_t>((clamped - lo) / width);
        if (idx >= bins) idx = bins - 1;
        dist.probabilities[idx] += 1.0;
    }
    const double n = static_cast<double>(values.size());
    for (double& p : dist.probabilities) p /= n;
    return dist;
}

double jaccard(const std::set<std::string>& a, const std::set<std::string>& b) {
    if (a.empty() && b.empty()) return 0.0;
    std::size_t intersection = 0;
    const auto& small = a.size() <= b.size() ? a : b;
    const auto& large = a.size() <= b.size() ? b : a;
    for (const std::string& item : small) {
        if (large.contains(item)) ++intersection;
    }
    const std::size_t unions = a.size() + b.size() - intersection;
    return static_cast<double>(intersection) / static_cast<double>(unions);
}

double kl_divergence(const EmpiricalDistribution& p, const EmpiricalDistribution& q,
                     double epsilon) {
    if (p.bins() != q.bins() || p.lo != q.lo || p.hi != q.hi) {
        throw std::invalid_argument("kl_divergence requires identical bin edges");
    }
    const std::size_t n = p.bins();
    double p_total = 0.0, q_total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        p_total += p.probabilities[i] + epsilon;
        q_total += q.probabilities[i] + epsilon;
    }
    double divergence = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double pp = (p.probabilities[i] + epsilon) / p_total;
        const double qq = (q.probabilities[i] + epsilon) / q_total;
        divergence += pp * std::log(pp / qq);
    }
    return divergence;
}

std::vector<double> cdf_grid(std::span<const double> values, double lo, double hi) {
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> cdf(101, 0.0);
    const double n = static_cast<double>(sorted.size());
    for (std::size_t i = 0; i <= 100; ++i) {
        const double x = lo + (hi - lo) * static_cast<double>(i) / 100.0;
        const auto it = std::upper_bound(sorted.begin(), sorted.end(), x);
        cdf[i] = sorted.empty() ? 0.0
                                : static_cast<double>(it - sorted.begin()) / n;
    }
    return cdf;
}

std::vector<double> cdf_grid_unit(std::span<const double> values) {
    return cdf_grid(values, 0.0, 1.0);
}

std::string_view to_string(PairKind kind) {
    switch (kind) {
        case PairKind::focus_focus: return "focus_focus";
        case PairKind::random_random: return "random_random";
        case PairKind::focus_random: return "focus_random";
    }
    return "unknown";
}

std::array<SimilarityProfile, 3> pairwise_similarity(
    const std::vector<std::set<std::string>>& a_sets,
    const std::vector<std::set<std::string>>& b_sets) {
    std::array<SimilarityProfile, 3> out;
    out[0].kind = PairKind::focus_focus;
    out[1].kind = PairKind::random_random;
    out[2].kind = PairKind::focus_random;

    auto within = [](const std::vector<std::set<std::string>>& sets, SimilarityProfile& prof) {
        if (sets.size() < 2) {
            prof.degenerate = true;
        } else {
            prof.values.reserve(sets.size() * (sets.size() - 1) / 2);
            for (std::size_t i = 0; i < sets.size(); ++i) {
                for (std::size_t j = i + 1; j < sets.size(); ++j) {
                    prof.values.push_back(jaccard(sets[i], sets[j]));
                }
            }
        }
        prof.cdf = cdf_grid_unit(prof.values);
    };
    within(a_sets, out[0]);
    within(b_sets, out[1]);

    SimilarityProfile& cross = out[2];
    cross.values.reserve(a_sets.size() * b_sets.size());
    for (const auto& a : a_sets) {
        for (const auto& b : b_sets) {
            cross.values.push_back(jaccard(a, b));
        }
    }
    cross.degenerate = cross.values.empty();
    cross.cdf = cdf_grid_unit(cross.values);
    return out;
}

std::vector<std::vector<double>> kl_matrix(const std::vector<std::vector<double>>& groups,
                                           double lo, double hi, std::size_t bins) {
    if (groups.size() < 2) throw std::invalid_argument("kl_matrix requires >= 2 groups");
    std::vector<EmpiricalDistribution> hists;
    hists.reserve(groups.size());
    for (const auto& g : groups) {
        if (g.empty()) throw std::invalid_argument("kl_matrix: empty group");
        hists.push_back(histogram(g, lo, hi, bins));
    }
    std::vector<std::vector<double>> matrix(groups.size(),
                                            std::vector<double>(groups.size(), 0.0));
    for (std::size_t i = 0; i < groups.size(); ++i) {
        for (std::size_t j = 0; j < groups.size(); ++j) {
            matrix[i][j] = kl_divergence(hists[i], hists[j]);
        }
    }
    return matrix;
}

}  // namespace toxprof
