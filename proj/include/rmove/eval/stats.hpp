#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "rmove/error.hpp"

namespace rmove {

struct KruskalWallis {
    double h = 0.0;
    double p = 1.0;
    std::size_t df = 0;
    bool all_identical = false; // H undefined; p reported as 1
};

/// Midranks of the pooled sample; ties share the mean of their positions.
inline std::vector<double> midranks(const std::vector<double>& x, double* tie_term = nullptr) {
    std::vector<std::size_t> order(x.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
    std::vector<double> rank(x.size());
    double ties = 0;
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j + 1 < order.size() && x[order[j + 1]] == x[order[i]]) ++j;
        const double r = (static_cast<double>(i) + static_cast<double>(j)) / 2 + 1;
        for (std::size_t k = i; k <= j; ++k) rank[order[k]] = r;
        const double t = static_cast<double>(j - i + 1);
        ties += t * t * t - t;
        i = j + 1;
    }
    if (tie_term) *tie_term = ties;
    return rank;
}

/// H with tie correction; p from the chi-squared law with groups - 1 dof.
inline KruskalWallis kruskal_wallis(const std::vector<std::vector<double>>& groups) {
    if (groups.size() < 2) fail(ErrorKind::EmptyInput, "Kruskal-Wallis needs at least two groups");
    std::vector<double> pooled;
    for (const auto& g : groups) {
        if (g.empty()) fail(ErrorKind::EmptyInput, "Kruskal-Wallis group without observations");
        pooled.insert(pooled.end(), g.begin(), g.end());
    }
    KruskalWallis r;
    r.df = groups.size() - 1;
    double ties = 0;
    const auto rank = midranks(pooled, &ties);
    const double n = static_cast<double>(pooled.size());
    const double correction = 1 - ties / (n * n * n - n);
    if (correction <= 0) {
        r.all_identical = true;
        return r;
    }
    double s = 0;
    std::size_t at = 0;
    for (const auto& g : groups) {
        double sum = 0;
        for (std::size_t i = 0; i < g.size(); ++i) sum += rank[at++];
        s += sum * sum / static_cast<double>(g.size());
    }
    r.h = (12 / (n * (n + 1)) * s - 3 * (n + 1)) / correction;
    r.h = std::max(0.0, r.h);
    boost::math::chi_squared dist(static_cast<double>(r.df));
    r.p = boost::math::cdf(boost::math::complement(dist, r.h));
    return r;
}

struct PairwiseTest {
    std::size_t a = 0, b = 0;
    KruskalWallis test;
    double p_adjusted = 1.0; // Bonferroni, capped at 1
};

/// Every pair of groups tested on its own, p multiplied by the pair count.
inline std::vector<PairwiseTest> pairwise_kruskal_wallis(const std::vector<std::vector<double>>& groups) {
    std::vector<PairwiseTest> out;
    const std::size_t pairs = groups.size() * (groups.size() - 1) / 2;
    for (std::size_t a = 0; a < groups.size(); ++a)
        for (std::size_t b = a + 1; b < groups.size(); ++b) {
            PairwiseTest t{a, b, kruskal_wallis({groups[a], groups[b]})};
            t.p_adjusted = std::min(1.0, t.test.p * static_cast<double>(pairs));
            out.push_back(t);
        }
    return out;
}

} // namespace rmove
