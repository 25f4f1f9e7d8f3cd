#pragma once

#include <cstddef>
#include <vector>

#include "rmove/depgraph.hpp"
#include "rmove/error.hpp"
#include "rmove/parallel.hpp"
#include "rmove/rng.hpp"

namespace rmove::graph {

struct WalkCorpus {
    std::vector<std::vector<std::size_t>> walks;
    std::size_t walk_length = 0;
    std::size_t walks_per_node = 0;
};

/// One second-order step from `cur` having arrived from `prev`.
/// Unnormalized weights: 1/p back to prev, 1 to prev's neighbors, 1/q elsewhere.
inline std::size_t biased_step(const Adjacency& g, std::size_t prev, std::size_t cur, double p, double q, Rng& rng,
                               std::vector<double>& weights) {
    const std::size_t deg = g.degree(cur);
    const std::size_t* nb = g.begin(cur);
    if (p == 1.0 && q == 1.0) return nb[rng.below(deg)];
    weights.resize(deg);
    double total = 0.0;
    for (std::size_t i = 0; i < deg; ++i) {
        const std::size_t x = nb[i];
        const double w = x == prev ? 1.0 / p : (g.has_edge(prev, x) ? 1.0 : 1.0 / q);
        weights[i] = w;
        total += w;
    }
    double r = rng.uniform() * total;
    for (std::size_t i = 0; i < deg; ++i) {
        r -= weights[i];
        if (r < 0.0) return nb[i];
    }
    return nb[deg - 1];
}

/// Walk `w` uses its own stream rng.split(w), so the corpus is identical for any thread count.
/// Round r visits nodes in an order shuffled by rng.split("order").split(r).
inline WalkCorpus sample_walks(const Adjacency& g, std::size_t length, std::size_t per_node, double p, double q,
                               const Rng& rng, std::size_t threads = 0) {
    if (length < 1 || per_node < 1) fail(ErrorKind::InvalidConfig, "walk length and walks per node must be >= 1");
    if (!(p > 0.0) || !(q > 0.0)) fail(ErrorKind::InvalidConfig, "node2vec p and q must be > 0");
    const std::size_t n = g.size();
    WalkCorpus corpus;
    corpus.walk_length = length;
    corpus.walks_per_node = per_node;
    std::vector<std::size_t> starts;
    starts.reserve(n * per_node);
    const Rng order_rng = rng.split("order");
    for (std::size_t r = 0; r < per_node; ++r) {
        std::vector<std::size_t> order(n);
        for (std::size_t v = 0; v < n; ++v) order[v] = v;
        Rng shuffler = order_rng.split(r);
        shuffler.shuffle(order);
        starts.insert(starts.end(), order.begin(), order.end());
    }
    corpus.walks.resize(starts.size());
    parallel_for(starts.size(), threads, [&](std::size_t w) {
        Rng wr = rng.split(static_cast<std::uint64_t>(w));
        std::vector<double> weights;
        auto& walk = corpus.walks[w];
        walk.reserve(length);
        walk.push_back(starts[w]);
        while (walk.size() < length) {
            const std::size_t cur = walk.back();
            if (g.degree(cur) == 0) break;
            if (walk.size() == 1) walk.push_back(g.begin(cur)[wr.below(g.degree(cur))]);
            else walk.push_back(biased_step(g, walk[walk.size() - 2], cur, p, q, wr, weights));
        }
    });
    return corpus;
}

/// Every k-th node, one sequence per offset: [a,b,c,d,e], k=2 -> [a,c,e], [b,d].
inline std::vector<std::vector<std::size_t>> skip_walks(const std::vector<std::vector<std::size_t>>& walks,
                                                        std::size_t k) {
    std::vector<std::vector<std::size_t>> out;
    for (const auto& w : walks) {
        for (std::size_t off = 0; off < k && off < w.size(); ++off) {
            std::vector<std::size_t> s;
            for (std::size_t i = off; i < w.size(); i += k) s.push_back(w[i]);
            out.push_back(std::move(s));
        }
    }
    return out;
}

} // namespace rmove::graph
