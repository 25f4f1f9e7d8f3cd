#pragma once

#include <string>
#include <vector>

#include "rmove/config.hpp"
#include "rmove/path_context.hpp"
#include "rmove/rng.hpp"

namespace rmove::testing {

inline PathContext ctx(std::string start, std::vector<PathStep> steps, std::string end) {
    return {std::move(start), std::move(steps), std::move(end)};
}

inline PathSet pathset(const std::string& cls, const std::string& name, std::vector<PathContext> contexts) {
    return {make_method_id("toy", cls, name + "()"), std::move(contexts), false};
}

/// Each name owns one node-type order (a permutation of three shared node types)
/// that appears in every one of its methods; the remaining contexts are noise of
/// other lengths over different node types, so the path alone decides the name.
inline std::vector<PathSet> planted_corpus(std::uint64_t seed, std::size_t per_name = 20) {
    const std::vector<std::string> names = {"getX", "setY", "computeTotal", "readLine", "parseValue"};
    const std::vector<std::vector<std::string>> orders = {
        {"A", "B", "C"}, {"A", "C", "B"}, {"B", "A", "C"}, {"B", "C", "A"}, {"C", "A", "B"}};
    const std::vector<std::string> pool = {"a", "b", "count", "value", "item", "list", "size", "flag", "index", "total"};
    const std::vector<std::string> nodes = {"D", "E", "F", "G"}; // disjoint from the signal nodes
    Rng rng(seed);
    std::vector<PathSet> out;
    for (std::size_t k = 0; k < names.size(); ++k) {
        for (std::size_t i = 0; i < per_name; ++i) {
            std::vector<PathContext> cs;
            const auto& o = orders[k];
            cs.push_back(ctx(pool[rng.below(pool.size())], {{o[0], true}, {o[1], true}, {o[2], false}},
                             pool[rng.below(pool.size())]));
            for (int j = 0; j < 4; ++j) {
                const std::size_t len = rng.below(2) ? 4 : 1 + rng.below(2);
                std::vector<PathStep> steps;
                for (std::size_t s = 0; s < len; ++s) steps.push_back({nodes[rng.below(nodes.size())], s + 1 < len});
                cs.insert(cs.begin() + static_cast<std::ptrdiff_t>(rng.below(cs.size() + 1)),
                          ctx(pool[rng.below(pool.size())], steps, pool[rng.below(pool.size())]));
            }
            out.push_back(pathset("p.C" + std::to_string(k) + "_" + std::to_string(i), names[k], std::move(cs)));
        }
    }
    return out;
}

inline Config small_code_config() {
    Config c;
    c.token_embed_dim = 32;
    c.path_embed_dim = 32;
    c.code_dim = 32;
    c.code2vec_epochs = 20;
    c.code2seq_epochs = 20;
    c.code_batch_size = 16;
    return c;
}

} // namespace rmove::testing
