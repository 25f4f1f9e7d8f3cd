#pragma once

// All-pairs path oracle: root-to-leaf ancestor chains, LCA as the last shared
// chain element. Deliberately shares no code with the miner.

#include <map>
#include <string>
#include <vector>

#include "rmove/ast.hpp"
#include "rmove/path_context.hpp"

namespace rmove::testing {

inline void chains(const AstNode& n, std::vector<const AstNode*>& stack,
                   std::vector<std::vector<const AstNode*>>& out) {
    stack.push_back(&n);
    if (n.children.empty()) out.push_back(stack);
    for (const auto& c : n.children) chains(c, stack, out);
    stack.pop_back();
}

inline std::vector<PathContext> oracle_paths(const AstNode& method, std::size_t max_length, std::size_t max_width) {
    std::vector<const AstNode*> stack;
    std::vector<std::vector<const AstNode*>> leaf_chains;
    chains(method, stack, leaf_chains);
    std::vector<PathContext> out;
    for (std::size_t i = 0; i < leaf_chains.size(); ++i) {
        for (std::size_t j = i + 1; j < leaf_chains.size(); ++j) {
            if (j - i > max_width) continue;
            const auto& a = leaf_chains[i];
            const auto& b = leaf_chains[j];
            std::size_t shared = 0;
            while (shared < a.size() && shared < b.size() && a[shared] == b[shared]) ++shared;
            const std::size_t lca = shared - 1;
            PathContext ctx;
            ctx.start = a.back()->token;
            ctx.end = b.back()->token;
            for (std::size_t k = a.size() - 2; k > lca; --k) ctx.steps.push_back({std::string(to_string(a[k]->type)), true});
            ctx.steps.push_back({std::string(to_string(a[lca]->type)), false});
            for (std::size_t k = lca + 1; k + 1 < b.size(); ++k)
                ctx.steps.push_back({std::string(to_string(b[k]->type)), false});
            if (ctx.steps.size() <= max_length) out.push_back(std::move(ctx));
        }
    }
    return out;
}

} // namespace rmove::testing
