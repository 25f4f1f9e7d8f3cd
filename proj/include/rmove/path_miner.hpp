#pragma once

#include <algorithm>
#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "rmove/ast.hpp"
#include "rmove/config.hpp"
#include "rmove/corpus.hpp"
#include "rmove/path_context.hpp"
#include "rmove/rng.hpp"

namespace rmove {

struct PathLimits {
    std::size_t max_length = 9;  // intermediate nodes on the path
    std::size_t max_width = 25;  // leaf-index gap
    std::size_t max_contexts = 200;

    static PathLimits from(const Config& c) {
        return {static_cast<std::size_t>(c.max_path_length), static_cast<std::size_t>(c.max_path_width),
                static_cast<std::size_t>(c.max_contexts)};
    }
};

namespace detail {

struct FlatNode {
    const AstNode* node;
    std::size_t parent; // npos for the root
    std::size_t depth;
};

inline void flatten(const AstNode& n, std::size_t parent, std::size_t depth, std::vector<FlatNode>& out,
                    std::vector<std::size_t>& leaves) {
    const std::size_t self = out.size();
    out.push_back({&n, parent, depth});
    if (n.is_leaf()) leaves.push_back(self);
    for (const auto& ch : n.children) flatten(ch, self, depth + 1, out, leaves);
}

} // namespace detail

/// Leaf-to-leaf path between flattened nodes `a` and `b` through their lowest
/// common ancestor. Returns false when longer than `max_length`.
inline bool build_path(const std::vector<detail::FlatNode>& flat, std::size_t a, std::size_t b, std::size_t max_length,
                       std::vector<PathStep>& steps) {
    std::vector<std::size_t> up, down;
    std::size_t x = flat[a].parent, y = flat[b].parent;
    while (flat[x].depth > flat[y].depth) {
        up.push_back(x);
        x = flat[x].parent;
    }
    while (flat[y].depth > flat[x].depth) {
        down.push_back(y);
        y = flat[y].parent;
    }
    while (x != y) {
        up.push_back(x);
        down.push_back(y);
        x = flat[x].parent;
        y = flat[y].parent;
    }
    if (up.size() + 1 + down.size() > max_length) return false;
    steps.clear();
    for (auto i : up) steps.push_back({std::string(to_string(flat[i].node->type)), true});
    steps.push_back({std::string(to_string(flat[x].node->type)), false});
    for (auto it = down.rbegin(); it != down.rend(); ++it) steps.push_back({std::string(to_string(flat[*it].node->type)), false});
    return true;
}

/// Mines path contexts of one method AST. Pairs are oriented left leaf first; when
/// more than `max_contexts` survive the filters a uniform subsample is kept in
/// original order.
inline PathSet extract_paths(const MethodId& method, const AstNode& ast, const PathLimits& limits, Rng& rng) {
    if (ast.type != NodeType::MethodDeclaration)
        fail(ErrorKind::NotAMethodAst, "extract_paths on " + std::string(to_string(ast.type)) + " for " + method.str());
    std::vector<detail::FlatNode> flat;
    std::vector<std::size_t> leaves;
    detail::flatten(ast, static_cast<std::size_t>(-1), 0, flat, leaves);

    PathSet out{method, {}, false};
    std::vector<PathStep> steps;
    for (std::size_t i = 0; i < leaves.size(); ++i) {
        for (std::size_t j = i + 1; j < leaves.size() && j - i <= limits.max_width; ++j) {
            if (!build_path(flat, leaves[i], leaves[j], limits.max_length, steps)) continue;
            out.contexts.push_back({flat[leaves[i]].node->token, steps, flat[leaves[j]].node->token});
        }
    }
    if (out.contexts.size() > limits.max_contexts) {
        std::vector<std::size_t> idx(out.contexts.size());
        for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        for (std::size_t i = 0; i < limits.max_contexts; ++i) std::swap(idx[i], idx[i + rng.below(idx.size() - i)]);
        idx.resize(limits.max_contexts);
        std::sort(idx.begin(), idx.end());
        std::vector<PathContext> kept;
        kept.reserve(idx.size());
        for (auto i : idx) kept.push_back(std::move(out.contexts[i]));
        out.contexts = std::move(kept);
        out.truncated = true;
    }
    return out;
}

/// Path sets for every corpus method: mined from ASTs, or taken from ingested facts.
/// Each method draws from its own child stream of `rng`.
inline std::vector<PathSet> mine_corpus(const Corpus& corpus, const PathLimits& limits, const Rng& rng) {
    std::vector<PathSet> out;
    out.reserve(corpus.methods.size());
    for (const auto& [id, entry] : corpus.methods) {
        if (entry.ast) {
            Rng child = rng.split(id.str());
            out.push_back(extract_paths(id, *entry.ast, limits, child));
        } else if (entry.fact_contexts) {
            out.push_back(*entry.fact_contexts);
        } else {
            out.push_back(PathSet{id, {}, false});
        }
    }
    return out;
}

/// Splits identifiers at underscores, non-alphanumerics, digit runs and case
/// boundaries ("parse_HTTP2Frame" -> parse, http, 2, frame).
inline std::vector<std::string> subtokenize(std::string_view token) {
    std::vector<std::string> out;
    std::string cur;
    auto flush = [&] {
        if (!cur.empty()) out.push_back(std::move(cur));
        cur.clear();
    };
    auto cls = [](char c) {
        const auto u = static_cast<unsigned char>(c);
        if (std::isdigit(u)) return 1;
        if (std::isupper(u)) return 2;
        if (std::islower(u)) return 3;
        return 0;
    };
    for (std::size_t i = 0; i < token.size(); ++i) {
        const char c = token[i];
        const int k = cls(c);
        if (k == 0) {
            flush();
            continue;
        }
        if (!cur.empty() && i > 0) {
            const int prev = cls(token[i - 1]);
            const bool next_lower = i + 1 < token.size() && cls(token[i + 1]) == 3;
            if ((k == 1) != (prev == 1)) flush();                  // digit boundary
            else if (k == 2 && prev == 3) flush();                  // camelCase
            else if (k == 2 && prev == 2 && next_lower) flush();    // HTTPServer -> HTTP|Server
        }
        cur += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    flush();
    return out;
}

} // namespace rmove
