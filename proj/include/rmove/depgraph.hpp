#pragma once

#include <algorithm>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "rmove/corpus.hpp"
#include "rmove/error.hpp"
#include "rmove/ids.hpp"

namespace rmove {

/// Directed call graph over methods. Node i is the i-th method id in sorted
/// order; edges are sorted and free of duplicates and self-loops.
struct MethodDependencyGraph {
    std::vector<MethodId> nodes;
    std::vector<std::pair<std::size_t, std::size_t>> edges;

    std::size_t size() const noexcept { return nodes.size(); }

    std::size_t index_of(const MethodId& id) const {
        auto it = std::lower_bound(nodes.begin(), nodes.end(), id);
        if (it == nodes.end() || *it != id) fail(ErrorKind::MissingEmbedding, "method not in graph: " + id.str());
        return static_cast<std::size_t>(it - nodes.begin());
    }

    friend bool operator==(const MethodDependencyGraph&, const MethodDependencyGraph&) = default;
};

/// Compressed adjacency with sorted neighbor lists.
struct Adjacency {
    std::vector<std::size_t> offsets{0};
    std::vector<std::size_t> targets;

    std::size_t size() const noexcept { return offsets.size() - 1; }
    std::size_t degree(std::size_t v) const { return offsets[v + 1] - offsets[v]; }
    const std::size_t* begin(std::size_t v) const { return targets.data() + offsets[v]; }
    const std::size_t* end(std::size_t v) const { return targets.data() + offsets[v + 1]; }
    bool has_edge(std::size_t u, std::size_t v) const { return std::binary_search(begin(u), end(u), v); }
    std::size_t edge_count() const noexcept { return targets.size(); }
};

inline Adjacency make_adjacency(std::size_t n, std::vector<std::pair<std::size_t, std::size_t>> edges) {
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    Adjacency adj;
    adj.offsets.assign(n + 1, 0);
    for (const auto& [u, v] : edges) ++adj.offsets[u + 1];
    for (std::size_t i = 0; i < n; ++i) adj.offsets[i + 1] += adj.offsets[i];
    adj.targets.reserve(edges.size());
    for (const auto& e : edges) adj.targets.push_back(e.second);
    return adj;
}

/// Restricted to one project when `project` is non-empty.
inline MethodDependencyGraph build_mdg(const Corpus& c, const ProjectId& project = {}) {
    MethodDependencyGraph g;
    for (const auto& [id, entry] : c.methods)
        if (project.empty() || project_of(entry.record.owner) == project) g.nodes.push_back(id);
    std::map<MethodId, std::size_t> index;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) index.emplace(g.nodes[i], i);
    for (const auto& [src, dst] : c.raw_calls) {
        auto s = index.find(src), d = index.find(dst);
        if (s == index.end() || d == index.end() || s->second == d->second) continue;
        g.edges.emplace_back(s->second, d->second);
    }
    std::sort(g.edges.begin(), g.edges.end());
    g.edges.erase(std::unique(g.edges.begin(), g.edges.end()), g.edges.end());
    return g;
}

inline Adjacency directed_adjacency(const MethodDependencyGraph& g) { return make_adjacency(g.size(), g.edges); }

/// Symmetric closure of the call graph.
inline Adjacency undirected_view(const MethodDependencyGraph& g) {
    std::vector<std::pair<std::size_t, std::size_t>> sym;
    sym.reserve(g.edges.size() * 2);
    for (const auto& [u, v] : g.edges) {
        sym.emplace_back(u, v);
        sym.emplace_back(v, u);
    }
    return make_adjacency(g.size(), std::move(sym));
}

/// Header line |V|, then sorted "src<TAB>dst" id lines.
inline std::string export_edge_list(const MethodDependencyGraph& g) {
    std::string out = std::to_string(g.size()) + "\n";
    for (const auto& [u, v] : g.edges) out += g.nodes[u].str() + "\t" + g.nodes[v].str() + "\n";
    return out;
}

/// Inverse of export_edge_list; node ids come from `nodes` since isolated methods
/// do not appear in edge lines.
inline MethodDependencyGraph import_edge_list(const std::string& text, std::vector<MethodId> nodes) {
    std::sort(nodes.begin(), nodes.end());
    MethodDependencyGraph g;
    g.nodes = std::move(nodes);
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) fail(ErrorKind::BadFormat, "edge list: missing |V| header");
    std::size_t declared = 0;
    try {
        declared = std::stoul(line);
    } catch (...) {
        fail(ErrorKind::BadFormat, "edge list: bad |V| header '" + line + "'");
    }
    if (declared != g.size())
        fail(ErrorKind::BadFormat, "edge list declares " + std::to_string(declared) + " nodes, expected " +
                                       std::to_string(g.size()));
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos) fail(ErrorKind::BadFormat, "edge list: line without TAB: " + line);
        const auto u = g.index_of(MethodId(line.substr(0, tab)));
        const auto v = g.index_of(MethodId(line.substr(tab + 1)));
        g.edges.emplace_back(u, v);
    }
    std::sort(g.edges.begin(), g.edges.end());
    g.edges.erase(std::unique(g.edges.begin(), g.edges.end()), g.edges.end());
    return g;
}

} // namespace rmove
