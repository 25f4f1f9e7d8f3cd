#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "rmove/config.hpp"
#include "rmove/depgraph.hpp"
#include "rmove/embedding.hpp"
#include "rmove/error.hpp"

namespace rmove::graph {

enum class Technique { DeepWalk, Node2Vec, Walklets, GraRep, Line, ProNE, SDNE };

inline constexpr std::array<Technique, 7> kAllTechniques = {Technique::DeepWalk, Technique::Node2Vec,
                                                            Technique::Walklets, Technique::GraRep,
                                                            Technique::Line,     Technique::ProNE,
                                                            Technique::SDNE};

inline std::string_view to_string(Technique t) {
    constexpr std::array<std::string_view, 7> names = {"DeepWalk", "Node2Vec", "Walklets", "GraRep",
                                                       "LINE",     "ProNE",    "SDNE"};
    return names[static_cast<std::size_t>(t)];
}

/// Eight-byte tag used in RMEMB1 headers.
inline std::string tag_of(Technique t) {
    std::string s(to_string(t));
    for (auto& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return s;
}

inline std::optional<Technique> technique_from_string(std::string_view s) {
    for (auto t : kAllTechniques) {
        std::string a(to_string(t)), b(s);
        for (auto& c : a) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        for (auto& c : b) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        if (a == b) return t;
    }
    return std::nullopt;
}

/// d <= |V|/2 once the graph has at least four nodes.
inline void check_graph_dim(std::size_t dim, std::size_t n, bool strict) {
    if (dim < 1) fail(ErrorKind::InvalidConfig, "graph embedding dimension must be >= 1");
    if (strict && n >= 4 && 2 * dim > n)
        fail(ErrorKind::DimTooLarge, "graph dim " + std::to_string(dim) + " exceeds |V|/2 for |V|=" + std::to_string(n) +
                                         " (set strict_dims = false to allow)");
}

inline void check_divisible(std::size_t dim, std::size_t parts, std::string_view what) {
    if (parts == 0 || dim % parts != 0)
        fail(ErrorKind::DimNotDivisible,
             "dim " + std::to_string(dim) + " not divisible by " + std::string(what) + "=" + std::to_string(parts));
}

/// Wraps node-indexed vectors as a table keyed by method id.
inline EmbeddingTable to_table(Technique t, const MethodDependencyGraph& g, Matrix values, nlohmann::json meta) {
    round_to_float(values);
    EmbeddingTable table;
    table.tag = tag_of(t);
    for (const auto& id : g.nodes) table.ids.push_back(id.str());
    table.values = std::move(values);
    meta["technique"] = std::string(to_string(t));
    table.meta = std::move(meta);
    return table;
}

} // namespace rmove::graph
