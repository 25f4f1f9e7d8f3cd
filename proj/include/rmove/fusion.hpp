#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "rmove/corpus.hpp"
#include "rmove/embedding.hpp"
#include "rmove/error.hpp"

namespace rmove {

enum class Family { Code, Graph };

inline std::string to_string(Family f) { return f == Family::Code ? "code" : "graph"; }

inline Family family_from_string(const std::string& s) {
    if (s == "code") return Family::Code;
    if (s == "graph") return Family::Graph;
    fail(ErrorKind::BadFormat, "unknown embedding family '" + s + "'");
}

/// Per-dimension min-max scaling to [0,1]; constant dimensions map to 0.5.
struct Normalizer {
    Family family = Family::Code;
    std::vector<double> mins, maxes;

    std::size_t dim() const noexcept { return mins.size(); }

    /// Values outside the fitted range are clamped; `clamped` counts them.
    Vector transform(const Vector& x, std::size_t* clamped = nullptr) const {
        if (static_cast<std::size_t>(x.size()) != dim())
            fail(ErrorKind::DimensionMismatch, to_string(family) + " vector has " + std::to_string(x.size()) +
                                                   " dims, normalizer expects " + std::to_string(dim()));
        Vector out(x.size());
        for (std::size_t d = 0; d < dim(); ++d) {
            const double span = maxes[d] - mins[d];
            const auto i = static_cast<Eigen::Index>(d);
            if (span <= 0.0) {
                out(i) = 0.5;
                if (clamped && x(i) != mins[d]) ++*clamped;
                continue;
            }
            const double v = (x(i) - mins[d]) / span;
            if (v < 0.0 || v > 1.0) {
                if (clamped) ++*clamped;
                out(i) = std::clamp(v, 0.0, 1.0);
            } else {
                out(i) = v;
            }
        }
        return out;
    }

    friend bool operator==(const Normalizer&, const Normalizer&) = default;
};

inline Normalizer fit_normalizer(const Matrix& rows, Family family) {
    if (rows.rows() == 0) fail(ErrorKind::EmptyInput, "cannot fit a " + to_string(family) + " normalizer on no vectors");
    Normalizer n;
    n.family = family;
    for (Eigen::Index d = 0; d < rows.cols(); ++d) {
        n.mins.push_back(rows.col(d).minCoeff());
        n.maxes.push_back(rows.col(d).maxCoeff());
    }
    return n;
}

inline Normalizer fit_normalizer(const EmbeddingTable& t, Family family) { return fit_normalizer(t.values, family); }

inline nlohmann::json to_json(const Normalizer& n) {
    return {{"family", to_string(n.family)}, {"dims", n.dim()}, {"mins", n.mins}, {"maxes", n.maxes}};
}

inline Normalizer normalizer_from_json(const nlohmann::json& j) {
    try {
        Normalizer n;
        n.family = family_from_string(j.at("family").get<std::string>());
        n.mins = j.at("mins").get<std::vector<double>>();
        n.maxes = j.at("maxes").get<std::vector<double>>();
        if (n.mins.size() != n.maxes.size() || n.mins.size() != j.at("dims").get<std::size_t>())
            fail(ErrorKind::BadFormat, "normalizer dims disagree");
        for (std::size_t d = 0; d < n.dim(); ++d)
            if (n.maxes[d] < n.mins[d]) fail(ErrorKind::BadFormat, "normalizer max below min");
        return n;
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::BadFormat, std::string("normalizer: ") + e.what());
    }
}

/// [alpha * nce, (1 - alpha) * nge]
inline Vector fuse(const Vector& nce, const Vector& nge, double alpha) {
    Vector out(nce.size() + nge.size());
    out << alpha * nce, (1.0 - alpha) * nge;
    return out;
}

struct Normalizers {
    Normalizer code, graph;
    friend bool operator==(const Normalizers&, const Normalizers&) = default;
};

inline Vector fuse_method(const MethodId& m, const EmbeddingTable& code, const EmbeddingTable& graph,
                          const Normalizers& norms, double alpha, std::size_t* clamped = nullptr) {
    if (alpha < 0.0 || alpha > 1.0) fail(ErrorKind::InvalidConfig, "alpha must lie in [0,1]");
    const auto c = code.find(m.str());
    if (!c) fail(ErrorKind::MissingEmbedding, "code embedding missing for " + m.str());
    const auto g = graph.find(m.str());
    if (!g) fail(ErrorKind::MissingEmbedding, "graph embedding missing for " + m.str());
    const Vector cv = code.values.row(static_cast<Eigen::Index>(*c)).transpose();
    const Vector gv = graph.values.row(static_cast<Eigen::Index>(*g)).transpose();
    return fuse(norms.code.transform(cv, clamped), norms.graph.transform(gv, clamped), alpha);
}

struct ClassHybrid {
    Vector values;
    bool empty = false; // excluded from recommendation candidates
};

/// Element-wise mean of member hybrids; an empty class gets zeros and the flag.
inline ClassHybrid class_embedding(const std::vector<Vector>& members, std::size_t dim) {
    ClassHybrid c;
    c.values = Vector::Zero(static_cast<Eigen::Index>(dim));
    if (members.empty()) {
        c.empty = true;
        return c;
    }
    for (const auto& m : members) c.values += m;
    c.values /= static_cast<double>(members.size());
    return c;
}

/// Method and class hybrids of a set of corpora, stored in one HYBRID table
/// (method ids have three components, class ids two, so they never collide).
struct Hybrids {
    EmbeddingTable table;
    Normalizers norms;
    double alpha = 0.5;
    std::vector<std::string> empty_classes;
    std::size_t clamped = 0;

    bool is_empty_class(const std::string& id) const {
        return std::binary_search(empty_classes.begin(), empty_classes.end(), id);
    }
};

/// Fits normalizers on the corpus methods unless `fitted` is given; training-time
/// statistics are reused at inference and out-of-range values clamp.
inline Hybrids fuse_corpora(const std::vector<Corpus>& corpora, const EmbeddingTable& code,
                            const EmbeddingTable& graph, double alpha,
                            const std::optional<Normalizers>& fitted = std::nullopt) {
    std::vector<MethodId> methods;
    for (const auto& c : corpora)
        for (const auto& [id, entry] : c.methods) methods.push_back(id);
    if (methods.empty()) fail(ErrorKind::EmptyInput, "no methods to fuse");

    Hybrids h;
    h.alpha = alpha;
    if (fitted) {
        h.norms = *fitted;
    } else {
        auto gather = [&](const EmbeddingTable& t, Family f) {
            Matrix rows(static_cast<Eigen::Index>(methods.size()), static_cast<Eigen::Index>(t.dim()));
            for (std::size_t i = 0; i < methods.size(); ++i) {
                const auto r = t.find(methods[i].str());
                if (!r) fail(ErrorKind::MissingEmbedding, to_string(f) + " embedding missing for " + methods[i].str());
                rows.row(static_cast<Eigen::Index>(i)) = t.values.row(static_cast<Eigen::Index>(*r));
            }
            return fit_normalizer(rows, f);
        };
        h.norms = {gather(code, Family::Code), gather(graph, Family::Graph)};
    }
    const std::size_t dim = h.norms.code.dim() + h.norms.graph.dim();

    std::vector<std::string> ids;
    std::vector<Vector> rows;
    std::map<MethodId, std::size_t> index;
    for (const auto& m : methods) {
        index[m] = rows.size();
        ids.push_back(m.str());
        rows.push_back(fuse_method(m, code, graph, h.norms, alpha, &h.clamped));
    }
    for (const auto& c : corpora) {
        for (const auto& cls : c.classes) {
            std::vector<Vector> members;
            for (const auto& m : cls.methods) members.push_back(rows[index.at(m)]);
            auto ce = class_embedding(members, dim);
            if (ce.empty) h.empty_classes.push_back(cls.id.str());
            ids.push_back(cls.id.str());
            rows.push_back(std::move(ce.values));
        }
    }
    std::sort(h.empty_classes.begin(), h.empty_classes.end());
    Matrix values(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(dim));
    for (std::size_t i = 0; i < rows.size(); ++i) values.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
    h.table = make_table("HYBRID", ids, values);
    h.table.meta = {{"alpha", alpha},
                    {"code_tag", code.tag},
                    {"graph_tag", graph.tag},
                    {"code_dim", h.norms.code.dim()},
                    {"graph_dim", h.norms.graph.dim()},
                    {"empty_classes", h.empty_classes},
                    {"clamped", h.clamped}};
    return h;
}

/// The table goes through save_embedding; normalizers ride in the sidecar meta
/// so they survive as exact doubles.
inline void save_hybrids(const Hybrids& h, const std::string& path) {
    EmbeddingTable t = h.table;
    t.meta["normalizers"] = {{"code", to_json(h.norms.code)}, {"graph", to_json(h.norms.graph)}};
    save_embedding(t, path);
}

inline Hybrids load_hybrids(const std::string& path) {
    Hybrids h;
    h.table = load_embedding(path);
    const auto& meta = h.table.meta;
    if (h.table.tag != "HYBRID" || !meta.contains("normalizers"))
        fail(ErrorKind::BadFormat, path + " is not a hybrid embedding file");
    try {
        h.norms = {normalizer_from_json(meta.at("normalizers").at("code")),
                   normalizer_from_json(meta.at("normalizers").at("graph"))};
        h.alpha = meta.at("alpha").get<double>();
        h.empty_classes = meta.at("empty_classes").get<std::vector<std::string>>();
        h.clamped = meta.at("clamped").get<std::size_t>();
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::BadFormat, path + ".json: " + e.what());
    }
    h.table.meta.erase("normalizers");
    return h;
}

} // namespace rmove
