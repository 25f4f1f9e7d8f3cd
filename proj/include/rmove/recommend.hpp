#pragma once

#include <algorithm>
#include <iomanip>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "rmove/config.hpp"
#include "rmove/corpus.hpp"
#include "rmove/fusion.hpp"
#include "rmove/parallel.hpp"
#include "rmove/path_context.hpp"
#include "rmove/training/model.hpp"
#include "rmove/training/samples.hpp"

namespace rmove {

struct ScoredClass {
    ClassId cls;
    double prob = 0.0;

    friend bool operator==(const ScoredClass&, const ScoredClass&) = default;
};

struct Recommendation {
    MethodId method;
    ClassId source;
    double source_prob = 0.0;
    std::vector<ScoredClass> ranked; // best first, at most top_k
    std::optional<ClassId> target;   // set when the decision is Move

    bool is_move() const noexcept { return target.has_value(); }
    friend bool operator==(const Recommendation&, const Recommendation&) = default;
};

/// Probability that the method belongs in the class.
inline double score_pair(const training::TrainedModel& model, const Vector& method, const Vector& cls) {
    return model.classifier.proba(training::pair_features(method, cls).transpose());
}

struct RecommendOptions {
    double tau = 0.5;
    std::size_t top_k = 1;
    bool compare_source = true;
    bool linked_only = false;
    std::size_t threads = 0;

    static RecommendOptions from(const Config& c) {
        return {c.tau, as_size(c.top_k), c.compare_source, c.linked_only, worker_count(as_size(c.threads))};
    }
};

namespace detail {

/// Classes sharing a call edge or a path-context token with each method.
inline std::map<MethodId, std::set<ClassId>> linked_classes(const Corpus& c, const std::vector<PathSet>& paths) {
    std::map<MethodId, std::set<ClassId>> out;
    for (const auto& [from, to] : c.raw_calls) {
        out[from].insert(owner_of(to));
        out[to].insert(owner_of(from));
    }
    std::map<MethodId, std::set<std::string>> tokens;
    std::map<std::string, std::set<ClassId>> holders;
    for (const auto& ps : paths) {
        if (!c.methods.count(ps.method)) continue;
        auto& t = tokens[ps.method];
        for (const auto& ctx : ps.contexts) {
            t.insert(ctx.start);
            t.insert(ctx.end);
        }
        for (const auto& tok : t) holders[tok].insert(owner_of(ps.method));
    }
    for (const auto& [m, toks] : tokens)
        for (const auto& tok : toks)
            for (const auto& cls : holders[tok]) out[m].insert(cls);
    return out;
}

} // namespace detail

/// Scores every method against the other non-empty classes of its project.
/// A method moves to its best class when that score beats tau and, unless
/// disabled, the score of the method paired with its current class.
inline std::vector<Recommendation> recommend_moves(const training::TrainedModel& model, const Corpus& corpus,
                                                   const Hybrids& hybrids, const RecommendOptions& opt,
                                                   const std::vector<PathSet>& paths = {}) {
    if (hybrids.table.dim() != model.hybrid_dim())
        fail(ErrorKind::DimensionMismatch, "hybrid vectors have " + std::to_string(hybrids.table.dim()) +
                                               " dims, model expects " + std::to_string(model.hybrid_dim()));
    std::vector<const ClassRecord*> candidates;
    for (const auto& cls : corpus.classes)
        if (!cls.methods.empty() && !hybrids.is_empty_class(cls.id.str())) candidates.push_back(&cls);
    std::vector<Vector> class_vecs;
    for (const auto* cls : candidates) class_vecs.push_back(hybrids.table.row(cls->id.str()));
    std::map<MethodId, std::set<ClassId>> links;
    if (opt.linked_only) links = detail::linked_classes(corpus, paths);

    std::vector<const MethodId*> methods;
    for (const auto& [id, entry] : corpus.methods) methods.push_back(&id);
    std::vector<Recommendation> out(methods.size());
    const auto hd = static_cast<Eigen::Index>(model.hybrid_dim());

    parallel_for(methods.size(), opt.threads, [&](std::size_t i) {
        const MethodId& m = *methods[i];
        Recommendation r;
        r.method = m;
        r.source = owner_of(m);
        Eigen::RowVectorXd x(2 * hd);
        x.head(hd) = hybrids.table.row(m.str()).transpose();
        x.tail(hd) = hybrids.table.row(r.source.str()).transpose();
        r.source_prob = model.classifier.proba(x);
        const std::set<ClassId>* linked = nullptr;
        if (opt.linked_only) {
            auto it = links.find(m);
            static const std::set<ClassId> none;
            linked = it == links.end() ? &none : &it->second;
        }
        std::vector<ScoredClass> scored;
        for (std::size_t k = 0; k < candidates.size(); ++k) {
            const auto& cls = candidates[k]->id;
            if (cls == r.source || (linked && !linked->count(cls))) continue;
            x.tail(hd) = class_vecs[k].transpose();
            scored.push_back({cls, model.classifier.proba(x)});
        }
        std::stable_sort(scored.begin(), scored.end(), [](const ScoredClass& a, const ScoredClass& b) {
            return a.prob != b.prob ? a.prob > b.prob : a.cls < b.cls;
        });
        if (scored.size() > opt.top_k) scored.resize(opt.top_k);
        r.ranked = std::move(scored);
        if (!r.ranked.empty()) {
            const auto& best = r.ranked.front();
            if (best.prob > opt.tau && (!opt.compare_source || best.prob > r.source_prob)) r.target = best.cls;
        }
        out[i] = std::move(r);
    });
    return out;
}

// ---------------------------------------------------------------------------
// reports

struct RecommendSummary {
    std::size_t methods = 0, moves = 0, stays = 0;
};

inline RecommendSummary summarize(const std::vector<Recommendation>& recs) {
    RecommendSummary s;
    s.methods = recs.size();
    for (const auto& r : recs) (r.is_move() ? s.moves : s.stays)++;
    return s;
}

inline nlohmann::json to_json(const Recommendation& r) {
    nlohmann::json ranked = nlohmann::json::array();
    for (const auto& c : r.ranked) ranked.push_back({{"class", c.cls.str()}, {"prob", c.prob}});
    return {{"method", r.method.str()},
            {"source", r.source.str()},
            {"decision", r.is_move() ? "move:" + r.target->str() : std::string("stay")},
            {"source_prob", r.source_prob},
            {"ranked", ranked}};
}

inline Recommendation recommendation_from_json(const nlohmann::json& j) {
    Recommendation r;
    r.method = MethodId(j.at("method").get<std::string>());
    r.source = ClassId(j.at("source").get<std::string>());
    r.source_prob = j.value("source_prob", 0.0);
    for (const auto& c : j.at("ranked")) r.ranked.push_back({ClassId(c.at("class").get<std::string>()), c.at("prob").get<double>()});
    const auto d = j.at("decision").get<std::string>();
    if (d.rfind("move:", 0) == 0) r.target = ClassId(d.substr(5));
    else if (d != "stay") fail(ErrorKind::MalformedRecord, "unknown decision '" + d + "'");
    return r;
}

/// One JSON object per recommendation, then {"summary": ...}.
inline std::string format_jsonl(const std::vector<Recommendation>& recs) {
    std::string out;
    for (const auto& r : recs) out += to_json(r).dump() + "\n";
    const auto s = summarize(recs);
    out += nlohmann::json{{"summary", {{"methods", s.methods}, {"moves", s.moves}, {"stays", s.stays}}}}.dump() + "\n";
    return out;
}

inline std::vector<Recommendation> parse_jsonl(const std::string& text) {
    std::vector<Recommendation> out;
    std::istringstream in(text);
    std::string line;
    std::size_t no = 0;
    while (std::getline(in, line)) {
        ++no;
        if (line.empty()) continue;
        try {
            const auto j = nlohmann::json::parse(line);
            if (j.contains("summary")) continue;
            out.push_back(recommendation_from_json(j));
        } catch (const nlohmann::json::exception& e) {
            fail(ErrorKind::MalformedRecord, "recommendations line " + std::to_string(no) + ": " + e.what());
        }
    }
    return out;
}

inline std::string format_text(const std::vector<Recommendation>& recs) {
    std::size_t wm = 6, ws = 6;
    for (const auto& r : recs) {
        wm = std::max(wm, r.method.str().size());
        ws = std::max(ws, r.source.str().size());
    }
    std::ostringstream o;
    o << std::left << std::setw(static_cast<int>(wm)) << "method" << "  " << std::setw(static_cast<int>(ws))
      << "source" << "  decision  best (prob)\n";
    for (const auto& r : recs) {
        o << std::setw(static_cast<int>(wm)) << r.method.str() << "  " << std::setw(static_cast<int>(ws))
          << r.source.str() << "  " << std::setw(8) << (r.is_move() ? "MOVE" : "stay") << "  ";
        if (r.ranked.empty()) o << "-";
        for (std::size_t i = 0; i < r.ranked.size(); ++i)
            o << (i ? ", " : "") << r.ranked[i].cls.str() << " (" << std::fixed << std::setprecision(3)
              << r.ranked[i].prob << ")";
        o << '\n';
    }
    const auto s = summarize(recs);
    o << s.methods << " methods, " << s.moves << " moves, " << s.stays << " stay\n";
    return o.str();
}

} // namespace rmove
