#pragma once

#include <chrono>
#include <string>
#include <vector>

#include "rmove/code/embed.hpp"
#include "rmove/config.hpp"
#include "rmove/corpus.hpp"
#include "rmove/depgraph.hpp"
#include "rmove/eval/evaluate.hpp"
#include "rmove/eval/synth.hpp"
#include "rmove/fusion.hpp"
#include "rmove/graph/embed.hpp"
#include "rmove/path_miner.hpp"
#include "rmove/recommend.hpp"
#include "rmove/training/cv.hpp"
#include "rmove/training/model.hpp"
#include "rmove/training/samples.hpp"

namespace rmove {

/// A graph technique paired with a code encoder, e.g. "DeepWalk+Code2Vec".
struct Combo {
    graph::Technique graph = graph::Technique::DeepWalk;
    code::Encoder code = code::Encoder::Code2Vec;

    std::string name() const { return std::string(graph::to_string(graph)) + "+" + code::to_string(code); }
};

inline Combo combo_from_string(const std::string& s) {
    const auto plus = s.find('+');
    if (plus == std::string::npos) fail(ErrorKind::InvalidConfig, "combo '" + s + "' is not GRAPH+CODE");
    const auto g = graph::technique_from_string(s.substr(0, plus));
    if (!g) fail(ErrorKind::InvalidConfig, "unknown graph technique in '" + s + "'");
    return {*g, code::encoder_from_string(s.substr(plus + 1))};
}

inline std::vector<PathSet> mine_corpora(const std::vector<Corpus>& corpora, const Config& cfg, const Rng& rng) {
    std::vector<PathSet> out;
    for (const auto& c : corpora) {
        auto ps = mine_corpus(c, PathLimits::from(cfg), rng.split(c.project.str()));
        out.insert(out.end(), std::make_move_iterator(ps.begin()), std::make_move_iterator(ps.end()));
    }
    return out;
}

/// One MDG and one embedding run per project, rows merged into one table.
inline EmbeddingTable embed_graph_corpora(const std::vector<Corpus>& corpora, graph::Technique t, const Config& cfg,
                                          const Rng& rng) {
    if (corpora.size() == 1) return graph::embed_graph(t, build_mdg(corpora[0]), cfg, rng.split(corpora[0].project.str()));
    std::vector<std::string> ids;
    std::vector<Eigen::RowVectorXd> rows;
    nlohmann::json per = nlohmann::json::object();
    for (const auto& c : corpora) {
        const auto table = graph::embed_graph(t, build_mdg(c), cfg, rng.split(c.project.str()));
        for (std::size_t i = 0; i < table.rows(); ++i) {
            ids.push_back(table.ids[i]);
            rows.push_back(table.values.row(static_cast<Eigen::Index>(i)));
        }
        per[c.project.str()] = table.meta;
    }
    Matrix values(static_cast<Eigen::Index>(rows.size()), cfg.graph_dim);
    for (std::size_t i = 0; i < rows.size(); ++i) values.row(static_cast<Eigen::Index>(i)) = rows[i];
    auto out = make_table(graph::tag_of(t), ids, values);
    out.meta = {{"technique", graph::to_string(t)}, {"seed", rng.seed()}, {"per_project", per}};
    return out;
}

/// Paths, both embedding families and the fused hybrids of a set of corpora.
struct Representation {
    std::vector<PathSet> paths;
    EmbeddingTable code, graph;
    Hybrids hybrids;
};

inline Representation represent(const std::vector<Corpus>& corpora, const Combo& combo, const Config& cfg,
                                const Rng& rng, const std::optional<Normalizers>& fitted = std::nullopt) {
    Representation r;
    r.paths = mine_corpora(corpora, cfg, rng.split("paths"));
    r.graph = embed_graph_corpora(corpora, combo.graph, cfg, rng.split("graph"));
    r.code = code::embed_code(combo.code, r.paths, cfg, rng.split("code")).table;
    r.hybrids = fuse_corpora(corpora, r.code, r.graph, cfg.alpha, fitted);
    return r;
}

// ---------------------------------------------------------------------------
// the scaled injected-smell experiment

struct ExperimentResult {
    training::CvResult cv;
    training::TrainedModel model;
    std::vector<Recommendation> recommendations;
    EvalResult eval;
    std::size_t targets_ranked_first = 0; // injected methods whose true class tops the ranking
    double infer_ms_per_method = 0.0;
};

/// Trains on the ground-truth triples of a generated corpus, cross-validates
/// the classifier over those samples, then refits on all of them and
/// recommends moves for every method.
inline ExperimentResult run_experiment(const SmellyCorpus& synth, const Combo& combo, training::Kind kind,
                                       const Config& cfg, const Rng& rng) {
    const std::vector<Corpus> corpora = {synth.parse()};
    const auto rep = represent(corpora, combo, cfg, rng.split("represent"));
    const auto samples = training::generate_training_data(synth.ground_truth, rep.hybrids.table);
    const auto data = training::to_dataset(samples);

    ExperimentResult out;
    training::CvOptions opt;
    opt.folds = as_size(cfg.cv_folds);
    opt.repeats = as_size(cfg.cv_repeats);
    opt.grid_folds = as_size(cfg.grid_folds);
    opt.threads = worker_count(as_size(cfg.threads));
    if (cfg.grid_search) opt.grid = training::default_grid(kind);
    for (const auto& smp : samples) opt.groups.push_back(smp.method.str());
    out.cv = training::cross_validate(kind, data, opt, rng.split("cv"));

    training::Classifier clf;
    if (cfg.grid_search)
        clf = training::grid_search(kind, data, opt.grid, opt.grid_folds, rng.split("fit"), opt.threads, opt.groups).model;
    else
        clf = training::train_classifier(kind, data, {}, rng.split("fit"));
    out.model = training::make_model(std::move(clf), rep.hybrids, cfg);

    const auto t0 = std::chrono::steady_clock::now();
    out.recommendations = recommend_moves(out.model, corpora[0], rep.hybrids, RecommendOptions::from(cfg), rep.paths);
    const auto t1 = std::chrono::steady_clock::now();
    out.infer_ms_per_method = std::chrono::duration<double, std::milli>(t1 - t0).count() /
                              static_cast<double>(std::max<std::size_t>(1, out.recommendations.size()));
    out.eval = compute_metrics(out.recommendations, synth.ground_truth);
    for (const auto& t : synth.ground_truth)
        for (const auto& r : out.recommendations)
            if (r.method == t.method && !r.ranked.empty() && r.ranked.front().cls == t.target_class)
                ++out.targets_ranked_first;
    return out;
}

} // namespace rmove
