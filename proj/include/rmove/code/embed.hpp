#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "rmove/code/code2seq.hpp"
#include "rmove/code/code2vec.hpp"
#include "rmove/code/vocab.hpp"
#include "rmove/config.hpp"
#include "rmove/embedding.hpp"

namespace rmove::code {

enum class Encoder { Code2Vec, Code2Seq };

inline std::string to_string(Encoder e) { return e == Encoder::Code2Vec ? "Code2Vec" : "Code2Seq"; }
inline std::string tag_of(Encoder e) { return e == Encoder::Code2Vec ? Code2Vec::kTag : Code2Seq::kTag; }

inline Encoder encoder_from_string(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (s == "code2vec" || s == "cv") return Encoder::Code2Vec;
    if (s == "code2seq" || s == "cs") return Encoder::Code2Seq;
    fail(ErrorKind::InvalidConfig, "unknown code encoder '" + s + "'");
}

struct TrainOptions {
    std::size_t epochs = 20;
    std::size_t batch = 32;
    double lr = 0.01;
    double heldout_fraction = 0.1;
    double dropout = 0.25;
};

struct EpochStats {
    double heldout_loss = 0.0;
    double heldout_accuracy = 0.0;
    double train_loss = 0.0;
};

template <class Model>
struct TrainedEncoder {
    Model model;
    std::vector<EpochStats> history; // entry 0 is before the first update
    std::vector<std::size_t> heldout;
};

/// Loss and top-1 name accuracy over `idx`.
template <class Model>
EpochStats evaluate_encoder(const Model& model, const std::vector<EncodedMethod>& methods,
                            const std::vector<std::size_t>& idx) {
    EpochStats s;
    std::size_t n = 0, hit = 0;
    for (std::size_t i : idx) {
        const auto& m = methods[i];
        if (m.contexts.empty()) continue;
        const auto e = model.encode(m);
        s.heldout_loss += e.loss;
        Eigen::Index best = 0;
        e.probs.maxCoeff(&best);
        if (best == m.target) ++hit;
        ++n;
    }
    if (n) {
        s.heldout_loss /= static_cast<double>(n);
        s.heldout_accuracy = static_cast<double>(hit) / static_cast<double>(n);
    }
    return s;
}

/// Mini-batch Adam on name prediction. A seeded shuffle holds out a fraction of
/// the methods that have contexts; with fewer than 10 such methods nothing is
/// held out and the curve tracks the training set instead.
template <class Model>
TrainedEncoder<Model> train_encoder(Model model, const std::vector<EncodedMethod>& methods, const TrainOptions& opt,
                                    const Rng& rng) {
    TrainedEncoder<Model> out;
    std::vector<std::size_t> usable;
    for (std::size_t i = 0; i < methods.size(); ++i)
        if (!methods[i].contexts.empty()) usable.push_back(i);
    Rng split = rng.split("heldout");
    split.shuffle(usable);
    const auto n_held = usable.size() >= 10
                            ? static_cast<std::size_t>(std::llround(opt.heldout_fraction * static_cast<double>(usable.size())))
                            : 0;
    out.heldout.assign(usable.begin(), usable.begin() + static_cast<std::ptrdiff_t>(n_held));
    std::vector<std::size_t> train(usable.begin() + static_cast<std::ptrdiff_t>(n_held), usable.end());
    std::sort(out.heldout.begin(), out.heldout.end());
    std::sort(train.begin(), train.end());
    const auto& monitor = n_held ? out.heldout : train;

    auto record = [&](double train_loss) {
        auto s = evaluate_encoder(model, methods, monitor);
        s.train_loss = train_loss;
        out.history.push_back(s);
    };
    record(std::nan(""));

    Adam adam(model.params, opt.lr);
    ParamSet grad = model.params.zeros_like();
    const std::size_t bsz = std::max<std::size_t>(1, opt.batch);
    std::vector<const EncodedMethod*> batch;
    for (std::size_t e = 0; e < opt.epochs; ++e) {
        auto order = train;
        Rng er = rng.split("epoch").split(static_cast<std::uint64_t>(e));
        er.shuffle(order);
        double sum = 0.0;
        std::size_t nb = 0;
        for (std::size_t lo = 0; lo < order.size(); lo += bsz) {
            batch.clear();
            for (std::size_t k = lo; k < std::min(order.size(), lo + bsz); ++k) batch.push_back(&methods[order[k]]);
            grad.set_zero();
            Rng noise = er.split(static_cast<std::uint64_t>(lo) + 1);
            const Dropout drop{opt.dropout, &noise};
            sum += mean_loss(model, batch, &grad, opt.dropout > 0.0 ? &drop : nullptr);
            ++nb;
            adam.step(model.params, grad);
        }
        record(nb ? sum / static_cast<double>(nb) : 0.0);
    }
    out.model = std::move(model);
    return out;
}

struct CodeEmbeddingResult {
    EmbeddingTable table;
    std::map<std::string, Vocabulary> vocabs; // keyed by project, "" when pooled
    std::vector<EpochStats> history;          // pooled runs only
};

inline EncoderDims encoder_dims(const Config& cfg) {
    return {as_size(cfg.token_embed_dim), as_size(cfg.path_embed_dim), as_size(cfg.code_dim)};
}

inline TrainOptions train_options(const Config& cfg, Encoder e) {
    return {as_size(e == Encoder::Code2Vec ? cfg.code2vec_epochs : cfg.code2seq_epochs), as_size(cfg.code_batch_size),
            cfg.code_lr, 0.1, cfg.code_dropout};
}

namespace detail {

template <class Model>
CodeEmbeddingResult embed_with(Encoder enc, const std::vector<PathSet>& pathsets, Vocabulary vocab, const Config& cfg,
                               const Rng& rng) {
    std::vector<EncodedMethod> methods;
    methods.reserve(pathsets.size());
    for (const auto& ps : pathsets) methods.push_back(encode_method(ps, vocab));
    Rng init = rng.split("init");
    auto trained = train_encoder(Model(vocab, encoder_dims(cfg), init), methods, train_options(cfg, enc),
                                 rng.split("train"));

    const auto dim = static_cast<Eigen::Index>(cfg.code_dim);
    Matrix values(static_cast<Eigen::Index>(methods.size()), dim);
    std::vector<std::string> ids;
    nlohmann::json no_contexts = nlohmann::json::array();
    for (std::size_t i = 0; i < methods.size(); ++i) {
        values.row(static_cast<Eigen::Index>(i)) = trained.model.encode(methods[i]).vector;
        ids.push_back(methods[i].method.str());
        if (methods[i].contexts.empty()) no_contexts.push_back(methods[i].method.str());
    }
    if (!values.allFinite()) fail(ErrorKind::InvalidConfig, to_string(enc) + " diverged");
    round_to_float(values);

    nlohmann::json curve = nlohmann::json::array(), acc = nlohmann::json::array();
    for (const auto& h : trained.history) {
        curve.push_back(h.heldout_loss);
        acc.push_back(h.heldout_accuracy);
    }
    nlohmann::json meta = {{"encoder", to_string(enc)},
                           {"seed", rng.seed()},
                           {"dim", cfg.code_dim},
                           {"token_embed_dim", cfg.token_embed_dim},
                           {"path_embed_dim", cfg.path_embed_dim},
                           {"epochs", train_options(cfg, enc).epochs},
                           {"batch_size", cfg.code_batch_size},
                           {"lr", cfg.code_lr},
                           {"dropout", cfg.code_dropout},
                           {"heldout_methods", trained.heldout.size()},
                           {"heldout_loss", curve},
                           {"heldout_accuracy", acc},
                           {"no_contexts", no_contexts}};
    CodeEmbeddingResult r;
    r.table = make_table(tag_of(enc), ids, values);
    r.table.meta = std::move(meta);
    r.vocabs.emplace("", std::move(vocab));
    r.history = std::move(trained.history);
    return r;
}

} // namespace detail

inline CodeEmbeddingResult embed_pooled(Encoder enc, const std::vector<PathSet>& pathsets, const Config& cfg,
                                        const Rng& rng) {
    auto vocab = build_vocab(pathsets, as_size(cfg.min_count), as_size(cfg.max_subtokens));
    if (enc == Encoder::Code2Vec) return detail::embed_with<Code2Vec>(enc, pathsets, std::move(vocab), cfg, rng);
    return detail::embed_with<Code2Seq>(enc, pathsets, std::move(vocab), cfg, rng);
}

/// Trains the chosen encoder on `pathsets` and returns one vector per method.
/// Methods without contexts get a zero vector and are listed in meta.no_contexts.
/// With code_per_project each project gets its own vocabulary and model.
inline CodeEmbeddingResult embed_code(Encoder enc, const std::vector<PathSet>& pathsets, const Config& cfg,
                                      const Rng& rng) {
    if (!cfg.code_per_project) return embed_pooled(enc, pathsets, cfg, rng);
    if (pathsets.empty()) fail(ErrorKind::EmptyCorpus, "vocabulary needs at least one method");
    std::map<std::string, std::vector<PathSet>> groups;
    for (const auto& ps : pathsets) groups[project_of(owner_of(ps.method)).str()].push_back(ps);
    CodeEmbeddingResult out;
    std::vector<std::string> ids;
    std::vector<Eigen::RowVectorXd> rows;
    nlohmann::json per = nlohmann::json::object();
    for (const auto& [project, group] : groups) {
        auto r = embed_pooled(enc, group, cfg, rng.split(project));
        for (std::size_t i = 0; i < r.table.ids.size(); ++i) {
            ids.push_back(r.table.ids[i]);
            rows.push_back(r.table.values.row(static_cast<Eigen::Index>(i)));
        }
        per[project] = r.table.meta;
        out.vocabs.emplace(project, std::move(r.vocabs.at("")));
    }
    Matrix values(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cfg.code_dim));
    for (std::size_t i = 0; i < rows.size(); ++i) values.row(static_cast<Eigen::Index>(i)) = rows[i];
    out.table = make_table(tag_of(enc), ids, values);
    out.table.meta = {{"encoder", to_string(enc)}, {"seed", rng.seed()}, {"dim", cfg.code_dim}, {"per_project", per}};
    return out;
}

} // namespace rmove::code
