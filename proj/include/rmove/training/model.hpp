#pragma once

#include <cstdio>
#include <string>

#include "json.hpp"

#include "rmove/config.hpp"
#include "rmove/fusion.hpp"
#include "rmove/rng.hpp"
#include "rmove/training/classifiers.hpp"

namespace rmove::training {

inline constexpr char kModelMagic[] = "RMMDL1";

inline std::string normalizers_hash(const Normalizers& n) {
    const std::string text = nlohmann::json{{"code", to_json(n.code)}, {"graph", to_json(n.graph)}}.dump();
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(text)));
    return buf;
}

/// A fitted classifier plus what inference needs to rebuild its features.
struct TrainedModel {
    Classifier classifier;
    Normalizers norms;
    double alpha = 0.5;
    std::string code_tag, graph_tag;
    Config config;

    std::size_t code_dim() const { return norms.code.dim(); }
    std::size_t graph_dim() const { return norms.graph.dim(); }
    std::size_t hybrid_dim() const { return code_dim() + graph_dim(); }
    std::size_t feature_dim() const { return 2 * hybrid_dim(); }

    /// Throws DimensionMismatch unless the embeddings match what the model saw.
    void check_dims(std::size_t code, std::size_t graph) const {
        if (code != code_dim() || graph != graph_dim())
            fail(ErrorKind::DimensionMismatch, "model expects code/graph dims " + std::to_string(code_dim()) + "/" +
                                                   std::to_string(graph_dim()) + ", embeddings have " +
                                                   std::to_string(code) + "/" + std::to_string(graph));
    }
};

inline TrainedModel make_model(Classifier c, const Hybrids& h, const Config& cfg) {
    TrainedModel m;
    m.classifier = std::move(c);
    m.norms = h.norms;
    m.alpha = h.alpha;
    m.code_tag = h.table.meta.value("code_tag", "");
    m.graph_tag = h.table.meta.value("graph_tag", "");
    m.config = cfg;
    if (m.classifier.dim() != m.feature_dim())
        fail(ErrorKind::DimensionMismatch, "classifier input length differs from twice the hybrid length");
    return m;
}

inline std::string encode_model(const TrainedModel& m) {
    const nlohmann::json j = {{"classifier", m.classifier.to_json()},
                              {"normalizers", {{"code", to_json(m.norms.code)}, {"graph", to_json(m.norms.graph)}}},
                              {"normalizers_hash", normalizers_hash(m.norms)},
                              {"alpha", m.alpha},
                              {"code_tag", m.code_tag},
                              {"graph_tag", m.graph_tag},
                              {"code_dim", m.code_dim()},
                              {"graph_dim", m.graph_dim()},
                              {"config", serialize(m.config)}};
    const auto body = nlohmann::json::to_cbor(j);
    std::string out(kModelMagic);
    out.append(body.begin(), body.end());
    return out;
}

inline TrainedModel decode_model(const std::string& bytes) {
    const std::string magic(kModelMagic);
    if (bytes.compare(0, magic.size(), magic) != 0) fail(ErrorKind::BadFormat, "not an RMMDL1 model file");
    try {
        const auto j = nlohmann::json::from_cbor(bytes.begin() + static_cast<std::ptrdiff_t>(magic.size()), bytes.end());
        TrainedModel m;
        m.classifier = Classifier::from_json(j.at("classifier"));
        m.norms = {normalizer_from_json(j.at("normalizers").at("code")),
                   normalizer_from_json(j.at("normalizers").at("graph"))};
        if (normalizers_hash(m.norms) != j.at("normalizers_hash").get<std::string>())
            fail(ErrorKind::BadFormat, "model normalizers do not match their recorded hash");
        m.alpha = j.at("alpha").get<double>();
        m.code_tag = j.at("code_tag").get<std::string>();
        m.graph_tag = j.at("graph_tag").get<std::string>();
        m.config = parse_config(j.at("config").get<std::string>());
        m.check_dims(j.at("code_dim").get<std::size_t>(), j.at("graph_dim").get<std::size_t>());
        if (m.classifier.dim() != m.feature_dim()) fail(ErrorKind::BadFormat, "classifier and normalizer dims disagree");
        return m;
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::BadFormat, std::string("model file: ") + e.what());
    }
}

inline void save_model(const TrainedModel& m, const std::string& path) { write_file(path, encode_model(m)); }

inline TrainedModel load_model(const std::string& path) { return decode_model(read_file(path)); }

/// Loads a model and refuses it unless it matches the given embedding dims.
inline TrainedModel load_model(const std::string& path, std::size_t code_dim, std::size_t graph_dim) {
    auto m = load_model(path);
    m.check_dims(code_dim, graph_dim);
    return m;
}

} // namespace rmove::training
