#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "rmove/fusion.hpp"
#include "rmove/ids.hpp"
#include "rmove/training/classifiers.hpp"

namespace rmove::training {

struct LabeledSample {
    Vector features; // method hybrid then class hybrid
    bool label = false;
    MethodId method;
    ClassId cls;
    std::size_t triple = 0; // index into the input triples
};

inline Vector pair_features(const Vector& method, const Vector& cls) {
    Vector f(method.size() + cls.size());
    f << method, cls;
    return f;
}

/// One negative (method with its source) and one positive (method with its
/// target) per triple. A method that appears in k triples with the same source
/// therefore gets k copies of the negative, which keeps the labels balanced.
inline std::vector<LabeledSample> generate_training_data(const std::vector<MoveMethodTriple>& triples,
                                                         const EmbeddingTable& hybrids) {
    auto hybrid = [&](const std::string& id) {
        const auto r = hybrids.find(id);
        if (!r) fail(ErrorKind::MissingHybrid, "no hybrid embedding for " + id);
        return Vector(hybrids.values.row(static_cast<Eigen::Index>(*r)).transpose());
    };
    std::vector<LabeledSample> out;
    out.reserve(2 * triples.size());
    for (std::size_t i = 0; i < triples.size(); ++i) {
        const auto& t = triples[i];
        const Vector m = hybrid(t.method.str());
        const Vector src = hybrid(t.source_class.str());
        const Vector dst = hybrid(t.target_class.str());
        out.push_back({pair_features(m, src), false, t.method, t.source_class, i});
        out.push_back({pair_features(m, dst), true, t.method, t.target_class, i});
    }
    return out;
}

inline Dataset to_dataset(const std::vector<LabeledSample>& samples) {
    Dataset d;
    if (samples.empty()) return d;
    d.X.resize(static_cast<Eigen::Index>(samples.size()), samples.front().features.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (samples[i].features.size() != d.X.cols())
            fail(ErrorKind::DimensionMismatch, "samples have differing feature lengths");
        d.X.row(static_cast<Eigen::Index>(i)) = samples[i].features.transpose();
        d.y.push_back(samples[i].label ? 1 : 0);
    }
    return d;
}

/// JSONL, one sample per line: {"method","class","label","triple","features":[...]}.
inline std::string format_samples(const std::vector<LabeledSample>& samples) {
    std::string out;
    for (const auto& s : samples) {
        const std::vector<double> f(s.features.data(), s.features.data() + s.features.size());
        out += nlohmann::json{{"method", s.method.str()},
                              {"class", s.cls.str()},
                              {"label", s.label ? 1 : 0},
                              {"triple", s.triple},
                              {"features", f}}
                   .dump() +
               "\n";
    }
    return out;
}

inline std::vector<LabeledSample> parse_samples(const std::string& text) {
    std::vector<LabeledSample> out;
    std::istringstream in(text);
    std::string line;
    std::size_t no = 0;
    while (std::getline(in, line)) {
        ++no;
        if (line.empty()) continue;
        try {
            const auto j = nlohmann::json::parse(line);
            const auto f = j.at("features").get<std::vector<double>>();
            LabeledSample s;
            s.features = Eigen::Map<const Vector>(f.data(), static_cast<Eigen::Index>(f.size()));
            s.label = j.at("label").get<int>() == 1;
            s.method = MethodId(j.at("method").get<std::string>());
            s.cls = ClassId(j.at("class").get<std::string>());
            s.triple = j.at("triple").get<std::size_t>();
            out.push_back(std::move(s));
        } catch (const nlohmann::json::exception& e) {
            fail(ErrorKind::MalformedRecord, "sample line " + std::to_string(no) + ": " + e.what());
        }
    }
    return out;
}

} // namespace rmove::training
