#pragma once

#include <algorithm>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "rmove/corpus.hpp"
#include "rmove/error.hpp"
#include "rmove/ids.hpp"
#include "rmove/rng.hpp"

namespace rmove {

struct SmellInjectionSpec {
    std::size_t classes = 10;
    std::size_t methods_per_class = 8;
    std::size_t calls_per_method = 2;
    std::size_t injected_moves = 10;
    std::uint64_t seed = 42;
    std::string project = "synth";
};

struct SmellyCorpus {
    std::vector<SourceFile> files; // one per class, sorted by path
    std::vector<MoveMethodTriple> ground_truth;

    std::string project = "synth";

    Corpus parse() const { return parse_source(files, project); }
};

namespace detail {

inline const std::vector<std::string>& synth_themes() {
    static const std::vector<std::string> t = {
        "account", "invoice", "order",   "cart",    "ledger",  "shipment", "sensor",  "widget",  "report",
        "session", "ticket",  "payment", "catalog", "profile", "message",  "folder",  "device",  "route",
        "budget",  "patient", "lesson",  "recipe",  "vehicle", "contract", "gallery", "channel", "warehouse",
        "survey",  "tenant",  "voucher", "parcel",  "reactor"};
    return t;
}

inline const std::vector<std::string>& synth_verbs() {
    static const std::vector<std::string> v = {"compute", "update", "load",  "check",   "merge",  "apply",
                                               "resolve", "adjust", "count", "measure", "refresh", "scale"};
    return v;
}

inline const std::vector<std::string>& synth_attrs() {
    static const std::vector<std::string> a = {"Total", "Limit", "Rate", "Level", "Count", "Score", "Weight", "Size"};
    return a;
}

inline std::string capitalized(std::string s) {
    if (!s.empty()) s[0] = static_cast<char>(s[0] - 'a' + 'A');
    return s;
}

/// Theme of class k; past the word list a numeric suffix keeps names unique.
inline std::string theme_of(std::size_t k) {
    const auto& t = synth_themes();
    return k < t.size() ? t[k] : t[k % t.size()] + std::to_string(k / t.size());
}

} // namespace detail

/// Cohesive classes whose methods call each other and use their class's
/// identifier theme; `injected_moves` methods are then placed in another class
/// while keeping their calls and identifiers pointing at the original one.
/// Ground-truth triples read (method in its wrong class, wrong class, original).
inline SmellyCorpus generate_smelly_corpus(const SmellInjectionSpec& spec) {
    const std::size_t keep = spec.calls_per_method + 1; // uninjected methods every class retains
    if (spec.classes == 0 || spec.methods_per_class == 0)
        fail(ErrorKind::SpecInfeasible, "need at least one class and one method per class");
    if (spec.methods_per_class < keep)
        fail(ErrorKind::SpecInfeasible, "methods_per_class must exceed calls_per_method");
    if (spec.injected_moves > 0 && spec.classes < 2)
        fail(ErrorKind::SpecInfeasible, "injecting moves needs at least two classes");
    const std::size_t capacity = spec.classes * (spec.methods_per_class - keep);
    if (spec.injected_moves > capacity)
        fail(ErrorKind::SpecInfeasible, std::to_string(spec.injected_moves) + " injected moves exceed the " +
                                            std::to_string(capacity) + " methods that can leave their classes");

    Rng rng(spec.seed);
    const std::size_t C = spec.classes, M = spec.methods_per_class;
    std::vector<std::string> theme(C), cls(C);
    for (std::size_t k = 0; k < C; ++k) {
        theme[k] = detail::theme_of(k);
        cls[k] = detail::capitalized(theme[k]) + "Service";
    }
    // method (k, j): verb + Theme + attribute, globally unique
    auto method_name = [&](std::size_t k, std::size_t j) {
        const auto& verbs = detail::synth_verbs();
        const auto& attrs = detail::synth_attrs();
        std::string n = verbs[j % verbs.size()] + detail::capitalized(theme[k]) + attrs[(j + k) % attrs.size()];
        if (j >= verbs.size()) n += std::to_string(j / verbs.size());
        return n;
    };

    // pick injected methods: slots j >= keep of each class are movable
    std::vector<std::pair<std::size_t, std::size_t>> movable;
    for (std::size_t k = 0; k < C; ++k)
        for (std::size_t j = keep; j < M; ++j) movable.emplace_back(k, j);
    Rng pick = rng.split("inject");
    pick.shuffle(movable);
    movable.resize(spec.injected_moves);
    std::vector<std::vector<std::size_t>> host(C, std::vector<std::size_t>(M));
    for (std::size_t k = 0; k < C; ++k)
        for (std::size_t j = 0; j < M; ++j) host[k][j] = k;
    for (const auto& [k, j] : movable) {
        std::size_t to = pick.below(C - 1);
        if (to >= k) ++to;
        host[k][j] = to;
    }

    auto render = [&](std::size_t k, std::size_t j) {
        Rng r = rng.split("body").split(static_cast<std::uint64_t>(k * M + j));
        const auto& attrs = detail::synth_attrs();
        const std::string& th = theme[k];
        auto field = [&](std::size_t a) { return th + attrs[a % attrs.size()]; };
        std::vector<std::size_t> callees;
        for (std::size_t c = 0; c < keep; ++c)
            if (c != j) callees.push_back(c);
        r.shuffle(callees);
        callees.resize(spec.calls_per_method);
        std::sort(callees.begin(), callees.end());
        std::ostringstream o;
        o << "    int " << method_name(k, j) << "(int " << th << "Input) {\n";
        o << "        int " << th << "Value = " << th << "Input + " << field(r.below(attrs.size())) << ";\n";
        for (auto c : callees)
            o << "        " << th << "Value = " << th << "Value + " << method_name(k, c) << "(" << field(r.below(attrs.size()))
              << ");\n";
        o << "        if (" << th << "Value > " << field(r.below(attrs.size())) << ") {\n";
        o << "            " << field(r.below(attrs.size())) << " = " << th << "Value;\n";
        o << "        }\n";
        o << "        return " << th << "Value > 0 ? " << th << "Value : " << field(r.below(attrs.size())) << ";\n";
        o << "    }\n";
        return o.str();
    };

    SmellyCorpus out;
    out.project = spec.project;
    for (std::size_t k = 0; k < C; ++k) {
        std::ostringstream o;
        o << "class " << cls[k] << " {\n";
        for (std::size_t a = 0; a < detail::synth_attrs().size(); ++a)
            o << "    int " << theme[k] << detail::synth_attrs()[a] << ";\n";
        for (std::size_t src = 0; src < C; ++src)
            for (std::size_t j = 0; j < M; ++j)
                if (host[src][j] == k) o << render(src, j);
        o << "}\n";
        out.files.push_back({cls[k] + ".java", o.str()});
    }
    for (const auto& [k, j] : movable) {
        const auto to = host[k][j];
        out.ground_truth.push_back(make_triple(make_method_id(spec.project, cls[to], method_name(k, j) + "(int)"),
                                               make_class_id(spec.project, cls[to]), make_class_id(spec.project, cls[k])));
    }
    std::sort(out.ground_truth.begin(), out.ground_truth.end());
    std::sort(out.files.begin(), out.files.end(), [](const auto& a, const auto& b) { return a.path < b.path; });
    return out;
}

inline std::string format_ground_truth(const std::vector<MoveMethodTriple>& ts) {
    std::string out;
    for (const auto& t : ts)
        out += nlohmann::json{{"method", t.method.str()}, {"source", t.source_class.str()}, {"target", t.target_class.str()}}
                   .dump() +
               "\n";
    return out;
}

inline std::vector<MoveMethodTriple> parse_ground_truth(const std::string& text) {
    std::vector<MoveMethodTriple> out;
    std::istringstream in(text);
    std::string line;
    std::size_t no = 0;
    while (std::getline(in, line)) {
        ++no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            const auto j = nlohmann::json::parse(line);
            out.push_back(make_triple(MethodId(j.at("method").get<std::string>()),
                                      ClassId(j.at("source").get<std::string>()),
                                      ClassId(j.at("target").get<std::string>())));
        } catch (const nlohmann::json::exception& e) {
            fail(ErrorKind::MalformedRecord, "ground truth line " + std::to_string(no) + ": " + e.what());
        } catch (const Error& e) {
            fail(ErrorKind::MalformedRecord, "ground truth line " + std::to_string(no) + ": " + e.what());
        }
    }
    return out;
}

} // namespace rmove
