#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "rmove/ast.hpp"
#include "rmove/error.hpp"
#include "rmove/ids.hpp"
#include "rmove/parser.hpp"
#include "rmove/path_context.hpp"

namespace rmove {

struct MethodEntry {
    MethodRecord record;
    std::optional<AstNode> ast;           // parsed methods
    std::optional<PathSet> fact_contexts; // facts-ingested methods
};

struct CorpusDiagnostics {
    std::size_t unresolved_calls = 0;
    std::size_t excluded_methods = 0;
    std::vector<std::string> messages;
};

/// Classes, methods (with ASTs or pre-extracted path contexts) and raw call
/// edges of one or more projects.
struct Corpus {
    ProjectId project;
    std::vector<ClassRecord> classes; // sorted by id
    std::map<MethodId, MethodEntry> methods;
    std::vector<std::pair<MethodId, MethodId>> raw_calls; // sorted, may repeat
    CorpusDiagnostics diagnostics;

    const ClassRecord* find_class(const ClassId& id) const {
        auto it = std::lower_bound(classes.begin(), classes.end(), id,
                                   [](const ClassRecord& c, const ClassId& k) { return c.id < k; });
        return it != classes.end() && it->id == id ? &*it : nullptr;
    }
};

struct SourceFile {
    std::string path;
    std::string text;
};

namespace detail {

struct CallSite {
    std::string name;
    std::size_t arity;
    bool self_receiver; // no receiver or `this`
};

inline void collect_calls(const AstNode& n, std::vector<CallSite>& out) {
    if (n.type == NodeType::MethodCall) {
        const AstNode& callee = n.children.at(0);
        CallSite site{"", n.children.size() - 1, true};
        if (callee.type == NodeType::Identifier) {
            site.name = callee.token;
        } else {
            site.name = callee.children.at(1).token;
            const AstNode& recv = callee.children.at(0);
            site.self_receiver = recv.type == NodeType::Identifier && recv.token == "this";
        }
        out.push_back(std::move(site));
    }
    for (const auto& ch : n.children) collect_calls(ch, out);
}

inline void finalize_classes(Corpus& c) {
    std::sort(c.classes.begin(), c.classes.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
    for (auto& cls : c.classes) {
        std::sort(cls.methods.begin(), cls.methods.end());
        cls.methods.erase(std::unique(cls.methods.begin(), cls.methods.end()), cls.methods.end());
    }
    std::sort(c.raw_calls.begin(), c.raw_calls.end());
    if (c.project.empty() && !c.classes.empty()) c.project = c.classes.front().project;
}

/// Static name+arity resolution; receiverless or `this` calls prefer the caller's class.
inline void resolve_calls(Corpus& c) {
    std::map<std::pair<std::string, std::size_t>, std::vector<MethodId>> by_name;
    for (const auto& [id, entry] : c.methods) by_name[{entry.record.name, entry.record.arity()}].push_back(id);
    for (const auto& [caller, entry] : c.methods) {
        if (!entry.ast) continue;
        std::vector<CallSite> sites;
        collect_calls(*entry.ast, sites);
        const ProjectId caller_project = project_of(entry.record.owner);
        for (const auto& site : sites) {
            auto it = by_name.find({site.name, site.arity});
            std::vector<MethodId> matches;
            if (it != by_name.end())
                for (const auto& m : it->second)
                    if (project_of(c.methods.at(m).record.owner) == caller_project) matches.push_back(m);
            if (matches.empty()) {
                ++c.diagnostics.unresolved_calls;
                continue;
            }
            if (site.self_receiver) {
                std::vector<MethodId> own;
                for (const auto& m : matches)
                    if (c.methods.at(m).record.owner == entry.record.owner) own.push_back(m);
                if (!own.empty()) matches = std::move(own);
            }
            for (auto& m : matches) c.raw_calls.emplace_back(caller, std::move(m));
        }
    }
}

} // namespace detail

/// Builds a corpus from subset-grammar sources. Files are processed in path order.
inline Corpus parse_source(std::vector<SourceFile> files, std::string_view project,
                           const std::string& exclude_methods = {}) {
    std::sort(files.begin(), files.end(), [](const auto& a, const auto& b) { return a.path < b.path; });
    std::optional<std::regex> exclude;
    if (!exclude_methods.empty()) exclude.emplace(exclude_methods, std::regex::ECMAScript);

    Corpus corpus;
    corpus.project = ProjectId(std::string(project));
    std::set<ClassId> seen_classes;
    for (const auto& file : files) {
        ParsedFile parsed = parse_file(file.path, file.text);
        for (auto& cls : parsed.classes) {
            const std::string class_path = parsed.package.empty() ? cls.name : parsed.package + "." + cls.name;
            ClassId cid = make_class_id(project, class_path);
            if (!seen_classes.insert(cid).second)
                fail(ErrorKind::DuplicateClass, file.path + ": class " + cid.str() + " defined twice");
            ClassRecord record{cid, corpus.project, {}};
            for (auto& member : cls.ast.children) {
                if (member.type != NodeType::MethodDeclaration) continue;
                MethodRecord m;
                m.owner = cid;
                m.name = member.children.at(1).token;
                for (const auto& ch : member.children)
                    if (ch.type == NodeType::Parameter) m.param_types.push_back(ch.children.at(0).token);
                m.id = make_method_id(project, class_path, make_signature(m.name, m.param_types));
                m.body_present = true;
                if (exclude && std::regex_match(m.name, *exclude)) {
                    ++corpus.diagnostics.excluded_methods;
                    continue;
                }
                if (corpus.methods.count(m.id))
                    fail(ErrorKind::DuplicateMethodSignature, file.path + ": method " + m.id.str() + " defined twice");
                record.methods.push_back(m.id);
                MethodId id = m.id;
                corpus.methods.emplace(std::move(id), MethodEntry{std::move(m), std::move(member), std::nullopt});
            }
            corpus.classes.push_back(std::move(record));
        }
    }
    detail::resolve_calls(corpus);
    detail::finalize_classes(corpus);
    return corpus;
}

/// Reads the facts JSONL stream. With `base`, records are merged into an existing
/// (usually parsed) corpus; a path_context for a parsed method raises MixedModes.
inline Corpus ingest_facts(std::string_view text, std::optional<Corpus> base = std::nullopt) {
    using nlohmann::json;
    Corpus corpus = base ? std::move(*base) : Corpus{};
    std::map<ClassId, std::size_t> class_index;
    for (std::size_t i = 0; i < corpus.classes.size(); ++i) class_index[corpus.classes[i].id] = i;

    std::size_t line_no = 0;
    std::istringstream in{std::string(text)};
    std::string line;
    auto malformed = [&](const std::string& why) {
        fail(ErrorKind::MalformedRecord, "line " + std::to_string(line_no) + ": " + why);
    };
    auto get_string = [&](const json& rec, const char* key) -> std::string {
        auto it = rec.find(key);
        if (it == rec.end() || !it->is_string()) malformed(std::string("missing string field '") + key + "'");
        return it->get<std::string>();
    };

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        json rec;
        try {
            rec = json::parse(line);
        } catch (const json::exception& e) {
            malformed(std::string("invalid JSON: ") + e.what());
        }
        if (!rec.is_object()) malformed("record is not an object");
        const std::string kind = get_string(rec, "kind");
        if (kind == "class") {
            ClassId id(get_string(rec, "id"));
            ProjectId project(get_string(rec, "project"));
            if (class_index.count(id)) malformed("duplicate class " + id.str());
            class_index[id] = corpus.classes.size();
            corpus.classes.push_back({id, project, {}});
        } else if (kind == "method") {
            MethodId id(get_string(rec, "id"));
            ClassId owner(get_string(rec, "class"));
            auto cls = class_index.find(owner);
            if (cls == class_index.end())
                fail(ErrorKind::DanglingReference, "line " + std::to_string(line_no) + ": class " + owner.str());
            if (corpus.methods.count(id)) malformed("duplicate method " + id.str());
            MethodRecord m;
            m.id = id;
            m.owner = owner;
            m.name = get_string(rec, "name");
            if (m.name.empty()) malformed("empty method name");
            if (auto p = rec.find("params"); p != rec.end()) {
                if (!p->is_array()) malformed("'params' must be an array");
                for (const auto& t : *p) {
                    if (!t.is_string()) malformed("'params' entries must be strings");
                    m.param_types.push_back(t.get<std::string>());
                }
            }
            m.body_present = false;
            try {
                if (owner_of(id) != owner) malformed("method " + id.str() + " does not belong to " + owner.str());
            } catch (const Error& e) {
                if (e.kind() == ErrorKind::MalformedRecord) throw;
                malformed(e.what());
            }
            PathSet ps{id, {}, rec.value("paths_truncated", false)};
            corpus.classes[cls->second].methods.push_back(id);
            corpus.methods.emplace(id, MethodEntry{std::move(m), std::nullopt, std::move(ps)});
        } else if (kind == "call") {
            MethodId src(get_string(rec, "src")), dst(get_string(rec, "dst"));
            for (const auto* id : {&src, &dst})
                if (!corpus.methods.count(*id))
                    fail(ErrorKind::DanglingReference, "line " + std::to_string(line_no) + ": method " + id->str());
            corpus.raw_calls.emplace_back(src, dst);
        } else if (kind == "path_context") {
            MethodId id(get_string(rec, "method"));
            auto it = corpus.methods.find(id);
            if (it == corpus.methods.end())
                fail(ErrorKind::DanglingReference, "line " + std::to_string(line_no) + ": method " + id.str());
            if (it->second.ast)
                fail(ErrorKind::MixedModes, "line " + std::to_string(line_no) + ": method " + id.str() +
                                                " has both an AST and path_context records");
            PathContext ctx;
            ctx.start = get_string(rec, "start");
            ctx.end = get_string(rec, "end");
            auto nodes = rec.find("nodes");
            if (nodes == rec.end() || !nodes->is_array() || nodes->empty()) malformed("'nodes' must be a non-empty array");
            for (const auto& n : *nodes) {
                if (!n.is_string()) malformed("'nodes' entries must be strings");
                try {
                    ctx.steps.push_back(decode_step(n.get<std::string>()));
                } catch (const Error& e) {
                    malformed(e.what());
                }
            }
            if (!it->second.fact_contexts) it->second.fact_contexts = PathSet{id, {}, false};
            it->second.fact_contexts->contexts.push_back(std::move(ctx));
        } else {
            malformed("unknown kind '" + kind + "'");
        }
    }
    detail::finalize_classes(corpus);
    return corpus;
}

inline nlohmann::json path_context_record(const MethodId& method, const PathContext& ctx) {
    nlohmann::json nodes = nlohmann::json::array();
    for (const auto& s : ctx.steps) nodes.push_back(encode_step(s));
    return {{"kind", "path_context"}, {"method", method.str()}, {"start", ctx.start}, {"nodes", nodes}, {"end", ctx.end}};
}

/// Writes the corpus (and optionally mined path sets) as facts JSONL; ingest_facts
/// of the result reproduces classes, methods, calls and path sets.
inline std::string export_facts(const Corpus& c, const std::vector<PathSet>& pathsets = {}) {
    using nlohmann::json;
    std::map<MethodId, const PathSet*> by_method;
    for (const auto& ps : pathsets) by_method[ps.method] = &ps;
    std::string out;
    for (const auto& cls : c.classes)
        out += json{{"kind", "class"}, {"id", cls.id.str()}, {"project", cls.project.str()}}.dump() + "\n";
    for (const auto& [id, entry] : c.methods) {
        json rec{{"kind", "method"}, {"id", id.str()}, {"class", entry.record.owner.str()}, {"name", entry.record.name}};
        if (!entry.record.param_types.empty()) rec["params"] = entry.record.param_types;
        const PathSet* ps = by_method.count(id) ? by_method[id] : (entry.fact_contexts ? &*entry.fact_contexts : nullptr);
        if (ps && ps->truncated) rec["paths_truncated"] = true;
        out += rec.dump() + "\n";
    }
    for (const auto& [src, dst] : c.raw_calls)
        out += json{{"kind", "call"}, {"src", src.str()}, {"dst", dst.str()}}.dump() + "\n";
    for (const auto& [id, entry] : c.methods) {
        const PathSet* ps = by_method.count(id) ? by_method[id] : (entry.fact_contexts ? &*entry.fact_contexts : nullptr);
        if (!ps) continue;
        for (const auto& ctx : ps->contexts) out += path_context_record(id, ctx).dump() + "\n";
    }
    return out;
}

struct CorpusStats {
    std::size_t classes = 0;
    std::size_t methods = 0;
    std::size_t calls = 0;
    std::size_t path_contexts = 0;
    std::size_t unresolved_calls = 0;

    friend bool operator==(const CorpusStats&, const CorpusStats&) = default;
};

inline CorpusStats corpus_stats(const Corpus& c, const std::vector<PathSet>& mined = {}) {
    CorpusStats s;
    s.classes = c.classes.size();
    s.methods = c.methods.size();
    s.calls = c.raw_calls.size();
    s.unresolved_calls = c.diagnostics.unresolved_calls;
    for (const auto& [id, entry] : c.methods)
        if (entry.fact_contexts) s.path_contexts += entry.fact_contexts->contexts.size();
    for (const auto& ps : mined) s.path_contexts += ps.contexts.size();
    return s;
}

inline std::string format_stats(const CorpusStats& s) {
    return "classes: " + std::to_string(s.classes) + "\nmethods: " + std::to_string(s.methods) +
           "\ncalls: " + std::to_string(s.calls) + "\npath_contexts: " + std::to_string(s.path_contexts) +
           "\nunresolved_calls: " + std::to_string(s.unresolved_calls) + "\n";
}

} // namespace rmove
