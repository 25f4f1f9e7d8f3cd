#pragma once

#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "rmove/error.hpp"
#include "rmove/ids.hpp"
#include "rmove/path_context.hpp"
#include "rmove/path_miner.hpp"

namespace rmove::code {

inline constexpr int kUnk = 0;
inline constexpr int kPad = 1;
inline constexpr std::string_view kMethodNameMask = "METHOD_NAME";

/// Symbol table with UNK=0 and PAD=1; other symbols are numbered in sorted order.
class SymbolTable {
public:
    SymbolTable() { names_ = {"<UNK>", "<PAD>"}; }

    static SymbolTable from_counts(const std::map<std::string, std::size_t>& counts, std::size_t min_count) {
        SymbolTable t;
        for (const auto& [sym, n] : counts) // std::map iterates in sorted order
            if (n >= min_count) t.add(sym);
        return t;
    }

    int index(const std::string& s) const {
        auto it = index_.find(s);
        return it == index_.end() ? kUnk : it->second;
    }
    const std::string& name(int i) const { return names_.at(static_cast<std::size_t>(i)); }
    std::size_t size() const noexcept { return names_.size(); }
    const std::vector<std::string>& names() const noexcept { return names_; }

    friend bool operator==(const SymbolTable& a, const SymbolTable& b) { return a.names_ == b.names_; }

private:
    void add(const std::string& s) {
        index_.emplace(s, static_cast<int>(names_.size()));
        names_.push_back(s);
    }
    std::vector<std::string> names_;
    std::map<std::string, int> index_;
};

/// Method name as a single label: subtokens joined with '|', e.g. getX -> get|x.
inline std::string target_label(std::string_view method_name) {
    std::string out;
    for (const auto& s : subtokenize(method_name)) {
        if (!out.empty()) out += '|';
        out += s;
    }
    return out.empty() ? std::string(method_name) : out;
}

/// The method's own name would leak the label, so endpoint tokens equal to it are masked.
inline std::string masked_token(const std::string& token, const std::string& method_name) {
    return token == method_name ? std::string(kMethodNameMask) : token;
}

inline std::vector<std::string> token_subtokens(const std::string& token, std::size_t max_subtokens) {
    if (token == kMethodNameMask) return {std::string(kMethodNameMask)};
    auto subs = subtokenize(token);
    if (subs.empty()) subs.push_back(token);
    if (subs.size() > max_subtokens) subs.resize(max_subtokens);
    return subs;
}

struct Vocabulary {
    SymbolTable tokens;
    SymbolTable subtokens;
    SymbolTable paths;
    SymbolTable node_types; // path steps with their direction mark
    SymbolTable targets;
    std::size_t min_count = 1;
    std::size_t max_subtokens = 5;

    friend bool operator==(const Vocabulary&, const Vocabulary&) = default;
};

inline Vocabulary build_vocab(const std::vector<PathSet>& pathsets, std::size_t min_count, std::size_t max_subtokens = 5) {
    if (min_count < 1) fail(ErrorKind::InvalidConfig, "min_count must be >= 1");
    if (pathsets.empty()) fail(ErrorKind::EmptyCorpus, "vocabulary needs at least one method");
    std::map<std::string, std::size_t> tok, sub, path, node, target;
    for (const auto& ps : pathsets) {
        const std::string name = method_name(ps.method);
        ++target[target_label(name)];
        for (const auto& c : ps.contexts) {
            for (const auto* t : {&c.start, &c.end}) {
                const std::string m = masked_token(*t, name);
                ++tok[m];
                for (const auto& s : token_subtokens(m, max_subtokens)) ++sub[s];
            }
            ++path[path_symbol(c)];
            for (const auto& s : c.steps) ++node[encode_step(s)];
        }
    }
    Vocabulary v;
    v.min_count = min_count;
    v.max_subtokens = max_subtokens;
    v.tokens = SymbolTable::from_counts(tok, min_count);
    v.subtokens = SymbolTable::from_counts(sub, min_count);
    v.paths = SymbolTable::from_counts(path, min_count);
    v.node_types = SymbolTable::from_counts(node, min_count);
    v.targets = SymbolTable::from_counts(target, min_count);
    return v;
}

inline nlohmann::json vocab_to_json(const Vocabulary& v) {
    return {{"min_count", v.min_count},          {"max_subtokens", v.max_subtokens},
            {"tokens", v.tokens.names()},         {"subtokens", v.subtokens.names()},
            {"paths", v.paths.names()},           {"node_types", v.node_types.names()},
            {"targets", v.targets.names()}};
}

/// One path context resolved to indices for both encoders.
struct EncodedContext {
    int start = kUnk, path = kUnk, end = kUnk;
    std::vector<int> start_sub, end_sub, nodes;
};

struct EncodedMethod {
    MethodId method;
    int target = kUnk;
    std::vector<EncodedContext> contexts;
};

inline EncodedMethod encode_method(const PathSet& ps, const Vocabulary& v) {
    EncodedMethod m;
    m.method = ps.method;
    const std::string name = method_name(ps.method);
    m.target = v.targets.index(target_label(name));
    for (const auto& c : ps.contexts) {
        EncodedContext e;
        const std::string s = masked_token(c.start, name), t = masked_token(c.end, name);
        e.start = v.tokens.index(s);
        e.end = v.tokens.index(t);
        e.path = v.paths.index(path_symbol(c));
        for (const auto& x : token_subtokens(s, v.max_subtokens)) e.start_sub.push_back(v.subtokens.index(x));
        for (const auto& x : token_subtokens(t, v.max_subtokens)) e.end_sub.push_back(v.subtokens.index(x));
        for (const auto& st : c.steps) e.nodes.push_back(v.node_types.index(encode_step(st)));
        m.contexts.push_back(std::move(e));
    }
    return m;
}

} // namespace rmove::code
