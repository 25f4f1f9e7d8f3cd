#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "rmove/error.hpp"

namespace rmove {

/// Every tunable of the pipeline. Defaults follow the published hyper-parameter
/// table where one exists.
struct Config {
    std::uint64_t seed = 42;
    std::int64_t threads = 0; // 0 = deterministic single thread

    // fusion / inference
    double alpha = 0.5;
    double tau = 0.5;
    std::int64_t top_k = 1;
    bool compare_source = true;
    bool linked_only = false;

    // dimensions
    std::int64_t code_dim = 128;
    std::int64_t graph_dim = 128;
    bool strict_dims = true; // enforce d <= |V|/2 for graph embeddings

    // frontend / path mining
    std::string exclude_methods; // ECMAScript regex over method names; empty = keep all
    std::int64_t max_path_length = 9;
    std::int64_t max_path_width = 25;
    std::int64_t max_contexts = 200;
    std::int64_t max_subtokens = 5;
    std::int64_t min_count = 1;

    // code encoders
    std::int64_t token_embed_dim = 128;
    std::int64_t path_embed_dim = 128;
    std::int64_t code2vec_epochs = 20;
    std::int64_t code2seq_epochs = 20;
    std::int64_t code_batch_size = 32;
    double code_lr = 0.01;
    double code_dropout = 0.25;    // on context vectors while training
    bool code_per_project = false; // train one encoder per project instead of pooling

    // random walks + skip-gram
    std::int64_t walk_length = 80;
    std::int64_t walks_per_node = 10;
    std::int64_t window = 10;
    std::int64_t negatives = 5;
    std::int64_t sg_epochs = 5;
    double sg_lr = 0.025;
    double node2vec_p = 0.25;
    double node2vec_q = 0.25;
    std::int64_t walklets_walks = 5;
    std::int64_t walklets_length = 80;
    std::int64_t walklets_scales = 5;
    std::int64_t walklets_window = 1;

    // factorization
    std::int64_t grarep_kstep = 4;
    std::int64_t prone_step = 10;
    double prone_theta = 0.5;
    double prone_mu = 0.2;

    // LINE
    std::int64_t line_order = 3;
    std::int64_t line_negative_ratio = 5;
    std::int64_t line_samples_per_edge = 200;
    double line_lr = 0.025;

    // SDNE
    double sdne_alpha = 1e-6;
    double sdne_beta = 5.0;
    double sdne_nu1 = 1e-5;
    double sdne_nu2 = 1e-4;
    std::int64_t sdne_batch = 200;
    std::int64_t sdne_epochs = 100;
    std::int64_t sdne_hidden = 256;
    double sdne_lr = 0.05;

    // classifiers / evaluation
    std::string classifier = "RF";
    std::int64_t cv_folds = 10;
    std::int64_t cv_repeats = 10;
    bool grid_search = false;
    std::int64_t grid_folds = 3;

    friend bool operator==(const Config&, const Config&) = default;
};

namespace detail {

using ConfigField = std::variant<std::uint64_t Config::*, std::int64_t Config::*, double Config::*,
                                 bool Config::*, std::string Config::*>;

struct ConfigKey {
    std::string_view name;
    ConfigField field;
};

inline const std::vector<ConfigKey>& config_keys() {
    static const std::vector<ConfigKey> keys = {
        {"seed", &Config::seed},
        {"threads", &Config::threads},
        {"alpha", &Config::alpha},
        {"tau", &Config::tau},
        {"top_k", &Config::top_k},
        {"compare_source", &Config::compare_source},
        {"linked_only", &Config::linked_only},
        {"code_dim", &Config::code_dim},
        {"graph_dim", &Config::graph_dim},
        {"strict_dims", &Config::strict_dims},
        {"exclude_methods", &Config::exclude_methods},
        {"max_path_length", &Config::max_path_length},
        {"max_path_width", &Config::max_path_width},
        {"max_contexts", &Config::max_contexts},
        {"max_subtokens", &Config::max_subtokens},
        {"min_count", &Config::min_count},
        {"token_embed_dim", &Config::token_embed_dim},
        {"path_embed_dim", &Config::path_embed_dim},
        {"code2vec_epochs", &Config::code2vec_epochs},
        {"code2seq_epochs", &Config::code2seq_epochs},
        {"code_batch_size", &Config::code_batch_size},
        {"code_lr", &Config::code_lr},
        {"code_dropout", &Config::code_dropout},
        {"code_per_project", &Config::code_per_project},
        {"walk_length", &Config::walk_length},
        {"walks_per_node", &Config::walks_per_node},
        {"window", &Config::window},
        {"negatives", &Config::negatives},
        {"sg_epochs", &Config::sg_epochs},
        {"sg_lr", &Config::sg_lr},
        {"node2vec_p", &Config::node2vec_p},
        {"node2vec_q", &Config::node2vec_q},
        {"walklets_walks", &Config::walklets_walks},
        {"walklets_length", &Config::walklets_length},
        {"walklets_scales", &Config::walklets_scales},
        {"walklets_window", &Config::walklets_window},
        {"grarep_kstep", &Config::grarep_kstep},
        {"prone_step", &Config::prone_step},
        {"prone_theta", &Config::prone_theta},
        {"prone_mu", &Config::prone_mu},
        {"line_order", &Config::line_order},
        {"line_negative_ratio", &Config::line_negative_ratio},
        {"line_samples_per_edge", &Config::line_samples_per_edge},
        {"line_lr", &Config::line_lr},
        {"sdne_alpha", &Config::sdne_alpha},
        {"sdne_beta", &Config::sdne_beta},
        {"sdne_nu1", &Config::sdne_nu1},
        {"sdne_nu2", &Config::sdne_nu2},
        {"sdne_batch", &Config::sdne_batch},
        {"sdne_epochs", &Config::sdne_epochs},
        {"sdne_hidden", &Config::sdne_hidden},
        {"sdne_lr", &Config::sdne_lr},
        {"classifier", &Config::classifier},
        {"cv_folds", &Config::cv_folds},
        {"cv_repeats", &Config::cv_repeats},
        {"grid_search", &Config::grid_search},
        {"grid_folds", &Config::grid_folds},
    };
    return keys;
}

inline std::string format_double(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

inline std::string_view trim(std::string_view s) {
    const auto ws = " \t\r\n";
    auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(std::string_view key, std::string_view text) {
    T v{};
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        fail(ErrorKind::InvalidConfig, "bad value '" + std::string(text) + "' for key '" + std::string(key) + "'");
    return v;
}

} // namespace detail

/// Checks value ranges; throws InvalidConfig.
/// Config counts are signed for parsing; validated ones convert losslessly.
inline std::size_t as_size(std::int64_t v) { return v < 0 ? 0 : static_cast<std::size_t>(v); }

inline void validate(const Config& c) {
    auto require = [](bool ok, const char* what) {
        if (!ok) fail(ErrorKind::InvalidConfig, what);
    };
    require(c.alpha >= 0.0 && c.alpha <= 1.0, "alpha must lie in [0,1]");
    require(c.tau > 0.0 && c.tau <= 1.0, "tau must lie in (0,1]");
    require(c.top_k > 0, "top_k must be positive");
    require(c.threads >= 0, "threads must be non-negative");
    require(c.code_dim > 0 && c.graph_dim > 0, "dimensions must be positive");
    require(c.max_path_length > 0 && c.max_path_width > 0 && c.max_contexts > 0, "path limits must be positive");
    require(c.max_subtokens > 0 && c.min_count > 0, "max_subtokens and min_count must be positive");
    require(c.token_embed_dim > 0 && c.path_embed_dim > 0, "embedding sizes must be positive");
    require(c.code2vec_epochs > 0 && c.code2seq_epochs > 0 && c.code_batch_size > 0, "encoder counts must be positive");
    require(c.code_dropout >= 0.0 && c.code_dropout < 1.0, "code_dropout must lie in [0,1)");
    require(c.code_lr > 0.0 && c.sg_lr > 0.0 && c.line_lr > 0.0 && c.sdne_lr > 0.0, "learning rates must be positive");
    require(c.walk_length > 0 && c.walks_per_node > 0 && c.window > 0 && c.negatives > 0 && c.sg_epochs > 0,
            "walk and skip-gram counts must be positive");
    require(c.node2vec_p > 0.0 && c.node2vec_q > 0.0, "node2vec p and q must be positive");
    require(c.walklets_walks > 0 && c.walklets_length > 0 && c.walklets_scales > 0 && c.walklets_window > 0,
            "walklets counts must be positive");
    require(c.grarep_kstep > 0, "grarep_kstep must be positive");
    require(c.prone_step >= 0, "prone_step must be non-negative");
    require(c.line_order >= 1 && c.line_order <= 3, "line_order must be 1, 2 or 3");
    require(c.line_negative_ratio > 0 && c.line_samples_per_edge > 0, "LINE counts must be positive");
    require(c.sdne_batch > 0 && c.sdne_epochs > 0 && c.sdne_hidden > 0, "SDNE counts must be positive");
    require(c.cv_folds >= 2 && c.cv_repeats > 0 && c.grid_folds >= 2, "cross-validation counts out of range");
}

inline std::string serialize(const Config& c) {
    std::string out;
    for (const auto& key : detail::config_keys()) {
        out.append(key.name).append(" = ");
        std::visit(
            [&](auto member) {
                using T = std::remove_cvref_t<decltype(c.*member)>;
                if constexpr (std::is_same_v<T, bool>) out += (c.*member) ? "true" : "false";
                else if constexpr (std::is_same_v<T, double>) out += detail::format_double(c.*member);
                else if constexpr (std::is_same_v<T, std::string>) out += c.*member;
                else out += std::to_string(c.*member);
            },
            key.field);
        out += '\n';
    }
    return out;
}

/// Parses `key = value` lines over the defaults. `#` starts a comment.
inline Config parse_config(std::string_view text) {
    Config c;
    std::size_t line_no = 0;
    while (!text.empty()) {
        auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string_view::npos)
            fail(ErrorKind::InvalidConfig, "line " + std::to_string(line_no) + ": expected 'key = value'");
        auto key = detail::trim(line.substr(0, eq));
        auto value = detail::trim(line.substr(eq + 1));
        const detail::ConfigKey* found = nullptr;
        for (const auto& k : detail::config_keys())
            if (k.name == key) found = &k;
        if (!found) fail(ErrorKind::InvalidConfig, "line " + std::to_string(line_no) + ": unknown key '" + std::string(key) + "'");
        std::visit(
            [&](auto member) {
                using T = std::remove_cvref_t<decltype(c.*member)>;
                if constexpr (std::is_same_v<T, bool>) {
                    if (value == "true") c.*member = true;
                    else if (value == "false") c.*member = false;
                    else fail(ErrorKind::InvalidConfig, "key '" + std::string(key) + "' expects true/false");
                } else if constexpr (std::is_same_v<T, std::string>) {
                    c.*member = std::string(value);
                } else {
                    c.*member = detail::parse_number<T>(key, value);
                }
            },
            found->field);
    }
    validate(c);
    return c;
}

inline Config load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::Io, "cannot open config file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

} // namespace rmove
