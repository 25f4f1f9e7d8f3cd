// rmove: staged Move Method recommendation pipeline over on-disk artifacts.
//
//   synth -> extract -> embed-graph / embed-code -> fuse -> gen-data -> train
//         -> recommend -> evaluate
//
// Every stage reads and writes inside --dir and records SHA-256 hashes of its
// inputs and outputs in <dir>/manifest.json.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "rmove/eval/bench.hpp"
#include "rmove/eval/stats.hpp"
#include "rmove/manifest.hpp"
#include "rmove/pipeline.hpp"

namespace fs = std::filesystem;
using namespace rmove;

namespace {

constexpr int kExitUsage = 2, kExitInput = 3, kExitData = 4;

struct StaleInput : std::runtime_error {
    using std::runtime_error::runtime_error;
};

int exit_code(ErrorKind k) {
    switch (k) {
    case ErrorKind::InvalidConfig: return kExitUsage;
    case ErrorKind::Io:
    case ErrorKind::BadFormat:
    case ErrorKind::MalformedRecord:
    case ErrorKind::DanglingReference:
    case ErrorKind::MixedModes:
    case ErrorKind::SyntaxError:
    case ErrorKind::DuplicateClass:
    case ErrorKind::DuplicateMethodSignature:
    case ErrorKind::ComponentContainsSeparator:
    case ErrorKind::EmptyComponent:
    case ErrorKind::NotAMethodAst: return kExitInput;
    default: return kExitData;
    }
}

/// Re-raises `e` with the offending file named, keeping its kind.
[[noreturn]] void fail_in(const std::string& path, const Error& e) {
    std::string msg = e.what();
    const std::string prefix = std::string(to_string(e.kind())) + ": ";
    if (msg.rfind(prefix, 0) == 0) msg.erase(0, prefix.size());
    fail(e.kind(), path + ": " + msg);
}

struct Globals {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::int64_t> threads;
    std::vector<std::string> set;
    bool deterministic = false;
    bool force = false;
    std::string dir = ".";
};

Config make_config(const Globals& g) {
    std::string text = g.config.empty() ? std::string{} : read_file(g.config);
    text += "\n";
    for (const auto& kv : g.set) {
        if (kv.find('=') == std::string::npos)
            fail(ErrorKind::InvalidConfig, "--set expects key=value, got '" + kv + "'");
        text += kv + "\n";
    }
    Config cfg;
    try {
        cfg = parse_config(text);
    } catch (const Error& e) {
        fail_in((g.config.empty() ? std::string("--set") : g.config), e);
    }
    if (g.seed) cfg.seed = *g.seed;
    if (g.threads) cfg.threads = *g.threads;
    if (g.deterministic) {
        cfg.threads = 0;
        setenv("RMOVE_THREADS", "0", 1);
    }
    validate(cfg);
    return cfg;
}

/// Reads and writes of one stage run, checked against and recorded in the manifest.
class Stage {
public:
    Stage(std::string name, const Globals& g, const Config& cfg)
        : name_(std::move(name)), dir_(g.dir), force_(g.force), manifest_(Manifest::load(g.dir)) {
        fs::create_directories(dir_);
        record_.seed = cfg.seed;
        record_.config_hash = sha256_hex(serialize(cfg));
    }

    fs::path at(const std::string& file) const { return dir_ / file; }

    /// Reads a file, hashes it and refuses stale inputs unless --force.
    std::string read(const fs::path& p) {
        std::string data = read_file(p.string());
        const auto key = key_of(p);
        const auto hash = sha256_hex(data);
        const auto bad = manifest_.stale({{key, hash}});
        if (!bad.empty() && !force_)
            throw StaleInput(bad.front() + " changed since it was recorded in the manifest; rerun that stage or pass --force");
        record_.inputs[key] = hash;
        return data;
    }

    EmbeddingTable read_embedding(const fs::path& p) {
        const auto bin = read(p);
        const auto idx = read(p.string() + ".json");
        try {
            return decode_embedding(bin, nlohmann::json::parse(idx));
        } catch (const nlohmann::json::exception& e) {
            fail(ErrorKind::BadFormat, p.string() + ".json: " + e.what());
        } catch (const Error& e) {
            fail_in(p.string(), e);
        }
    }

    Hybrids read_hybrids(const fs::path& p) {
        read(p);
        read(p.string() + ".json");
        return load_hybrids(p.string());
    }

    Corpus read_corpus(const fs::path& p) {
        Corpus c;
        try {
            c = ingest_facts(read(p));
        } catch (const Error& e) {
            fail_in(p.string(), e);
        }
        std::set<std::string> projects;
        for (const auto& cls : c.classes) projects.insert(cls.project.str());
        if (projects.size() == 1) c.project = ProjectId(*projects.begin());
        return c;
    }

    std::vector<MoveMethodTriple> read_truth(const fs::path& p) {
        try {
            return parse_ground_truth(read(p));
        } catch (const Error& e) {
            fail_in(p.string(), e);
        }
    }

    void write(const fs::path& p, const std::string& data) {
        if (p.has_parent_path()) fs::create_directories(p.parent_path());
        write_file(p.string(), data);
        record_.outputs[key_of(p)] = sha256_hex(data);
    }

    void wrote(const fs::path& p) { record_.outputs[key_of(p)] = file_sha256(p.string()); }

    void write_embedding(const EmbeddingTable& t, const fs::path& p) {
        save_embedding(t, p.string());
        wrote(p);
        wrote(p.string() + ".json");
    }

    void commit() {
        manifest_.stages[name_] = record_;
        manifest_.save(dir_);
    }

private:
    std::string key_of(const fs::path& p) const {
        return fs::proximate(fs::absolute(p), fs::absolute(dir_)).lexically_normal().generic_string();
    }

    std::string name_;
    fs::path dir_;
    bool force_;
    Manifest manifest_;
    StageRecord record_;
};

std::vector<SourceFile> read_sources(Stage* stage, const fs::path& root) {
    if (!fs::is_directory(root)) fail(ErrorKind::Io, "source directory " + root.string() + " does not exist");
    std::vector<fs::path> paths;
    for (const auto& e : fs::recursive_directory_iterator(root))
        if (e.is_regular_file() && e.path().extension() == ".java") paths.push_back(e.path());
    std::sort(paths.begin(), paths.end());
    std::vector<SourceFile> files;
    for (const auto& p : paths)
        files.push_back({fs::relative(p, root).generic_string(), stage ? stage->read(p) : read_file(p.string())});
    return files;
}

std::string project_of_dir(const fs::path& src) {
    auto name = fs::absolute(src).lexically_normal().filename().string();
    if (name.empty()) name = fs::absolute(src).lexically_normal().parent_path().filename().string();
    return name.empty() ? "app" : name;
}

std::string format_eval(const EvalResult& r) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "precision %.4f%s  recall %.4f  f1 %.4f  (%zu correct / %zu recommended / %zu moved)",
                  r.precision, r.precision_undefined ? " (undefined)" : "", r.recall, r.f1, r.correct, r.recommended,
                  r.moved);
    return buf;
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

// ---------------------------------------------------------------------------
// stages

struct SynthOpts {
    SmellInjectionSpec spec;
    std::string out;
};

void run_synth(const Globals& g, const Config& cfg, SynthOpts o) {
    Globals here = g;
    here.dir = o.out;
    o.spec.seed = cfg.seed;
    const auto s = generate_smelly_corpus(o.spec);
    Stage stage("synth", here, cfg);
    for (const auto& f : s.files) stage.write(stage.at(o.spec.project) / f.path, f.text);
    stage.write(stage.at("ground_truth.jsonl"), format_ground_truth(s.ground_truth));
    stage.commit();
    std::cout << "synth: " << o.spec.classes << " classes, " << o.spec.classes * o.spec.methods_per_class
              << " methods, " << s.ground_truth.size() << " injected moves -> " << o.out << "\n";
}

struct ExtractOpts {
    std::string src, facts, project;
};

void run_extract(const Globals& g, const Config& cfg, const ExtractOpts& o) {
    Stage stage("extract", g, cfg);
    Corpus c;
    if (!o.facts.empty()) {
        c = stage.read_corpus(o.facts);
    } else {
        const auto files = read_sources(&stage, o.src);
        const auto project = o.project.empty() ? project_of_dir(o.src) : o.project;
        c = parse_source(files, project, cfg.exclude_methods);
    }
    const auto paths = mine_corpora({c}, cfg, Rng(cfg.seed).split("paths"));
    const auto mdg = build_mdg(c);
    stage.write(stage.at("corpus.jsonl"), export_facts(c, paths));
    stage.write(stage.at("mdg.tsv"), export_edge_list(mdg));
    stage.commit();
    std::cout << format_stats(corpus_stats(c, paths));
    if (c.diagnostics.unresolved_calls)
        std::cerr << "extract: " << c.diagnostics.unresolved_calls << " unresolved calls dropped\n";
}

void run_embed_graph(const Globals& g, const Config& cfg, const std::string& technique) {
    const auto t = graph::technique_from_string(technique);
    if (!t) fail(ErrorKind::InvalidConfig, "unknown graph technique '" + technique + "'");
    Stage stage("embed-graph", g, cfg);
    const auto c = stage.read_corpus(stage.at("corpus.jsonl"));
    const auto table = embed_graph_corpora({c}, *t, cfg, Rng(cfg.seed).split("graph"));
    stage.write_embedding(table, stage.at("graph.emb"));
    stage.commit();
    std::cout << "embed-graph: " << graph::to_string(*t) << ", " << table.rows() << " x " << table.dim() << "\n";
}

void run_embed_code(const Globals& g, const Config& cfg, const std::string& encoder) {
    const auto e = code::encoder_from_string(encoder);
    Stage stage("embed-code", g, cfg);
    const auto c = stage.read_corpus(stage.at("corpus.jsonl"));
    const auto paths = mine_corpora({c}, cfg, Rng(cfg.seed).split("paths"));
    const auto table = code::embed_code(e, paths, cfg, Rng(cfg.seed).split("code")).table;
    stage.write_embedding(table, stage.at("code.emb"));
    stage.commit();
    std::cout << "embed-code: " << code::to_string(e) << ", " << table.rows() << " x " << table.dim() << "\n";
}

void run_fuse(const Globals& g, const Config& cfg) {
    Stage stage("fuse", g, cfg);
    const auto c = stage.read_corpus(stage.at("corpus.jsonl"));
    const auto code = stage.read_embedding(stage.at("code.emb"));
    const auto graph = stage.read_embedding(stage.at("graph.emb"));
    const auto h = fuse_corpora({c}, code, graph, cfg.alpha);
    save_hybrids(h, stage.at("hybrids.emb").string());
    stage.wrote(stage.at("hybrids.emb"));
    stage.wrote(stage.at("hybrids.emb.json"));
    stage.commit();
    std::cout << "fuse: " << h.table.rows() << " hybrids of dim " << h.table.dim() << ", alpha " << h.alpha << ", "
              << h.empty_classes.size() << " empty classes\n";
}

void run_gen_data(const Globals& g, const Config& cfg, const std::string& truth) {
    Stage stage("gen-data", g, cfg);
    const auto triples = stage.read_truth(truth);
    const auto h = stage.read_hybrids(stage.at("hybrids.emb"));
    const auto samples = training::generate_training_data(triples, h.table);
    stage.write(stage.at("samples.jsonl"), training::format_samples(samples));
    stage.commit();
    std::cout << "gen-data: " << triples.size() << " triples -> " << samples.size() << " samples\n";
}

struct TrainOpts {
    std::string classifier;
    bool cv = false;
};

void run_train(const Globals& g, Config cfg, const TrainOpts& o) {
    if (!o.classifier.empty()) cfg.classifier = o.classifier;
    const auto kind = training::kind_from_string(cfg.classifier);
    Stage stage("train", g, cfg);
    const auto samples = training::parse_samples(stage.read(stage.at("samples.jsonl")));
    const auto h = stage.read_hybrids(stage.at("hybrids.emb"));
    const auto data = training::to_dataset(samples);
    const Rng rng(cfg.seed);
    const std::size_t threads = worker_count(as_size(cfg.threads));
    std::vector<std::string> groups;
    for (const auto& s : samples) groups.push_back(s.method.str());

    if (o.cv) {
        training::CvOptions opt;
        opt.folds = as_size(cfg.cv_folds);
        opt.repeats = as_size(cfg.cv_repeats);
        opt.grid_folds = as_size(cfg.grid_folds);
        opt.threads = threads;
        opt.groups = groups;
        if (cfg.grid_search) opt.grid = training::default_grid(kind);
        const auto cv = training::cross_validate(kind, data, opt, rng.split("cv"));
        nlohmann::json rows = nlohmann::json::array();
        for (const auto& r : cv.rows) rows.push_back({{"repeat", r.repeat}, {"fold", r.fold}, {"metrics", to_json(r.metrics)}});
        const nlohmann::json j = {{"classifier", training::to_string(kind)}, {"seed", cfg.seed},
                                  {"precision", cv.precision}, {"recall", cv.recall}, {"f1", cv.f1}, {"rows", rows}};
        stage.write(stage.at("cv.json"), j.dump(1) + "\n");
        std::printf("cv %zux%zu: precision %.4f  recall %.4f  f1 %.4f\n", opt.repeats, opt.folds, cv.precision,
                    cv.recall, cv.f1);
    }

    training::Classifier clf;
    if (cfg.grid_search) {
        const auto r = training::grid_search(kind, data, training::default_grid(kind), as_size(cfg.grid_folds),
                                             rng.split("fit"), threads, groups);
        clf = r.model;
        std::cout << "grid search: best point " << r.best_index << " (mean f1 " << r.mean_f1[r.best_index] << ")\n";
    } else {
        clf = training::train_classifier(kind, data, {}, rng.split("fit"));
    }
    const auto model = training::make_model(std::move(clf), h, cfg);
    stage.write(stage.at("model.bin"), training::encode_model(model));
    stage.commit();
    std::cout << "train: " << training::to_string(kind) << " on " << data.size() << " samples ("
              << data.positives() << " positive)\n";
}

struct RecommendOpts {
    std::optional<double> tau;
    std::optional<std::int64_t> top_k;
    bool linked_only = false, no_compare_source = false, quiet = false;
};

void run_recommend(const Globals& g, const Config& cfg, const RecommendOpts& o) {
    Stage stage("recommend", g, cfg);
    const auto c = stage.read_corpus(stage.at("corpus.jsonl"));
    const auto code = stage.read_embedding(stage.at("code.emb"));
    const auto graph = stage.read_embedding(stage.at("graph.emb"));
    const auto model = training::decode_model(stage.read(stage.at("model.bin")));
    model.check_dims(code.dim(), graph.dim());

    const auto t0 = std::chrono::steady_clock::now();
    const auto paths = mine_corpora({c}, cfg, Rng(cfg.seed).split("paths"));
    const auto h = fuse_corpora({c}, code, graph, model.alpha, model.norms);
    auto opt = RecommendOptions::from(cfg);
    if (o.tau) opt.tau = *o.tau;
    if (o.top_k) opt.top_k = as_size(*o.top_k);
    if (o.linked_only) opt.linked_only = true;
    if (o.no_compare_source) opt.compare_source = false;
    if (!(opt.tau > 0.0 && opt.tau <= 1.0) || opt.top_k == 0)
        fail(ErrorKind::InvalidConfig, "tau must lie in (0,1] and top-k be positive");
    const auto recs = recommend_moves(model, c, h, opt, paths);
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();

    stage.write(stage.at("recommendations.jsonl"), format_jsonl(recs));
    stage.commit();
    if (!o.quiet) {
        std::cout << format_text(recs);
    } else {
        const auto sum = summarize(recs);
        std::cout << sum.methods << " methods, " << sum.moves << " moves, " << sum.stays << " stay\n";
    }
    std::fprintf(stderr, "recommend: %zu methods in %.1f ms (%zu threads)\n", recs.size(), ms, opt.threads);
}

void run_evaluate(const Globals& g, const Config& cfg, const std::string& truth) {
    Stage stage("evaluate", g, cfg);
    const auto triples = stage.read_truth(truth);
    std::vector<Recommendation> recs;
    try {
        recs = parse_jsonl(stage.read(stage.at("recommendations.jsonl")));
    } catch (const Error& e) {
        fail_in(stage.at("recommendations.jsonl").string(), e);
    }
    const auto r = compute_metrics(recs, triples);
    auto j = to_json(r);
    j["seed"] = cfg.seed;
    stage.write(stage.at("eval.json"), j.dump(1) + "\n");
    stage.commit();
    std::cout << j.dump() << "\n" << format_eval(r) << "\n";
}

struct BenchOpts {
    std::string src, truth;
    SmellInjectionSpec spec;
    std::string combos = "DeepWalk+Code2Vec";
    std::string classifiers;
    std::string seeds;
};

void run_bench(const Globals& g, const Config& cfg, const BenchOpts& o) {
    std::vector<Combo> combos;
    for (const auto& c : split_list(o.combos)) combos.push_back(combo_from_string(c));
    std::vector<training::Kind> kinds;
    for (const auto& k : split_list(o.classifiers.empty() ? cfg.classifier : o.classifiers))
        kinds.push_back(training::kind_from_string(k));
    std::vector<std::uint64_t> seeds;
    for (const auto& s : split_list(o.seeds)) seeds.push_back(std::stoull(s));
    if (seeds.empty()) seeds.push_back(cfg.seed);
    if (combos.empty() || kinds.empty()) fail(ErrorKind::InvalidConfig, "bench needs at least one combo and classifier");

    Stage stage("bench", g, cfg);
    std::optional<SmellyCorpus> fixed;
    if (!o.src.empty()) {
        if (o.truth.empty()) fail(ErrorKind::InvalidConfig, "--src needs --truth");
        fixed = SmellyCorpus{read_sources(&stage, o.src), stage.read_truth(o.truth), project_of_dir(o.src)};
    }

    std::vector<BenchRow> rows;
    std::map<std::string, std::vector<double>> f1_by_combo;
    for (const auto& combo : combos)
        for (auto kind : kinds)
            for (auto seed : seeds) {
                auto spec = o.spec;
                spec.seed = seed;
                const auto corpus = fixed ? *fixed : generate_smelly_corpus(spec);
                auto run_cfg = cfg;
                run_cfg.seed = seed;
                const auto r = run_experiment(corpus, combo, kind, run_cfg, Rng(seed));
                rows.push_back({combo.name(), training::to_string(kind), r.cv.precision, r.cv.recall, r.cv.f1,
                                r.infer_ms_per_method, seed});
                f1_by_combo[combo.name() + "/" + training::to_string(kind)].push_back(r.cv.f1);
                std::cerr << "bench: " << combo.name() << " " << training::to_string(kind) << " seed " << seed
                          << " f1 " << r.cv.f1 << "\n";
            }
    // timings vary run to run, so the CSV is not hashed into the manifest
    write_file(stage.at("bench.csv").string(), format_csv(rows));
    stage.commit();
    std::cout << format_bench_table(rows);
    if (f1_by_combo.size() >= 2 && seeds.size() >= 2) {
        std::vector<std::vector<double>> groups;
        for (const auto& [name, f1] : f1_by_combo) groups.push_back(f1);
        const auto kw = kruskal_wallis(groups);
        std::printf("Kruskal-Wallis over F1: H %.4f  df %zu  p %.4g\n", kw.h, kw.df, kw.p);
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Move Method refactoring recommendation from fused code and graph embeddings"};
    app.fallthrough();
    app.require_subcommand(1);
    Globals g;
    app.add_option("--config", g.config, "Config file of 'key = value' lines");
    app.add_option("--seed", g.seed, "Master seed (overrides the config)");
    app.add_option("--threads", g.threads, "Worker threads; 0 runs single-threaded (RMOVE_THREADS overrides)");
    app.add_option("--set", g.set, "Override one config key, key=value (repeatable)");
    app.add_flag("--deterministic", g.deterministic, "Single-threaded run with byte-identical artifacts");
    app.add_flag("--force", g.force, "Run even if inputs changed since the manifest recorded them");
    app.add_option("-d,--dir", g.dir, "Artifact directory holding manifest.json")->capture_default_str();

    SynthOpts synth;
    auto* s_synth = app.add_subcommand("synth", "Generate a corpus with injected feature-envy methods");
    s_synth->add_option("--classes", synth.spec.classes, "Classes")->capture_default_str();
    s_synth->add_option("--methods-per-class", synth.spec.methods_per_class, "Methods per class")->capture_default_str();
    s_synth->add_option("--calls", synth.spec.calls_per_method, "Intra-class calls per method")->capture_default_str();
    s_synth->add_option("--moves", synth.spec.injected_moves, "Methods moved to a wrong class")->capture_default_str();
    s_synth->add_option("--project", synth.spec.project, "Project name and source subdirectory")->capture_default_str();
    s_synth->add_option("-o,--out", synth.out, "Output directory")->required();

    ExtractOpts ex;
    auto* s_extract = app.add_subcommand("extract", "Parse sources or ingest facts; write corpus.jsonl and mdg.tsv");
    auto* o_src = s_extract->add_option("--src", ex.src, "Directory of subset-grammar .java files");
    auto* o_facts = s_extract->add_option("--facts", ex.facts, "Facts JSONL file");
    o_src->excludes(o_facts);
    s_extract->add_option("--project", ex.project, "Project name (default: the --src directory name)");

    std::string technique = "DeepWalk";
    auto* s_graph = app.add_subcommand("embed-graph", "Embed the method dependency graph; write graph.emb");
    s_graph->add_option("-t,--technique", technique, "DeepWalk|Node2Vec|Walklets|GraRep|LINE|ProNE|SDNE")
        ->capture_default_str();

    std::string encoder = "Code2Vec";
    auto* s_code = app.add_subcommand("embed-code", "Embed method path contexts; write code.emb");
    s_code->add_option("-e,--encoder", encoder, "Code2Vec|Code2Seq")->capture_default_str();

    auto* s_fuse = app.add_subcommand("fuse", "Normalize and fuse code and graph embeddings; write hybrids.emb");

    std::string gen_truth;
    auto* s_gen = app.add_subcommand("gen-data", "Turn move triples into labeled samples; write samples.jsonl");
    s_gen->add_option("--truth", gen_truth, "Triples JSONL {method,source,target}")->required();

    TrainOpts tr;
    auto* s_train = app.add_subcommand("train", "Fit a classifier on samples.jsonl; write model.bin");
    s_train->add_option("-c,--classifier", tr.classifier, "DT|NB|SVM|LR|RF|GBT (default: config)");
    s_train->add_flag("--cv", tr.cv, "Also cross-validate and write cv.json");

    RecommendOpts rec;
    auto* s_rec = app.add_subcommand("recommend", "Recommend target classes; write recommendations.jsonl");
    s_rec->add_option("--tau", rec.tau, "Move threshold (default: config)");
    s_rec->add_option("--top-k", rec.top_k, "Ranked candidates kept per method (default: config)");
    s_rec->add_flag("--linked-only", rec.linked_only, "Only score classes sharing a call or token with the method");
    s_rec->add_flag("--no-compare-source", rec.no_compare_source, "Do not require beating the source class");
    s_rec->add_flag("-q,--quiet", rec.quiet, "Print only the summary");

    std::string eval_truth;
    auto* s_eval = app.add_subcommand("evaluate", "Score recommendations against ground truth; write eval.json");
    s_eval->add_option("--truth", eval_truth, "Triples JSONL {method,source,target}")->required();

    BenchOpts bench;
    auto* s_bench = app.add_subcommand("bench", "Cross-validate combos x classifiers x seeds; write bench.csv");
    s_bench->add_option("--combos", bench.combos, "Comma list of GRAPH+CODE")->capture_default_str();
    s_bench->add_option("--classifiers", bench.classifiers, "Comma list (default: config)");
    s_bench->add_option("--seeds", bench.seeds, "Comma list (default: --seed)");
    s_bench->add_option("--src", bench.src, "Fixed corpus sources (default: generate per seed)");
    s_bench->add_option("--truth", bench.truth, "Ground truth for --src");
    s_bench->add_option("--classes", bench.spec.classes, "Generated classes")->capture_default_str();
    s_bench->add_option("--methods-per-class", bench.spec.methods_per_class, "Generated methods per class")
        ->capture_default_str();
    s_bench->add_option("--moves", bench.spec.injected_moves, "Generated injected moves")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kExitUsage;
    }
    if (s_extract->parsed() && ex.src.empty() && ex.facts.empty()) {
        std::cerr << "extract: one of --src or --facts is required\n";
        return kExitUsage;
    }

    try {
        const Config cfg = make_config(g);
        if (s_synth->parsed()) run_synth(g, cfg, synth);
        else if (s_extract->parsed()) run_extract(g, cfg, ex);
        else if (s_graph->parsed()) run_embed_graph(g, cfg, technique);
        else if (s_code->parsed()) run_embed_code(g, cfg, encoder);
        else if (s_fuse->parsed()) run_fuse(g, cfg);
        else if (s_gen->parsed()) run_gen_data(g, cfg, gen_truth);
        else if (s_train->parsed()) run_train(g, cfg, tr);
        else if (s_rec->parsed()) run_recommend(g, cfg, rec);
        else if (s_eval->parsed()) run_evaluate(g, cfg, eval_truth);
        else if (s_bench->parsed()) run_bench(g, cfg, bench);
    } catch (const StaleInput& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
    return 0;
}
