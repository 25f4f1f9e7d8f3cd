#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <optional>
#include <vector>

#include "rmove/eval/metrics.hpp"
#include "rmove/parallel.hpp"
#include "rmove/training/classifiers.hpp"

namespace rmove::training {

/// Test-index sets of a stratified k-fold split. Each label's samples are
/// shuffled and dealt round-robin; negatives continue where positives stopped,
/// so both the per-fold class counts and the fold sizes differ by at most one.
inline std::vector<std::vector<std::size_t>> stratified_folds(const std::vector<int>& y, std::size_t k, Rng rng) {
    if (k < 2) fail(ErrorKind::InvalidConfig, "need at least 2 folds");
    std::vector<std::size_t> pos, neg;
    for (std::size_t i = 0; i < y.size(); ++i) (y[i] ? pos : neg).push_back(i);
    if (y.size() < k || pos.size() < 2 || neg.size() < 2)
        fail(ErrorKind::TooFewSamplesForFolds, std::to_string(y.size()) + " samples (" + std::to_string(pos.size()) +
                                                   " positive) cannot fill " + std::to_string(k) + " stratified folds");
    rng.shuffle(pos);
    rng.shuffle(neg);
    std::vector<std::vector<std::size_t>> folds(k);
    std::size_t next = 0;
    for (auto i : pos) folds[next++ % k].push_back(i);
    for (auto i : neg) folds[next++ % k].push_back(i);
    for (auto& f : folds) std::sort(f.begin(), f.end());
    return folds;
}

/// Stratified folds that never split a group: all samples sharing a group key
/// land in the same fold. Groups holding a positive are dealt first, then the
/// rest, in the same round-robin. With singleton groups this is the plain split.
inline std::vector<std::vector<std::size_t>> grouped_folds(const std::vector<int>& y,
                                                           const std::vector<std::string>& groups, std::size_t k,
                                                           Rng rng) {
    if (groups.empty()) return stratified_folds(y, k, std::move(rng));
    if (groups.size() != y.size()) fail(ErrorKind::DimensionMismatch, "one group key per sample required");
    std::map<std::string, std::vector<std::size_t>> members;
    for (std::size_t i = 0; i < y.size(); ++i) members[groups[i]].push_back(i);
    std::size_t pos = 0;
    for (int v : y) pos += v == 1;
    if (members.size() < k || pos < 2 || y.size() - pos < 2)
        fail(ErrorKind::TooFewSamplesForFolds, std::to_string(members.size()) + " groups cannot fill " +
                                                   std::to_string(k) + " stratified folds");
    // groups with any positive first, like positives before negatives above
    std::vector<const std::vector<std::size_t>*> with_pos, without;
    for (const auto& [key, idx] : members) {
        bool any = false;
        for (auto i : idx) any = any || y[i] == 1;
        (any ? with_pos : without).push_back(&idx);
    }
    rng.shuffle(with_pos);
    rng.shuffle(without);
    std::vector<std::vector<std::size_t>> folds(k);
    std::size_t next = 0;
    for (const auto* g : with_pos) {
        auto& f = folds[next++ % k];
        f.insert(f.end(), g->begin(), g->end());
    }
    for (const auto* g : without) {
        auto& f = folds[next++ % k];
        f.insert(f.end(), g->begin(), g->end());
    }
    for (auto& f : folds) std::sort(f.begin(), f.end());
    return folds;
}

inline std::vector<std::size_t> complement(const std::vector<std::size_t>& test, std::size_t n) {
    std::vector<std::size_t> out;
    std::size_t j = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (j < test.size() && test[j] == i) {
            ++j;
            continue;
        }
        out.push_back(i);
    }
    return out;
}

/// Positive-class precision / recall / F1 of a classifier on a labeled set.
inline EvalResult score_classifier(const Classifier& c, const Dataset& d) {
    std::size_t tp = 0, predicted = 0, actual = 0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        const bool p = c.predict(d.X.row(static_cast<Eigen::Index>(i)));
        predicted += p;
        actual += d.y[i] == 1;
        tp += p && d.y[i] == 1;
    }
    return make_result(tp, predicted, actual);
}

struct GridResult {
    Hyper best;
    std::size_t best_index = 0;
    std::vector<double> mean_f1; // per grid point
    Classifier model;
};

/// Every grid point is scored on the same stratified folds; the highest mean F1
/// wins, earlier grid points winning ties. The winner is refitted on all samples.
inline GridResult grid_search(Kind kind, const Dataset& d, const std::vector<Hyper>& grid, std::size_t folds,
                              const Rng& rng, std::size_t threads = 0, const std::vector<std::string>& groups = {}) {
    if (grid.empty()) fail(ErrorKind::InvalidConfig, "empty hyper-parameter grid");
    const auto split = grouped_folds(d.y, groups, folds, rng.split("grid-folds"));
    std::vector<double> f1(grid.size() * folds);
    parallel_for(f1.size(), threads, [&](std::size_t job) {
        const std::size_t g = job / folds, f = job % folds;
        const Dataset train = d.subset(complement(split[f], d.size()));
        const Dataset test = d.subset(split[f]);
        const auto c = train_classifier(kind, train, grid[g], rng.split("grid-fit").split(g).split(f));
        f1[job] = score_classifier(c, test).f1;
    });
    GridResult r;
    for (std::size_t g = 0; g < grid.size(); ++g) {
        double s = 0;
        for (std::size_t f = 0; f < folds; ++f) s += f1[g * folds + f];
        r.mean_f1.push_back(s / static_cast<double>(folds));
        if (r.mean_f1[g] > r.mean_f1[r.best_index]) r.best_index = g;
    }
    r.best = merged(kind, grid[r.best_index]);
    r.model = train_classifier(kind, d, r.best, rng.split("refit"));
    return r;
}

struct FoldRow {
    std::size_t repeat = 0, fold = 0;
    EvalResult metrics;
    Hyper hyper; // the setting used (tuned per fold when a grid is given)
};

struct CvResult {
    std::vector<FoldRow> rows;
    double precision = 0.0, recall = 0.0, f1 = 0.0; // means over rows
};

struct CvOptions {
    std::size_t folds = 10;
    std::size_t repeats = 10;
    Hyper hyper;                     // used when `grid` is empty
    std::vector<Hyper> grid;         // non-empty: tune inside each outer training split
    std::size_t grid_folds = 3;
    std::size_t threads = 0;
    std::vector<std::string> groups; // optional per-sample keys kept within one fold
};

/// repeats x folds stratified cross-validation. With a grid, the search only
/// sees the outer training folds.
inline CvResult cross_validate(Kind kind, const Dataset& d, const CvOptions& opt, const Rng& rng) {
    std::vector<std::vector<std::vector<std::size_t>>> splits;
    for (std::size_t r = 0; r < opt.repeats; ++r)
        splits.push_back(grouped_folds(d.y, opt.groups, opt.folds, rng.split("folds").split(r)));
    CvResult out;
    out.rows.resize(opt.repeats * opt.folds);
    parallel_for(out.rows.size(), opt.threads, [&](std::size_t job) {
        const std::size_t r = job / opt.folds, f = job % opt.folds;
        const auto& test_idx = splits[r][f];
        const auto train_idx = complement(test_idx, d.size());
        const Dataset train = d.subset(train_idx);
        const Dataset test = d.subset(test_idx);
        const Rng fr = rng.split("fold").split(r).split(f);
        FoldRow row{r, f, {}, {}};
        if (opt.grid.empty()) {
            const auto c = train_classifier(kind, train, opt.hyper, fr);
            row.hyper = c.hyper();
            row.metrics = score_classifier(c, test);
        } else {
            // nested searches run inline; the outer loop already owns the workers
            std::vector<std::string> inner;
            for (auto i : train_idx)
                if (!opt.groups.empty()) inner.push_back(opt.groups[i]);
            const auto g = grid_search(kind, train, opt.grid, opt.grid_folds, fr, 0, inner);
            row.hyper = g.best;
            row.metrics = score_classifier(g.model, test);
        }
        out.rows[job] = std::move(row);
    });
    for (const auto& row : out.rows) {
        out.precision += row.metrics.precision;
        out.recall += row.metrics.recall;
        out.f1 += row.metrics.f1;
    }
    const double n = static_cast<double>(out.rows.size());
    out.precision /= n;
    out.recall /= n;
    out.f1 /= n;
    return out;
}

} // namespace rmove::training
