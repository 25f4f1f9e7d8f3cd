#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <set>

#include "rmove/training/cv.hpp"
#include "rmove/training/model.hpp"
#include "rmove/training/samples.hpp"

using namespace rmove;
using namespace rmove::training;

namespace {

Dataset make_dataset(std::vector<std::vector<double>> rows, std::vector<int> y) {
    Dataset d;
    d.X.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j)
            d.X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    d.y = std::move(y);
    return d;
}

// {0,1} negative, {10,11} positive
Dataset symmetric_line() { return make_dataset({{0}, {1}, {10}, {11}}, {0, 0, 1, 1}); }

Eigen::RowVectorXd point(std::initializer_list<double> v) {
    Eigen::RowVectorXd x(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double a : v) x(i++) = a;
    return x;
}

/// Two overlapping Gaussian blobs, balanced.
Dataset blobs(std::size_t n, std::size_t dims, double gap, std::uint64_t seed) {
    Rng rng(seed);
    Dataset d;
    d.X.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(dims));
    for (std::size_t i = 0; i < n; ++i) {
        const int label = static_cast<int>(i % 2);
        d.y.push_back(label);
        for (std::size_t j = 0; j < dims; ++j)
            d.X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rng.normal() + (label ? gap : 0.0);
    }
    return d;
}

/// XOR of the signs of two features; a single split cannot beat chance.
Dataset xor_data(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    Dataset d;
    d.X.resize(static_cast<Eigen::Index>(n), 2);
    for (std::size_t i = 0; i < n; ++i) {
        const double a = rng.uniform(-1, 1), b = rng.uniform(-1, 1);
        d.X(static_cast<Eigen::Index>(i), 0) = a;
        d.X(static_cast<Eigen::Index>(i), 1) = b;
        d.y.push_back((a > 0) != (b > 0) ? 1 : 0);
    }
    return d;
}

double accuracy(const Classifier& c, const Dataset& d) {
    std::size_t ok = 0;
    for (std::size_t i = 0; i < d.size(); ++i) ok += c.predict(d.X.row(static_cast<Eigen::Index>(i))) == (d.y[i] == 1);
    return static_cast<double>(ok) / static_cast<double>(d.size());
}

EmbeddingTable hybrid_table(const std::vector<std::string>& ids, std::size_t dim) {
    Matrix m(static_cast<Eigen::Index>(ids.size()), static_cast<Eigen::Index>(dim));
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = static_cast<double>(r * 10 + c);
    return make_table("HYBRID", ids, m);
}

MoveMethodTriple triple(const std::string& cls, const std::string& name, const std::string& target) {
    return make_triple(make_method_id("p", cls, name + "()"), make_class_id("p", cls), make_class_id("p", target));
}

} // namespace

// ---------------------------------------------------------------------------
// samples

TEST(TrainingData, OneTripleGivesOneNegativeAndOnePositive) {
    const auto h = hybrid_table({"p::A", "p::B", "p::A::m()"}, 3);
    const auto s = generate_training_data({triple("A", "m", "B")}, h);
    ASSERT_EQ(s.size(), 2u);
    EXPECT_FALSE(s[0].label);
    EXPECT_EQ(s[0].cls.str(), "p::A");
    EXPECT_TRUE(s[1].label);
    EXPECT_EQ(s[1].cls.str(), "p::B");
    EXPECT_EQ(s[1].features.size(), 6);
    EXPECT_EQ(s[1].features.head(3), h.row("p::A::m()"));
    EXPECT_EQ(s[1].features.tail(3), h.row("p::B"));
}

TEST(TrainingData, SharedSourceDuplicatesTheNegative) {
    const auto h = hybrid_table({"p::A", "p::B", "p::C", "p::A::m()"}, 2);
    const auto s = generate_training_data({triple("A", "m", "B"), triple("A", "m", "C")}, h);
    ASSERT_EQ(s.size(), 4u);
    EXPECT_FALSE(s[0].label);
    EXPECT_FALSE(s[2].label);
    EXPECT_EQ(s[0].features, s[2].features);
    EXPECT_EQ(s[1].cls.str(), "p::B");
    EXPECT_EQ(s[3].cls.str(), "p::C");
}

TEST(TrainingData, CountsOverAllSmallTripleSets) {
    // every multiset of up to 4 triples over 3 methods x 2 targets
    const std::vector<MoveMethodTriple> pool = {triple("A", "m", "B"), triple("A", "m", "C"), triple("A", "n", "B"),
                                                triple("A", "n", "C"), triple("B", "k", "A"), triple("B", "k", "C")};
    const auto h = hybrid_table({"p::A", "p::B", "p::C", "p::A::m()", "p::A::n()", "p::B::k()"}, 2);
    std::size_t cases = 0;
    for (std::size_t k = 0; k <= 4; ++k) {
        std::vector<std::size_t> pick(k, 0);
        while (true) {
            std::vector<MoveMethodTriple> ts;
            for (auto i : pick) ts.push_back(pool[i]);
            const auto s = generate_training_data(ts, h);
            ASSERT_EQ(s.size(), 2 * k);
            std::size_t pos = 0;
            for (std::size_t i = 0; i < s.size(); ++i) {
                pos += s[i].label;
                const auto& t = ts[s[i].triple];
                EXPECT_EQ(s[i].method, t.method);
                EXPECT_EQ(s[i].cls, s[i].label ? t.target_class : t.source_class);
            }
            EXPECT_EQ(pos, k);
            ++cases;
            std::size_t j = 0;
            while (j < k && ++pick[j] == pool.size()) pick[j++] = 0;
            if (j == k) break;
        }
    }
    EXPECT_EQ(cases, 1u + 6 + 36 + 216 + 1296);
}

TEST(TrainingData, MissingHybridNamesTheId) {
    const auto h = hybrid_table({"p::A", "p::A::m()"}, 2);
    try {
        generate_training_data({triple("A", "m", "B")}, h);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::MissingHybrid);
        EXPECT_NE(std::string(e.what()).find("p::B"), std::string::npos);
    }
}

// ---------------------------------------------------------------------------
// classifiers

TEST(NaiveBayes, ClosedFormMeansAndVariances) {
    Rng rng(1);
    const auto c = train_classifier(Kind::NB, symmetric_line(), {}, rng);
    const auto& nb = std::get<GaussianNB>(c.impl());
    EXPECT_DOUBLE_EQ(nb.mean[0][0], 0.5);
    EXPECT_DOUBLE_EQ(nb.mean[1][0], 10.5);
    // population variance plus 1e-9 times the largest feature variance (25.25)
    EXPECT_NEAR(nb.var[0][0], 0.25, 1e-7);
    EXPECT_NEAR(nb.var[1][0], 0.25, 1e-7);
    EXPECT_NEAR(nb.var[0][0], 0.25 + 1e-9 * 25.25, 1e-15);
}

TEST(NaiveBayes, PosteriorIsHalfAtTheSymmetryPoint) {
    Rng rng(1);
    const auto c = train_classifier(Kind::NB, symmetric_line(), {}, rng);
    // the two classes mirror each other around 5.5
    EXPECT_NEAR(c.proba(point({5.5})), 0.5, 1e-12);
    EXPECT_LT(c.proba(point({5.0})), 0.5);
    EXPECT_GT(c.proba(point({6.0})), 0.5);
    for (double t : {0.5, 1.7, 3.0}) EXPECT_NEAR(c.proba(point({5.5 + t})) + c.proba(point({5.5 - t})), 1.0, 1e-9);
}

TEST(LogisticRegression, BoundaryMatchesLikelihoodGrid) {
    Rng rng(1);
    const auto d = symmetric_line();
    const auto c = train_classifier(Kind::LR, d, {{"C", 1.0}}, rng);
    const auto& lr = std::get<LogisticRegression>(c.impl());
    const double boundary = -lr.b / lr.w(0);
    EXPECT_NEAR(boundary, 5.5, 0.1);
    EXPECT_NEAR(c.proba(point({5.5})), 0.5, 1e-6);

    // brute-force minimum of the same penalized likelihood over (w, boundary)
    double best = 1e300, best_t = 0;
    for (int i = 1; i <= 600; ++i) {
        const double w = i * 0.005;
        for (int k = 0; k <= 600; ++k) {
            const double t = 4.0 + k * 0.005;
            Vector wv(1);
            wv << w;
            const double obj = LogisticRegression::objective(d, wv, -w * t, 1.0);
            if (obj < best) {
                best = obj;
                best_t = t;
            }
        }
    }
    EXPECT_NEAR(boundary, best_t, 0.01);
    EXPECT_LE(LogisticRegression::objective(d, lr.w, lr.b, 1.0), best + 1e-9);
}

TEST(DecisionTree, SeparatesTwoPoints) {
    Rng rng(2);
    const auto d = make_dataset({{0, 1}, {1, 0}}, {0, 1});
    const auto c = train_classifier(Kind::DT, d, {}, rng);
    EXPECT_EQ(accuracy(c, d), 1.0);
}

TEST(DecisionTree, GrowsUntilPureWithoutDepthLimit) {
    Rng rng(3);
    const auto d = xor_data(200, 3);
    const auto c = train_classifier(Kind::DT, d, {}, rng);
    EXPECT_EQ(accuracy(c, d), 1.0);
    const auto stump = train_classifier(Kind::DT, d, {{"max_depth", 1}}, rng);
    EXPECT_EQ(std::get<DecisionTree>(stump.impl()).tree.depth(), 1u);
    EXPECT_LT(accuracy(stump, d), 0.75);
}

TEST(DecisionTree, MinSamplesLeafIsRespected) {
    Rng rng(4);
    const auto d = blobs(60, 3, 1.0, 4);
    const auto c = train_classifier(Kind::DT, d, {{"min_samples_leaf", 5}}, rng);
    for (const auto& n : std::get<DecisionTree>(c.impl()).tree.nodes) {
        if (n.feature < 0) {
            EXPECT_GE(n.samples, 5u);
        }
    }
}

TEST(RandomForest, OneFullTreeEqualsTheDecisionTree) {
    Rng rng(5);
    const auto d = blobs(80, 4, 0.8, 5);
    const auto dt = train_classifier(Kind::DT, d, {}, rng);
    const auto rf = train_classifier(Kind::RF, d, {{"n_trees", 1}, {"bootstrap", 0}, {"max_features", 4}}, rng);
    const auto& forest = std::get<RandomForest>(rf.impl());
    ASSERT_EQ(forest.trees.size(), 1u);
    EXPECT_EQ(forest.trees[0], std::get<DecisionTree>(dt.impl()).tree);
}

TEST(RandomForest, DefaultFeatureSubsetIsSqrt) {
    Rng rng(6);
    const auto d = blobs(60, 16, 1.0, 6);
    const auto rf = train_classifier(Kind::RF, d, {{"n_trees", 10}}, rng);
    const auto rf2 = train_classifier(Kind::RF, d, {{"n_trees", 10}}, rng);
    EXPECT_EQ(std::get<RandomForest>(rf.impl()).trees, std::get<RandomForest>(rf2.impl()).trees);
    std::set<int> used;
    for (const auto& t : std::get<RandomForest>(rf.impl()).trees)
        for (const auto& [f, thr] : t.splits()) used.insert(f);
    EXPECT_GT(used.size(), 4u); // trees see different feature subsets
}

TEST(GradientBoosting, OneUnitRoundReproducesDepthThreeTree) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        Rng rng(seed);
        const auto d = blobs(40, 3, 0.7, seed);
        const auto gbt =
            train_classifier(Kind::GBT, d, {{"n_rounds", 1}, {"learning_rate", 1.0}, {"max_depth", 3}}, rng);
        const auto dt = train_classifier(Kind::DT, d, {{"max_depth", 3}}, rng);
        const auto& g = std::get<GradientBoosting>(gbt.impl());
        ASSERT_EQ(g.trees.size(), 1u);
        EXPECT_EQ(g.base, 0.0);
        EXPECT_EQ(g.trees[0].splits(), std::get<DecisionTree>(dt.impl()).tree.splits()) << "seed " << seed;
    }
}

TEST(GradientBoosting, LeafValuesAreNewtonSteps) {
    Rng rng(7);
    const auto d = make_dataset({{0}, {1}, {2}, {3}}, {0, 0, 1, 1});
    const auto c = train_classifier(Kind::GBT, d, {{"n_rounds", 1}, {"learning_rate", 1.0}, {"max_depth", 1}}, rng);
    const auto& g = std::get<GradientBoosting>(c.impl());
    // residuals +-0.5 and hessians 0.25 at the zero prior: leaves +-2
    EXPECT_DOUBLE_EQ(g.trees[0].predict(point({0})), -2.0);
    EXPECT_DOUBLE_EQ(g.trees[0].predict(point({3})), 2.0);
    EXPECT_NEAR(c.proba(point({3})), 1 / (1 + std::exp(-2.0)), 1e-12);
}

TEST(LinearSvm, SeparatesBlobsWithCalibratedProbabilities) {
    Rng rng(8);
    const auto d = blobs(200, 2, 4.0, 8);
    const auto c = train_classifier(Kind::SVM, d, {}, rng);
    EXPECT_GE(accuracy(c, d), 0.95);
    const auto& s = std::get<LinearSVM>(c.impl());
    EXPECT_LT(s.platt_a, 0.0); // larger margins mean higher probability
    EXPECT_GT(c.proba(point({6, 6})), 0.9);
    EXPECT_LT(c.proba(point({-2, -2})), 0.1);
}

class EveryKind : public ::testing::TestWithParam<Kind> {};

TEST_P(EveryKind, ProbabilitiesAreValidAndLabelsFollowThem) {
    Rng rng(9);
    const auto d = blobs(100, 5, 1.5, 9);
    const auto c = train_classifier(GetParam(), d, {}, rng);
    Rng probe(10);
    for (int i = 0; i < 200; ++i) {
        Eigen::RowVectorXd x(5);
        for (Eigen::Index j = 0; j < 5; ++j) x(j) = probe.normal() * 5;
        const double p = c.proba(x);
        EXPECT_GE(p, 0.0);
        EXPECT_LE(p, 1.0);
        EXPECT_EQ(c.predict(x), p > 0.5);
    }
}

TEST_P(EveryKind, BeatsMajorityBaselineOnTrainingData) {
    Rng rng(11);
    const auto d = blobs(100, 5, 1.5, 11);
    const auto c = train_classifier(GetParam(), d, {}, rng);
    EXPECT_GE(accuracy(c, d), 0.8); // majority baseline is 0.5
}

TEST_P(EveryKind, JsonRoundTripKeepsPredictions) {
    Rng rng(12);
    const auto d = blobs(60, 3, 1.0, 12);
    const auto c = train_classifier(GetParam(), d, {}, rng);
    const auto back = Classifier::from_json(nlohmann::json::parse(c.to_json().dump()));
    EXPECT_EQ(back.kind(), c.kind());
    EXPECT_EQ(back.hyper(), c.hyper());
    for (std::size_t i = 0; i < d.size(); ++i) {
        const auto x = d.X.row(static_cast<Eigen::Index>(i));
        EXPECT_EQ(back.proba(x), c.proba(x));
    }
}

TEST_P(EveryKind, RejectsSingleLabelAndWrongDims) {
    Rng rng(13);
    try {
        train_classifier(GetParam(), make_dataset({{0}, {1}, {2}}, {1, 1, 1}), {}, rng);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::SingleClassInput);
    }
    const auto c = train_classifier(GetParam(), symmetric_line(), {}, rng);
    try {
        c.proba(point({1, 2}));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::DimensionMismatch);
    }
}

TEST_P(EveryKind, SameSeedSameModel) {
    const auto d = blobs(60, 4, 1.0, 14);
    const auto a = train_classifier(GetParam(), d, {}, Rng(14));
    const auto b = train_classifier(GetParam(), d, {}, Rng(14));
    EXPECT_EQ(a.to_json(), b.to_json());
}

INSTANTIATE_TEST_SUITE_P(Kinds, EveryKind, ::testing::ValuesIn(kAllKinds),
                         [](const auto& info) { return to_string(info.param); });

TEST(Classifiers, NamesAndHyperValidation) {
    EXPECT_EQ(kind_from_string("rf"), Kind::RF);
    EXPECT_EQ(kind_from_string("XGB"), Kind::GBT);
    EXPECT_THROW(kind_from_string("CNN"), Error);
    Rng rng(1);
    EXPECT_THROW(train_classifier(Kind::LR, symmetric_line(), {{"depth", 3}}, rng), Error);
    EXPECT_THROW(train_classifier(Kind::LR, symmetric_line(), {{"C", 0}}, rng), Error);
    for (auto k : kAllKinds)
        for (const auto& h : default_grid(k)) EXPECT_NO_THROW(merged(k, h));
    EXPECT_EQ(default_grid(Kind::RF).size(), 9u);
}

// ---------------------------------------------------------------------------
// folds, CV, grid search

TEST(StratifiedFolds, TwoFoldsOnFourBalancedSamples) {
    const auto folds = stratified_folds({0, 1, 0, 1}, 2, Rng(1));
    for (const auto& f : folds) {
        ASSERT_EQ(f.size(), 2u);
        const std::vector<int> y = {0, 1, 0, 1};
        EXPECT_EQ(y[f[0]] + y[f[1]], 1);
    }
}

TEST(StratifiedFolds, PartitionAndRatioWithinOne) {
    Rng gen(2);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 4 + gen.below(60), k = 2 + gen.below(std::min<std::size_t>(n - 1, 10));
        std::vector<int> y(n);
        for (auto& v : y) v = gen.uniform() < 0.3 ? 1 : 0;
        y[0] = y[1] = 1;
        y[2] = y[3] = 0;
        const auto folds = stratified_folds(y, k, gen.split(static_cast<std::uint64_t>(trial)));
        ASSERT_EQ(folds.size(), k);
        std::vector<int> seen(n, 0);
        std::size_t lo_p = n, hi_p = 0, lo_n = n, hi_n = 0, lo = n, hi = 0;
        for (const auto& f : folds) {
            std::size_t p = 0;
            for (auto i : f) {
                ++seen[i];
                p += y[i];
            }
            lo_p = std::min(lo_p, p);
            hi_p = std::max(hi_p, p);
            lo_n = std::min(lo_n, f.size() - p);
            hi_n = std::max(hi_n, f.size() - p);
            lo = std::min(lo, f.size());
            hi = std::max(hi, f.size());
        }
        for (int s : seen) EXPECT_EQ(s, 1);
        EXPECT_LE(hi_p - lo_p, 1u);
        EXPECT_LE(hi_n - lo_n, 1u);
        EXPECT_LE(hi - lo, 1u);
    }
}

TEST(StratifiedFolds, TooFewSamples) {
    try {
        stratified_folds({0, 1, 0}, 5, Rng(1));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::TooFewSamplesForFolds);
    }
    EXPECT_THROW(stratified_folds({0, 0, 0, 1}, 2, Rng(1)), Error);
}

TEST(GroupedFolds, GroupsStayTogetherAndCoverEverySample) {
    Rng gen(31);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n_groups = 4 + gen.below(20);
        std::vector<int> y;
        std::vector<std::string> g;
        for (std::size_t k = 0; k < n_groups; ++k) {
            // a move pair: the negative and the positive share the method key
            y.push_back(0);
            y.push_back(1);
            g.push_back("m" + std::to_string(k));
            g.push_back("m" + std::to_string(k));
        }
        const std::size_t folds = 2 + gen.below(std::min<std::size_t>(n_groups - 1, 9));
        const auto split = grouped_folds(y, g, folds, gen.split(static_cast<std::uint64_t>(trial)));
        ASSERT_EQ(split.size(), folds);
        std::map<std::string, std::size_t> home;
        std::vector<int> seen(y.size(), 0);
        for (std::size_t f = 0; f < folds; ++f) {
            EXPECT_FALSE(split[f].empty());
            for (auto i : split[f]) {
                ++seen[i];
                const auto it = home.emplace(g[i], f).first;
                EXPECT_EQ(it->second, f) << g[i];
            }
        }
        for (int s : seen) EXPECT_EQ(s, 1);
    }
}

TEST(GroupedFolds, EmptyKeysFallBackToStratified) {
    const std::vector<int> y = {0, 1, 0, 1, 0, 1, 1, 0};
    EXPECT_EQ(grouped_folds(y, {}, 3, Rng(4)), stratified_folds(y, 3, Rng(4)));
    EXPECT_THROW(grouped_folds(y, {"a", "b"}, 3, Rng(4)), Error);
    try {
        grouped_folds(y, {"a", "a", "a", "a", "b", "b", "b", "b"}, 3, Rng(4));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::TooFewSamplesForFolds);
    }
}

TEST(CrossValidate, TenByTenGivesHundredRows) {
    const auto d = blobs(60, 3, 2.0, 15);
    CvOptions opt;
    opt.hyper = {{"n_trees", 10}};
    const auto r = cross_validate(Kind::RF, d, opt, Rng(15));
    ASSERT_EQ(r.rows.size(), 100u);
    double f1 = 0;
    for (std::size_t i = 0; i < r.rows.size(); ++i) {
        EXPECT_EQ(r.rows[i].repeat, i / 10);
        EXPECT_EQ(r.rows[i].fold, i % 10);
        f1 += r.rows[i].metrics.f1;
    }
    EXPECT_NEAR(r.f1, f1 / 100, 1e-12);
}

TEST(CrossValidate, SeparableDataScoresPerfectly) {
    const auto d = blobs(40, 2, 20.0, 16);
    CvOptions opt;
    opt.folds = 5;
    opt.repeats = 3;
    const auto r = cross_validate(Kind::DT, d, opt, Rng(16));
    EXPECT_EQ(r.f1, 1.0);
    EXPECT_EQ(r.precision, 1.0);
    EXPECT_EQ(r.recall, 1.0);
}

TEST(CrossValidate, ThreadCountDoesNotChangeResults) {
    const auto d = blobs(50, 3, 1.0, 17);
    CvOptions opt;
    opt.folds = 5;
    opt.repeats = 2;
    opt.hyper = {{"n_trees", 5}};
    const auto a = cross_validate(Kind::RF, d, opt, Rng(17));
    opt.threads = 4;
    const auto b = cross_validate(Kind::RF, d, opt, Rng(17));
    ASSERT_EQ(a.rows.size(), b.rows.size());
    for (std::size_t i = 0; i < a.rows.size(); ++i) EXPECT_EQ(a.rows[i].metrics, b.rows[i].metrics);
}

TEST(CrossValidate, NestedGridTunesPerFold) {
    const auto d = xor_data(80, 18);
    CvOptions opt;
    opt.folds = 4;
    opt.repeats = 1;
    opt.grid = {{{"max_depth", 1}}, {{"max_depth", 0}}};
    const auto r = cross_validate(Kind::DT, d, opt, Rng(18));
    ASSERT_EQ(r.rows.size(), 4u);
    for (const auto& row : r.rows) EXPECT_EQ(row.hyper.at("max_depth"), 0.0);
    EXPECT_GT(r.f1, 0.8);
}

TEST(GridSearch, SingletonGridReturnsThatPoint) {
    const auto d = blobs(30, 2, 1.0, 19);
    const auto g = grid_search(Kind::DT, d, {{{"max_depth", 4}, {"min_samples_leaf", 2}}}, 3, Rng(19));
    EXPECT_EQ(g.best_index, 0u);
    EXPECT_EQ(g.best.at("max_depth"), 4.0);
    EXPECT_EQ(g.model.hyper(), g.best);
}

TEST(GridSearch, DominantSettingWinsOnPlantedData) {
    const auto d = xor_data(120, 20);
    const std::vector<Hyper> grid = {{{"max_depth", 1}}, {{"max_depth", 0}}, {{"max_depth", 1}, {"min_samples_leaf", 5}}};
    const auto g = grid_search(Kind::DT, d, grid, 3, Rng(20));
    EXPECT_EQ(g.best_index, 1u);
    EXPECT_GT(g.mean_f1[1], g.mean_f1[0] + 0.2);
}

TEST(GridSearch, TiesGoToTheFirstPointAndSeedsRepeat) {
    const auto d = blobs(40, 3, 1.0, 21);
    const std::vector<Hyper> same = {{{"C", 1.0}}, {{"C", 1.0}}, {{"C", 1.0}}};
    EXPECT_EQ(grid_search(Kind::LR, d, same, 3, Rng(21)).best_index, 0u);
    const auto a = grid_search(Kind::RF, d, default_grid(Kind::RF), 3, Rng(22));
    const auto b = grid_search(Kind::RF, d, default_grid(Kind::RF), 3, Rng(22), 3);
    EXPECT_EQ(a.best_index, b.best_index);
    EXPECT_EQ(a.mean_f1, b.mean_f1);
}

TEST(GridSearch, EmptyGridRejected) { EXPECT_THROW(grid_search(Kind::DT, symmetric_line(), {}, 2, Rng(1)), Error); }

// ---------------------------------------------------------------------------
// persistence

namespace {

Hybrids toy_hybrids() {
    Hybrids h;
    h.norms.code = fit_normalizer(Matrix::Random(5, 2), Family::Code);
    h.norms.graph = fit_normalizer(Matrix::Random(5, 1), Family::Graph);
    h.table.meta = {{"code_tag", "CODE2VEC"}, {"graph_tag", "DEEPWALK"}};
    return h;
}

} // namespace

TEST(Samples, JsonlRoundTripIsExact) {
    const auto h = make_table("HYBRID", {"p::A", "p::A::m()", "p::B"}, (Matrix(3, 2) << 0.1, 1.0 / 3, 2, 3, 4, 5).finished());
    const auto samples = generate_training_data({make_triple(MethodId("p::A::m()"), ClassId("p::A"), ClassId("p::B"))}, h);
    const auto back = parse_samples(format_samples(samples));
    ASSERT_EQ(back.size(), 2u);
    for (std::size_t i = 0; i < 2; ++i) {
        EXPECT_EQ(back[i].features, samples[i].features);
        EXPECT_EQ(back[i].label, samples[i].label);
        EXPECT_EQ(back[i].method, samples[i].method);
        EXPECT_EQ(back[i].cls, samples[i].cls);
    }
    EXPECT_THROW(parse_samples("{\"method\":\"p::A::m()\"}\n"), Error);
}

TEST(ModelFile, RoundTripsAndRefusesOtherDims) {
    const auto h = toy_hybrids();
    const auto d = blobs(40, 6, 1.0, 23);
    Config cfg;
    cfg.seed = 7;
    const auto m = make_model(train_classifier(Kind::GBT, d, {{"n_rounds", 5}}, Rng(23)), h, cfg);
    EXPECT_EQ(m.feature_dim(), 6u);
    const auto path = (std::filesystem::temp_directory_path() / "rmove_model_test.bin").string();
    save_model(m, path);
    EXPECT_EQ(read_file(path).substr(0, 6), "RMMDL1");
    const auto back = load_model(path, 2, 1);
    EXPECT_EQ(back.config, cfg);
    EXPECT_EQ(back.norms, m.norms);
    EXPECT_EQ(back.code_tag, "CODE2VEC");
    for (std::size_t i = 0; i < d.size(); ++i)
        EXPECT_EQ(back.classifier.proba(d.X.row(static_cast<Eigen::Index>(i))),
                  m.classifier.proba(d.X.row(static_cast<Eigen::Index>(i))));
    EXPECT_EQ(encode_model(back), encode_model(m));
    try {
        load_model(path, 3, 1);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::DimensionMismatch);
    }
    std::filesystem::remove(path);
}

TEST(ModelFile, RejectsForeignBytes) {
    EXPECT_THROW(decode_model("RMEMB1xxxx"), Error);
    EXPECT_THROW(decode_model("RMMDL1\xff\x00"), Error);
    const auto h = toy_hybrids();
    const auto d = blobs(20, 4, 1.0, 24);
    EXPECT_THROW(make_model(train_classifier(Kind::NB, d, {}, Rng(24)), h, Config{}), Error);
}
