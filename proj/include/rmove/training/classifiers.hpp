#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "rmove/embedding.hpp"
#include "rmove/error.hpp"
#include "rmove/rng.hpp"
#include "rmove/training/tree.hpp"

namespace rmove::training {

enum class Kind { DT, NB, SVM, LR, RF, GBT };

inline constexpr std::array<Kind, 6> kAllKinds = {Kind::DT, Kind::NB, Kind::SVM, Kind::LR, Kind::RF, Kind::GBT};

inline std::string to_string(Kind k) {
    switch (k) {
    case Kind::DT: return "DT";
    case Kind::NB: return "NB";
    case Kind::SVM: return "SVM";
    case Kind::LR: return "LR";
    case Kind::RF: return "RF";
    case Kind::GBT: return "GBT";
    }
    return "?";
}

inline Kind kind_from_string(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    if (s == "XGB") s = "GBT";
    for (auto k : kAllKinds)
        if (to_string(k) == s) return k;
    fail(ErrorKind::InvalidConfig, "unknown classifier '" + s + "'");
}

/// Rows of X with 0/1 labels.
struct Dataset {
    Matrix X;
    std::vector<int> y;

    std::size_t size() const noexcept { return y.size(); }
    std::size_t positives() const { return static_cast<std::size_t>(std::count(y.begin(), y.end(), 1)); }

    Dataset subset(const std::vector<std::size_t>& idx) const {
        Dataset d;
        d.X.resize(static_cast<Eigen::Index>(idx.size()), X.cols());
        for (std::size_t i = 0; i < idx.size(); ++i) {
            d.X.row(static_cast<Eigen::Index>(i)) = X.row(static_cast<Eigen::Index>(idx[i]));
            d.y.push_back(y[idx[i]]);
        }
        return d;
    }
};

/// Named numeric hyper-parameters; missing keys take the kind's default.
using Hyper = std::map<std::string, double>;

inline Hyper default_hyper(Kind k) {
    switch (k) {
    case Kind::DT: return {{"max_depth", 0}, {"min_samples_leaf", 1}};
    case Kind::NB: return {{"var_smoothing", 1e-9}};
    case Kind::SVM: return {{"lambda", 1e-3}, {"epochs", 50}};
    case Kind::LR: return {{"C", 1.0}, {"max_iter", 100}};
    case Kind::RF: return {{"n_trees", 100}, {"max_depth", 0}, {"max_features", 0}, {"bootstrap", 1}};
    case Kind::GBT: return {{"n_rounds", 100}, {"learning_rate", 0.1}, {"max_depth", 3}};
    }
    return {};
}

/// Grids searched when tuning is on. 0 depth means unlimited; 0 max_features means sqrt.
inline std::vector<Hyper> default_grid(Kind k) {
    std::vector<Hyper> g;
    switch (k) {
    case Kind::DT:
        for (double d : {4.0, 8.0, 0.0})
            for (double l : {1.0, 2.0, 5.0}) g.push_back({{"max_depth", d}, {"min_samples_leaf", l}});
        break;
    case Kind::NB:
        for (double v : {1e-9, 1e-6, 1e-3}) g.push_back({{"var_smoothing", v}});
        break;
    case Kind::SVM:
        for (double l : {1e-4, 1e-3, 1e-2, 1e-1}) g.push_back({{"lambda", l}, {"epochs", 50}});
        break;
    case Kind::LR:
        for (double c : {0.01, 0.1, 1.0, 10.0, 100.0}) g.push_back({{"C", c}, {"max_iter", 100}});
        break;
    case Kind::RF:
        for (double n : {50.0, 100.0, 200.0})
            for (double d : {8.0, 16.0, 0.0})
                g.push_back({{"n_trees", n}, {"max_depth", d}, {"max_features", 0}, {"bootstrap", 1}});
        break;
    case Kind::GBT:
        for (double n : {50.0, 100.0, 200.0})
            for (double lr : {0.05, 0.1, 0.3}) g.push_back({{"n_rounds", n}, {"learning_rate", lr}, {"max_depth", 3}});
        break;
    }
    return g;
}

inline Hyper merged(Kind k, const Hyper& h) {
    Hyper out = default_hyper(k);
    for (const auto& [key, v] : h) {
        if (!out.count(key)) fail(ErrorKind::InvalidConfig, "unknown hyper-parameter '" + key + "' for " + to_string(k));
        out[key] = v;
    }
    return out;
}

inline std::size_t count_param(const Hyper& h, const std::string& key) {
    const double v = h.at(key);
    if (v < 0 || !std::isfinite(v)) fail(ErrorKind::InvalidConfig, key + " must be a non-negative count");
    return static_cast<std::size_t>(v);
}

inline double sigmoid(double z) {
    if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

// ---------------------------------------------------------------------------

struct DecisionTree {
    Tree tree;

    static DecisionTree fit(const Dataset& d, const Hyper& h, Rng& rng) {
        std::vector<double> t(d.y.begin(), d.y.end());
        std::vector<std::size_t> rows(d.size());
        std::iota(rows.begin(), rows.end(), 0);
        TreeParams p;
        p.max_depth = count_param(h, "max_depth");
        p.min_samples_leaf = std::max<std::size_t>(1, count_param(h, "min_samples_leaf"));
        return {Tree::fit(d.X, t, rows, p, rng)};
    }
    double proba(const Eigen::Ref<const Eigen::RowVectorXd>& x) const { return tree.predict(x); }
    nlohmann::json to_json() const { return {{"tree", tree.to_json()}}; }
    static DecisionTree from_json(const nlohmann::json& j) { return {Tree::from_json(j.at("tree"))}; }
};

struct RandomForest {
    std::vector<Tree> trees;

    static RandomForest fit(const Dataset& d, const Hyper& h, Rng& rng) {
        std::vector<double> t(d.y.begin(), d.y.end());
        const std::size_t n_trees = std::max<std::size_t>(1, count_param(h, "n_trees"));
        TreeParams p;
        p.max_depth = count_param(h, "max_depth");
        const std::size_t F = static_cast<std::size_t>(d.X.cols());
        const std::size_t mf = count_param(h, "max_features");
        p.max_features = mf == 0 ? std::max<std::size_t>(1, static_cast<std::size_t>(std::sqrt(static_cast<double>(F))))
                                 : std::min(mf, F);
        const bool bootstrap = h.at("bootstrap") != 0.0;
        RandomForest f;
        for (std::size_t k = 0; k < n_trees; ++k) {
            Rng tr = rng.split(static_cast<std::uint64_t>(k));
            std::vector<std::size_t> rows(d.size());
            if (bootstrap)
                for (auto& r : rows) r = tr.below(d.size());
            else
                std::iota(rows.begin(), rows.end(), 0);
            f.trees.push_back(Tree::fit(d.X, t, std::move(rows), p, tr));
        }
        return f;
    }
    double proba(const Eigen::Ref<const Eigen::RowVectorXd>& x) const {
        double s = 0;
        for (const auto& t : trees) s += t.predict(x);
        return s / static_cast<double>(trees.size());
    }
    nlohmann::json to_json() const {
        nlohmann::json a = nlohmann::json::array();
        for (const auto& t : trees) a.push_back(t.to_json());
        return {{"trees", a}};
    }
    static RandomForest from_json(const nlohmann::json& j) {
        RandomForest f;
        for (const auto& t : j.at("trees")) f.trees.push_back(Tree::from_json(t));
        return f;
    }
};

/// Gradient-boosted depth-limited regression trees on the logistic loss, leaf
/// values by one Newton step.
struct GradientBoosting {
    double base = 0.0;
    double rate = 0.1;
    std::vector<Tree> trees;

    static GradientBoosting fit(const Dataset& d, const Hyper& h, Rng& rng) {
        GradientBoosting g;
        g.rate = h.at("learning_rate");
        const double pos = static_cast<double>(d.positives()), n = static_cast<double>(d.size());
        const double prior = std::clamp(pos / n, 1e-6, 1 - 1e-6);
        g.base = std::log(prior / (1 - prior));
        TreeParams p;
        p.max_depth = count_param(h, "max_depth");
        std::vector<double> F(d.size(), g.base), resid(d.size()), hess(d.size());
        std::vector<std::size_t> rows(d.size());
        std::iota(rows.begin(), rows.end(), 0);
        const std::size_t rounds = count_param(h, "n_rounds");
        for (std::size_t m = 0; m < rounds; ++m) {
            for (std::size_t i = 0; i < d.size(); ++i) {
                const double pr = sigmoid(F[i]);
                resid[i] = d.y[i] - pr;
                hess[i] = pr * (1 - pr);
            }
            auto newton = [&](const std::vector<std::size_t>& idx) {
                double num = 0, den = 0;
                for (auto i : idx) {
                    num += resid[i];
                    den += hess[i];
                }
                return den < 1e-12 ? 0.0 : num / den;
            };
            Rng tr = rng.split(static_cast<std::uint64_t>(m));
            g.trees.push_back(Tree::fit(d.X, resid, rows, p, tr, newton));
            for (std::size_t i = 0; i < d.size(); ++i)
                F[i] += g.rate * g.trees.back().predict(d.X.row(static_cast<Eigen::Index>(i)));
        }
        return g;
    }
    double margin(const Eigen::Ref<const Eigen::RowVectorXd>& x) const {
        double f = base;
        for (const auto& t : trees) f += rate * t.predict(x);
        return f;
    }
    double proba(const Eigen::Ref<const Eigen::RowVectorXd>& x) const { return sigmoid(margin(x)); }
    nlohmann::json to_json() const {
        nlohmann::json a = nlohmann::json::array();
        for (const auto& t : trees) a.push_back(t.to_json());
        return {{"base", base}, {"rate", rate}, {"trees", a}};
    }
    static GradientBoosting from_json(const nlohmann::json& j) {
        GradientBoosting g;
        g.base = j.at("base").get<double>();
        g.rate = j.at("rate").get<double>();
        for (const auto& t : j.at("trees")) g.trees.push_back(Tree::from_json(t));
        return g;
    }
};

/// Gaussian naive Bayes with population variances plus var_smoothing * max variance.
struct GaussianNB {
    std::array<double, 2> log_prior{};
    std::array<std::vector<double>, 2> mean, var;

    static GaussianNB fit(const Dataset& d, const Hyper& h, Rng&) {
        GaussianNB nb;
        const auto F = static_cast<std::size_t>(d.X.cols());
        double max_var = 0;
        for (std::size_t f = 0; f < F; ++f) {
            const auto col = d.X.col(static_cast<Eigen::Index>(f));
            const double mu = col.mean();
            max_var = std::max(max_var, (col.array() - mu).square().mean());
        }
        const double eps = h.at("var_smoothing") * max_var;
        for (int c = 0; c < 2; ++c) {
            std::vector<std::size_t> idx;
            for (std::size_t i = 0; i < d.size(); ++i)
                if (d.y[i] == c) idx.push_back(i);
            const double nc = static_cast<double>(idx.size());
            nb.log_prior[static_cast<std::size_t>(c)] = std::log(nc / static_cast<double>(d.size()));
            auto& mu = nb.mean[static_cast<std::size_t>(c)];
            auto& vr = nb.var[static_cast<std::size_t>(c)];
            mu.assign(F, 0.0);
            vr.assign(F, 0.0);
            for (auto i : idx)
                for (std::size_t f = 0; f < F; ++f) mu[f] += d.X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(f));
            for (auto& m : mu) m /= nc;
            for (auto i : idx)
                for (std::size_t f = 0; f < F; ++f) {
                    const double dx = d.X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(f)) - mu[f];
                    vr[f] += dx * dx;
                }
            for (auto& v : vr) v = v / nc + eps;
            for (auto& v : vr)
                if (v <= 0) v = std::numeric_limits<double>::min(); // all features constant
        }
        return nb;
    }
    double log_joint(int c, const Eigen::Ref<const Eigen::RowVectorXd>& x) const {
        const auto k = static_cast<std::size_t>(c);
        double s = log_prior[k];
        for (std::size_t f = 0; f < mean[k].size(); ++f) {
            const double dx = x(static_cast<Eigen::Index>(f)) - mean[k][f];
            s -= 0.5 * std::log(2 * M_PI * var[k][f]) + dx * dx / (2 * var[k][f]);
        }
        return s;
    }
    double proba(const Eigen::Ref<const Eigen::RowVectorXd>& x) const {
        return sigmoid(log_joint(1, x) - log_joint(0, x));
    }
    nlohmann::json to_json() const {
        return {{"log_prior", log_prior}, {"mean", mean}, {"var", var}};
    }
    static GaussianNB from_json(const nlohmann::json& j) {
        GaussianNB nb;
        nb.log_prior = j.at("log_prior").get<std::array<double, 2>>();
        nb.mean = j.at("mean").get<std::array<std::vector<double>, 2>>();
        nb.var = j.at("var").get<std::array<std::vector<double>, 2>>();
        return nb;
    }
};

/// L2-regularized logistic regression (penalty 1/(2C) |w|^2, intercept free),
/// fitted by damped Newton steps.
struct LogisticRegression {
    Vector w;
    double b = 0.0;

    static double objective(const Dataset& d, const Vector& w, double b, double C) {
        double s = 0.5 / C * w.squaredNorm();
        for (std::size_t i = 0; i < d.size(); ++i) {
            const double z = d.X.row(static_cast<Eigen::Index>(i)).dot(w) + b;
            // log(1 + exp(-y' z)) with y' in {-1, +1}
            const double m = d.y[i] ? z : -z;
            s += m > 0 ? std::log1p(std::exp(-m)) : -m + std::log1p(std::exp(m));
        }
        return s;
    }

    static LogisticRegression fit(const Dataset& d, const Hyper& h, Rng&) {
        const double C = h.at("C");
        if (!(C > 0)) fail(ErrorKind::InvalidConfig, "C must be positive");
        const auto F = d.X.cols();
        Vector theta = Vector::Zero(F + 1); // weights then intercept
        Matrix A(static_cast<Eigen::Index>(d.size()), F + 1);
        A.leftCols(F) = d.X;
        A.col(F).setOnes();
        Vector reg = Vector::Constant(F + 1, 1.0 / C);
        reg(F) = 0.0;
        const std::size_t iters = count_param(h, "max_iter");
        double obj = objective(d, theta.head(F), theta(F), C);
        for (std::size_t it = 0; it < iters; ++it) {
            const Vector z = A * theta;
            Vector g = reg.cwiseProduct(theta);
            Vector wts(z.size());
            for (Eigen::Index i = 0; i < z.size(); ++i) {
                const double p = sigmoid(z(i));
                g += (p - d.y[static_cast<std::size_t>(i)]) * A.row(i).transpose();
                wts(i) = std::max(p * (1 - p), 1e-12);
            }
            Matrix H = A.transpose() * wts.asDiagonal() * A;
            H.diagonal() += reg;
            H.diagonal().array() += 1e-10;
            const Vector step = H.ldlt().solve(g);
            double t = 1.0;
            Vector next = theta - step;
            double nobj = objective(d, next.head(F), next(F), C);
            while (nobj > obj && t > 1e-8) {
                t /= 2;
                next = theta - t * step;
                nobj = objective(d, next.head(F), next(F), C);
            }
            const double gain = obj - nobj;
            if (nobj <= obj) {
                theta = next;
                obj = nobj;
            }
            if (gain < 1e-12 * std::max(1.0, std::abs(obj))) break;
        }
        return {theta.head(F), theta(F)};
    }
    double margin(const Eigen::Ref<const Eigen::RowVectorXd>& x) const { return x.dot(w) + b; }
    double proba(const Eigen::Ref<const Eigen::RowVectorXd>& x) const { return sigmoid(margin(x)); }
    nlohmann::json to_json() const { return {{"w", std::vector<double>(w.data(), w.data() + w.size())}, {"b", b}}; }
    static LogisticRegression from_json(const nlohmann::json& j) {
        const auto w = j.at("w").get<std::vector<double>>();
        return {Eigen::Map<const Vector>(w.data(), static_cast<Eigen::Index>(w.size())), j.at("b").get<double>()};
    }
};

/// Linear SVM trained with Pegasos SGD on the hinge loss; probabilities from a
/// Platt sigmoid fitted on the training margins.
struct LinearSVM {
    Vector w;
    double b = 0.0;
    double platt_a = -1.0, platt_b = 0.0; // p = 1 / (1 + exp(a f + b))

    static std::pair<double, double> fit_platt(const std::vector<double>& f, const std::vector<int>& y) {
        // Platt's targets with the prior correction, Newton on (a, b)
        double np = 0, nn = 0;
        for (int v : y) (v ? np : nn) += 1;
        const double hi = (np + 1) / (np + 2), lo = 1 / (nn + 2);
        double a = 0, b = std::log((nn + 1) / (np + 1));
        auto loss = [&](double A, double B) {
            double s = 0;
            for (std::size_t i = 0; i < f.size(); ++i) {
                const double t = y[i] ? hi : lo;
                const double z = A * f[i] + B;
                // -t log p - (1-t) log(1-p), p = sigmoid(-z)
                s += z >= 0 ? t * z + std::log1p(std::exp(-z)) : (t - 1) * z + std::log1p(std::exp(z));
            }
            return s;
        };
        double cur = loss(a, b);
        for (int it = 0; it < 100; ++it) {
            double g1 = 0, g2 = 0, h11 = 1e-12, h22 = 1e-12, h21 = 0;
            for (std::size_t i = 0; i < f.size(); ++i) {
                const double t = y[i] ? hi : lo;
                const double p = sigmoid(-(a * f[i] + b));
                const double d1 = t - p, d2 = p * (1 - p);
                g1 += f[i] * d1;
                g2 += d1;
                h11 += f[i] * f[i] * d2;
                h22 += d2;
                h21 += f[i] * d2;
            }
            const double det = h11 * h22 - h21 * h21;
            if (std::abs(det) < 1e-18) break;
            const double da = (h22 * g1 - h21 * g2) / det, db = (-h21 * g1 + h11 * g2) / det;
            double step = 1.0, next = loss(a - da, b - db);
            while (next > cur && step > 1e-8) {
                step /= 2;
                next = loss(a - step * da, b - step * db);
            }
            if (next > cur) break;
            a -= step * da;
            b -= step * db;
            const double gain = cur - next;
            cur = next;
            if (gain < 1e-12) break;
        }
        return {a, b};
    }

    static LinearSVM fit(const Dataset& d, const Hyper& h, Rng& rng) {
        const double lambda = h.at("lambda");
        if (!(lambda > 0)) fail(ErrorKind::InvalidConfig, "lambda must be positive");
        const auto F = d.X.cols();
        LinearSVM s;
        s.w = Vector::Zero(F);
        std::vector<std::size_t> order(d.size());
        std::iota(order.begin(), order.end(), 0);
        const std::size_t epochs = std::max<std::size_t>(1, count_param(h, "epochs"));
        std::size_t t = 0;
        for (std::size_t e = 0; e < epochs; ++e) {
            rng.shuffle(order);
            for (auto i : order) {
                ++t;
                const double eta = 1.0 / (lambda * static_cast<double>(t + 1));
                const double yi = d.y[i] ? 1.0 : -1.0;
                const auto x = d.X.row(static_cast<Eigen::Index>(i));
                const double m = yi * (x.dot(s.w) + s.b);
                s.w *= (1 - eta * lambda);
                if (m < 1) {
                    s.w += eta * yi * x.transpose();
                    s.b += eta * yi;
                }
            }
        }
        std::vector<double> f(d.size());
        for (std::size_t i = 0; i < d.size(); ++i) f[i] = s.margin(d.X.row(static_cast<Eigen::Index>(i)));
        std::tie(s.platt_a, s.platt_b) = fit_platt(f, d.y);
        return s;
    }
    double margin(const Eigen::Ref<const Eigen::RowVectorXd>& x) const { return x.dot(w) + b; }
    double proba(const Eigen::Ref<const Eigen::RowVectorXd>& x) const {
        return sigmoid(-(platt_a * margin(x) + platt_b));
    }
    nlohmann::json to_json() const {
        return {{"w", std::vector<double>(w.data(), w.data() + w.size())}, {"b", b}, {"platt", {platt_a, platt_b}}};
    }
    static LinearSVM from_json(const nlohmann::json& j) {
        const auto w = j.at("w").get<std::vector<double>>();
        LinearSVM s;
        s.w = Eigen::Map<const Vector>(w.data(), static_cast<Eigen::Index>(w.size()));
        s.b = j.at("b").get<double>();
        s.platt_a = j.at("platt").at(0).get<double>();
        s.platt_b = j.at("platt").at(1).get<double>();
        return s;
    }
};

// ---------------------------------------------------------------------------

/// Any fitted classifier; predicts P(label = 1).
class Classifier {
public:
    using Impl = std::variant<DecisionTree, GaussianNB, LinearSVM, LogisticRegression, RandomForest, GradientBoosting>;

    Classifier() = default;
    Classifier(Kind k, Hyper h, std::size_t dim, Impl impl)
        : kind_(k), hyper_(std::move(h)), dim_(dim), impl_(std::move(impl)) {}

    Kind kind() const noexcept { return kind_; }
    const Hyper& hyper() const noexcept { return hyper_; }
    std::size_t dim() const noexcept { return dim_; }

    double proba(const Eigen::Ref<const Eigen::RowVectorXd>& x) const {
        if (static_cast<std::size_t>(x.size()) != dim_)
            fail(ErrorKind::DimensionMismatch, "feature vector has " + std::to_string(x.size()) + " dims, model expects " +
                                                   std::to_string(dim_));
        const double p = std::visit([&](const auto& m) { return m.proba(x); }, impl_);
        return std::clamp(p, 0.0, 1.0);
    }
    bool predict(const Eigen::Ref<const Eigen::RowVectorXd>& x) const { return proba(x) > 0.5; }

    const Impl& impl() const noexcept { return impl_; }

    nlohmann::json to_json() const {
        return {{"kind", to_string(kind_)},
                {"hyper", hyper_},
                {"dim", dim_},
                {"params", std::visit([](const auto& m) { return m.to_json(); }, impl_)}};
    }

    static Classifier from_json(const nlohmann::json& j) {
        const Kind k = kind_from_string(j.at("kind").get<std::string>());
        const auto& p = j.at("params");
        Impl impl;
        switch (k) {
        case Kind::DT: impl = DecisionTree::from_json(p); break;
        case Kind::NB: impl = GaussianNB::from_json(p); break;
        case Kind::SVM: impl = LinearSVM::from_json(p); break;
        case Kind::LR: impl = LogisticRegression::from_json(p); break;
        case Kind::RF: impl = RandomForest::from_json(p); break;
        case Kind::GBT: impl = GradientBoosting::from_json(p); break;
        }
        return {k, j.at("hyper").get<Hyper>(), j.at("dim").get<std::size_t>(), std::move(impl)};
    }

private:
    Kind kind_ = Kind::RF;
    Hyper hyper_;
    std::size_t dim_ = 0;
    Impl impl_;
};

inline Classifier train_classifier(Kind kind, const Dataset& d, const Hyper& hyper, const Rng& rng) {
    if (d.X.rows() != static_cast<Eigen::Index>(d.size()))
        fail(ErrorKind::DimensionMismatch, "feature rows and labels differ in count");
    if (d.size() < 2) fail(ErrorKind::SingleClassInput, "need at least two samples");
    const auto pos = d.positives();
    if (pos == 0 || pos == d.size()) fail(ErrorKind::SingleClassInput, "training data has a single label");
    const Hyper h = merged(kind, hyper);
    Rng r = rng.split("fit");
    const auto dim = static_cast<std::size_t>(d.X.cols());
    switch (kind) {
    case Kind::DT: return {kind, h, dim, DecisionTree::fit(d, h, r)};
    case Kind::NB: return {kind, h, dim, GaussianNB::fit(d, h, r)};
    case Kind::SVM: return {kind, h, dim, LinearSVM::fit(d, h, r)};
    case Kind::LR: return {kind, h, dim, LogisticRegression::fit(d, h, r)};
    case Kind::RF: return {kind, h, dim, RandomForest::fit(d, h, r)};
    case Kind::GBT: return {kind, h, dim, GradientBoosting::fit(d, h, r)};
    }
    fail(ErrorKind::InvalidConfig, "unknown classifier");
}

} // namespace rmove::training
