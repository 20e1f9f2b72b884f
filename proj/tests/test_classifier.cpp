#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "quest/classifier.hpp"
#include "quest/error.hpp"
#include "quest/rng.hpp"

using quest::BinarySvm;
using quest::ConfusionMatrix;
using quest::FeatureMatrix;
using quest::MultiClassModel;
using quest::SvmProblem;
using quest::SvmTrainConfig;

namespace {

// The returned problem aliases `xs`; use it within the same statement or
// while `xs` is still alive.
SvmProblem make_problem(const std::vector<std::vector<double>>& xs,
                        const std::vector<int>& ys) {
    SvmProblem problem;
    problem.dim = xs[0].size();
    for (const auto& row : xs) problem.x.push_back(row.data());
    for (const int y : ys) problem.y.push_back(static_cast<signed char>(y));
    return problem;
}

// Three well-separated 2-D blobs in the positive quadrant (the chi-square
// k-NN expects histogram-like, non-negative features).
FeatureMatrix blob_matrix(quest::Rng& rng, int per_class, double spread = 0.3) {
    const std::vector<std::pair<double, double>> centers = {{2, 2}, {8, 2}, {2, 8}};
    const std::vector<std::string> names = {"alpha", "beta", "gamma"};
    FeatureMatrix matrix;
    matrix.dim = 2;
    for (std::size_t cls = 0; cls < centers.size(); ++cls) {
        for (int i = 0; i < per_class; ++i) {
            const std::vector<double> row = {
                centers[cls].first + spread * rng.next_gaussian(),
                centers[cls].second + spread * rng.next_gaussian()};
            matrix.append_row(row, names[cls], "s" + std::to_string(i % 4));
        }
    }
    return matrix;
}

int count_correct(const BinarySvm& svm, const std::vector<std::vector<double>>& xs,
                  const std::vector<int>& ys) {
    int correct = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double d = svm.decision(xs[i]);
        correct += (d >= 0 ? +1 : -1) == ys[i];
    }
    return correct;
}

}  // namespace

TEST_CASE("train_binary_svm separates a separable axis") {
    const std::vector<std::vector<double>> xs = {{1, 0}, {-1, 0}};
    const auto result = quest::train_binary_svm(make_problem(xs, {+1, -1}), {});

    BinarySvm svm{result.weights, result.bias, "pos", "neg"};
    CHECK(svm.decision(std::vector<double>{2, 0}) > 0.0);
    CHECK(svm.decision(std::vector<double>{-2, 0}) < 0.0);
}

TEST_CASE("train_binary_svm: conflicting duplicate point lands near zero") {
    const std::vector<std::vector<double>> xs = {{1.0, 0.5}, {1.0, 0.5}};
    const auto result = quest::train_binary_svm(make_problem(xs, {+1, -1}), {});
    BinarySvm svm{result.weights, result.bias, "pos", "neg"};
    CHECK(std::fabs(svm.decision(std::vector<double>{1.0, 0.5})) < 1e-3);
}

TEST_CASE("train_binary_svm: XOR stays at or below 3 of 4") {
    const std::vector<std::vector<double>> xs = {{0, 0}, {0, 1}, {1, 0}, {1, 1}};
    const std::vector<int> ys = {+1, -1, -1, +1};
    const auto result = quest::train_binary_svm(make_problem(xs, ys), {});
    BinarySvm svm{result.weights, result.bias, "pos", "neg"};
    CHECK(count_correct(svm, xs, ys) <= 3);
}

TEST_CASE("train_binary_svm: label flip negates weights and bias exactly") {
    quest::Rng rng(51);
    std::vector<std::vector<double>> xs;
    std::vector<int> ys;
    for (int i = 0; i < 12; ++i) {
        xs.push_back({rng.next_gaussian(), rng.next_gaussian(), rng.next_gaussian()});
        ys.push_back(i % 2 == 0 ? +1 : -1);
    }
    const auto direct = quest::train_binary_svm(make_problem(xs, ys), {});

    std::vector<int> flipped = ys;
    for (int& y : flipped) y = -y;
    const auto mirrored = quest::train_binary_svm(make_problem(xs, flipped), {});

    REQUIRE(direct.weights.size() == mirrored.weights.size());
    for (std::size_t i = 0; i < direct.weights.size(); ++i) {
        CHECK(direct.weights[i] == -mirrored.weights[i]);
    }
    CHECK(direct.bias == -mirrored.bias);
}

TEST_CASE("train_binary_svm: dual objective is non-increasing across epochs") {
    quest::Rng rng(52);
    std::vector<std::vector<double>> xs;
    std::vector<int> ys;
    for (int i = 0; i < 40; ++i) {
        const int label = static_cast<int>(rng.next_below(2)) * 2 - 1;
        xs.push_back({label * 0.7 + rng.next_gaussian(), rng.next_gaussian()});
        ys.push_back(label);
    }
    SvmTrainConfig cfg;
    cfg.epochs = 30;
    const auto result = quest::train_binary_svm(make_problem(xs, ys), cfg);
    REQUIRE(!result.epoch_dual_objective.empty());
    for (std::size_t e = 1; e < result.epoch_dual_objective.size(); ++e) {
        CHECK(result.epoch_dual_objective[e] <=
              result.epoch_dual_objective[e - 1] + 1e-9);
    }
}

TEST_CASE("train_binary_svm: degenerate and invalid input") {
    CHECK_THROWS_AS(quest::train_binary_svm(make_problem({{1, 0}, {2, 0}}, {+1, +1}), {}),
                    quest::ConfigError);
    CHECK_THROWS_AS(quest::train_binary_svm(make_problem({{1, 0}}, {0}), {}),
                    quest::ArgumentError);
    SvmTrainConfig bad;
    bad.c = 0.0;
    CHECK_THROWS_AS(quest::train_binary_svm(make_problem({{1, 0}, {-1, 0}}, {+1, -1}), bad),
                    quest::ConfigError);
}

TEST_CASE("train_binary_svm is deterministic per seed") {
    quest::Rng rng(53);
    std::vector<std::vector<double>> xs;
    std::vector<int> ys;
    for (int i = 0; i < 20; ++i) {
        xs.push_back({rng.next_gaussian(), rng.next_gaussian()});
        ys.push_back(i % 2 == 0 ? +1 : -1);
    }
    const auto a = quest::train_binary_svm(make_problem(xs, ys), {});
    const auto b = quest::train_binary_svm(make_problem(xs, ys), {});
    CHECK(a.weights == b.weights);
    CHECK(a.bias == b.bias);
}

TEST_CASE("train_one_vs_one: machine count and training-set accuracy") {
    quest::Rng rng(54);
    const FeatureMatrix data = blob_matrix(rng, 12);
    std::vector<int> all(data.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);

    const MultiClassModel model = quest::train_one_vs_one(data, all, {}, 2);
    CHECK(model.labels == std::vector<std::string>{"alpha", "beta", "gamma"});
    CHECK(model.machines.size() == 3);  // n(n-1)/2

    int correct = 0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        correct += model.predict(data.row(i)) == data.labels[i];
    }
    CHECK(correct == static_cast<int>(data.size()));
}

TEST_CASE("train_one_vs_one is independent of the thread count") {
    quest::Rng rng(55);
    const FeatureMatrix data = blob_matrix(rng, 8);
    std::vector<int> all(data.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);

    const MultiClassModel serial = quest::train_one_vs_one(data, all, {}, 1);
    const MultiClassModel parallel = quest::train_one_vs_one(data, all, {}, 8);
    REQUIRE(serial.machines.size() == parallel.machines.size());
    for (std::size_t m = 0; m < serial.machines.size(); ++m) {
        CHECK(serial.machines[m].weights == parallel.machines[m].weights);
        CHECK(serial.machines[m].bias == parallel.machines[m].bias);
    }
}

TEST_CASE("predict: two-class model reduces to the machine's sign") {
    MultiClassModel model;
    model.dim = 1;
    model.labels = {"down", "up"};
    model.machines = {{{2.0}, -1.0, "down", "up"}};  // decision = 2 t - 1

    CHECK(model.predict(std::vector<double>{1.0}) == "down");
    CHECK(model.predict(std::vector<double>{0.0}) == "up");
    CHECK(model.predict(std::vector<double>{0.5}) == "down");  // 0 counts as positive
}

TEST_CASE("predict: majority vote, then margin sum, then lowest index") {
    // Machines wired to produce a 1/1/1 vote cycle: a beats b, b beats c,
    // c beats a. Feature is 1-D and constant 1, so decisions equal w + bias.
    MultiClassModel model;
    model.dim = 1;
    model.labels = {"a", "b", "c"};

    SUBCASE("margin sum decides") {
        model.machines = {
            {{0.0}, +0.5, "a", "b"},  // a beats b by 0.5
            {{0.0}, -2.0, "a", "c"},  // c beats a by 2.0
            {{0.0}, +1.0, "b", "c"},  // b beats c by 1.0
        };
        // margins: a: 0.5 - 2.0 = -1.5, b: -0.5 + 1.0 = 0.5, c: 2.0 - 1.0 = 1.0
        CHECK(model.predict(std::vector<double>{1.0}) == "c");
    }
    SUBCASE("exactly balanced margins fall back to the lowest label index") {
        model.machines = {
            {{0.0}, +1.0, "a", "b"},
            {{0.0}, -1.0, "a", "c"},
            {{0.0}, +1.0, "b", "c"},
        };
        // margins: a: 1 - 1 = 0, b: -1 + 1 = 0, c: 1 - 1 = 0
        CHECK(model.predict(std::vector<double>{1.0}) == "a");
    }
}

TEST_CASE("predict: 2/1/0 votes follow the majority") {
    MultiClassModel model;
    model.dim = 1;
    model.labels = {"a", "b", "c"};
    model.machines = {
        {{0.0}, +1.0, "a", "b"},
        {{0.0}, +1.0, "a", "c"},
        {{0.0}, +1.0, "b", "c"},
    };
    CHECK(model.predict(std::vector<double>{1.0}) == "a");
}

TEST_CASE("predict is invariant to machine order") {
    quest::Rng rng(56);
    const FeatureMatrix data = blob_matrix(rng, 10);
    std::vector<int> all(data.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);

    MultiClassModel model = quest::train_one_vs_one(data, all, {}, 1);
    MultiClassModel shuffled = model;
    std::reverse(shuffled.machines.begin(), shuffled.machines.end());

    for (std::size_t i = 0; i < data.size(); ++i) {
        CHECK(model.predict(data.row(i)) == shuffled.predict(data.row(i)));
    }
}

TEST_CASE("predict rejects dimension mismatches") {
    MultiClassModel model;
    model.dim = 2;
    model.labels = {"x", "y"};
    model.machines = {{{1.0, 1.0}, 0.0, "x", "y"}};
    CHECK_THROWS_AS(model.predict(std::vector<double>{1.0}), quest::ShapeError);
}

TEST_CASE("model JSON round-trips decisions exactly") {
    quest::Rng rng(57);
    const FeatureMatrix data = blob_matrix(rng, 6);
    std::vector<int> all(data.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
    const SvmTrainConfig cfg;
    const MultiClassModel model = quest::train_one_vs_one(data, all, cfg, 1);

    const MultiClassModel loaded = quest::model_from_json(quest::model_to_json(model, cfg));
    REQUIRE(loaded.machines.size() == model.machines.size());
    CHECK(loaded.labels == model.labels);
    for (std::size_t m = 0; m < model.machines.size(); ++m) {
        CHECK(loaded.machines[m].weights == model.machines[m].weights);
        CHECK(loaded.machines[m].bias == model.machines[m].bias);
    }
    for (std::size_t i = 0; i < data.size(); ++i) {
        CHECK(loaded.predict(data.row(i)) == model.predict(data.row(i)));
    }

    CHECK_THROWS_AS(quest::model_from_json("not json"), quest::ParseError);
    CHECK_THROWS_AS(quest::model_from_json("{\"format\": \"other\"}"), quest::SchemaError);
}

TEST_CASE("chi_square_distance") {
    const std::vector<double> u = {0.5, 0.5, 0.0};
    const std::vector<double> v = {0.25, 0.25, 0.5};
    // (0.25^2/0.75) + (0.25^2/0.75) + (0.5^2/0.5), eps negligible
    CHECK(quest::chi_square_distance(u, v) ==
          doctest::Approx(0.0625 / 0.75 * 2 + 0.5).epsilon(1e-9));
    CHECK(quest::chi_square_distance(u, u) == 0.0);
    CHECK_THROWS_AS(quest::chi_square_distance(u, std::vector<double>{1.0}),
                    quest::ShapeError);
}

TEST_CASE("knn: exact match, tie to lowest index, degenerate single sample") {
    FeatureMatrix data;
    data.dim = 2;
    data.append_row(std::vector<double>{0.0, 1.0}, "left", "s0");
    data.append_row(std::vector<double>{1.0, 0.0}, "right", "s1");
    data.append_row(std::vector<double>{0.0, 1.0}, "left_dup", "s2");

    quest::KnnClassifier knn;
    knn.data = &data;
    knn.train_indices = {0, 1, 2};

    CHECK(knn.predict(std::vector<double>{1.0, 0.0}) == "right");
    // equidistant between rows 0 and 1 -> index 0 wins; row 2 ties row 0 too
    CHECK(knn.predict(std::vector<double>{0.5, 0.5}) == "left");

    knn.train_indices = {1};
    CHECK(knn.predict(std::vector<double>{0.0, 1.0}) == "right");

    knn.train_indices = {};
    CHECK_THROWS_AS(knn.predict(std::vector<double>{0.0, 1.0}), quest::ArgumentError);
}

TEST_CASE("evaluate: accuracy is exactly 100 * trace / total") {
    FeatureMatrix data;
    data.dim = 1;
    const std::vector<std::string> truth = {"a", "a", "a", "a", "b", "b", "b", "b", "b", "b"};
    for (std::size_t i = 0; i < truth.size(); ++i) {
        data.append_row(std::vector<double>{static_cast<double>(i)}, truth[i], "s");
    }
    // wrong on rows 0 and 5
    const std::vector<std::string> canned = {"b", "a", "a", "a", "b", "a", "b", "b", "b", "b"};
    std::size_t cursor = 0;
    const quest::PredictFn predict = [&](std::span<const double>) { return canned[cursor++]; };

    std::vector<int> test(10);
    for (int i = 0; i < 10; ++i) test[i] = i;
    const std::vector<std::string> labels = {"a", "b"};
    const quest::Evaluation eval = quest::evaluate(predict, data, test, labels);

    CHECK(eval.accuracy_percent == 80.0);
    CHECK(eval.confusion.trace() == 8);
    CHECK(eval.confusion.total() == 10);
    CHECK(eval.accuracy_percent ==
          100.0 * static_cast<double>(eval.confusion.trace()) / eval.confusion.total());

    // row sums equal per-class test counts
    CHECK(eval.confusion.at(0, 0) + eval.confusion.at(0, 1) == 4);
    CHECK(eval.confusion.at(1, 0) + eval.confusion.at(1, 1) == 6);

    CHECK_THROWS_AS(quest::evaluate(predict, data, std::vector<int>{}, labels),
                    quest::ArgumentError);
}

TEST_CASE("evaluate: perfect and all-wrong extremes") {
    FeatureMatrix data;
    data.dim = 1;
    data.append_row(std::vector<double>{0.0}, "a", "s");
    data.append_row(std::vector<double>{1.0}, "b", "s");

    const std::vector<std::string> labels = {"a", "b"};
    const std::vector<int> test = {0, 1};

    const quest::PredictFn right = [&](std::span<const double> t) {
        return t[0] < 0.5 ? "a" : "b";
    };
    const quest::Evaluation good = quest::evaluate(right, data, test, labels);
    CHECK(good.accuracy_percent == 100.0);
    CHECK(good.confusion.at(0, 0) == 1);
    CHECK(good.confusion.at(1, 1) == 1);
    CHECK(good.confusion.at(0, 1) == 0);

    const quest::PredictFn wrong = [&](std::span<const double> t) {
        return t[0] < 0.5 ? "b" : "a";
    };
    const quest::Evaluation bad = quest::evaluate(wrong, data, test, labels);
    CHECK(bad.accuracy_percent == 0.0);
    CHECK(bad.confusion.at(0, 1) == 1);
    CHECK(bad.confusion.at(1, 0) == 1);
    CHECK(bad.confusion.trace() == 0);
}

TEST_CASE("run_cross_validation: single fold reduces to evaluate") {
    quest::Rng rng(58);
    const FeatureMatrix data = blob_matrix(rng, 10);

    quest::FoldPlan plan;
    plan.protocol = quest::Protocol::kRandomHoldout;
    plan.fold_count = 1;
    plan.seed = 1;
    quest::FoldAssignment fold;
    for (int i = 0; i < static_cast<int>(data.size()); ++i) {
        (i % 5 == 0 ? fold.test : fold.train).push_back(i);
    }
    plan.folds = {fold};

    const quest::CvReport report = quest::run_cross_validation(plan, data, {});
    REQUIRE(report.folds.size() == 1);
    CHECK(report.mean_accuracy_percent == report.folds[0].accuracy_percent);
    CHECK(report.pooled.counts == report.folds[0].confusion.counts);
}

TEST_CASE("run_cross_validation: duplicated folds average to the fold value") {
    quest::Rng rng(59);
    const FeatureMatrix data = blob_matrix(rng, 8);

    quest::FoldAssignment fold;
    for (int i = 0; i < static_cast<int>(data.size()); ++i) {
        (i % 4 == 0 ? fold.test : fold.train).push_back(i);
    }
    quest::FoldPlan plan;
    plan.fold_count = 3;
    plan.folds = {fold, fold, fold};

    const quest::CvReport report = quest::run_cross_validation(plan, data, {});
    CHECK(report.mean_accuracy_percent == report.folds[0].accuracy_percent);
    CHECK(report.folds[1].accuracy_percent == report.folds[0].accuracy_percent);
}

TEST_CASE("run_cross_validation: missing test class becomes a warning") {
    quest::Rng rng(60);
    FeatureMatrix data = blob_matrix(rng, 6);
    // one extra sample of a class that never appears in training
    data.append_row(std::vector<double>{9.0, 9.0}, "zeta", "s9");

    quest::FoldAssignment fold;
    for (int i = 0; i < static_cast<int>(data.size()) - 1; ++i) {
        (i % 3 == 0 ? fold.test : fold.train).push_back(i);
    }
    fold.test.push_back(static_cast<int>(data.size()) - 1);
    quest::FoldPlan plan;
    plan.fold_count = 1;
    plan.folds = {fold};

    const quest::CvReport report = quest::run_cross_validation(plan, data, {});
    REQUIRE(report.warnings.size() == 1);
    CHECK(report.warnings[0].find("zeta") != std::string::npos);
    CHECK(report.folds[0].predictions.size() == fold.test.size());
    // the zeta row exists in the pooled matrix with its own true-class row
    const auto& labels = report.pooled.labels;
    const auto zeta = std::find(labels.begin(), labels.end(), "zeta") - labels.begin();
    std::uint64_t zeta_row = 0;
    for (std::size_t col = 0; col < labels.size(); ++col) {
        zeta_row += report.pooled.at(static_cast<std::size_t>(zeta), col);
    }
    CHECK(zeta_row == 1);
}

TEST_CASE("run_cross_validation: knn and svm agree on separable blobs") {
    quest::Rng rng(61);
    const FeatureMatrix data = blob_matrix(rng, 20);
    const quest::FoldPlan plan = quest::make_subject_folds(data.subjects, 2, 3);

    quest::CvConfig svm_cfg;
    const quest::CvReport svm_report = quest::run_cross_validation(plan, data, svm_cfg);

    quest::CvConfig knn_cfg;
    knn_cfg.classifier = quest::ClassifierKind::kKnn;
    const quest::CvReport knn_report = quest::run_cross_validation(plan, data, knn_cfg);

    std::size_t agree = 0, total = 0;
    for (std::size_t f = 0; f < plan.folds.size(); ++f) {
        for (std::size_t i = 0; i < svm_report.folds[f].predictions.size(); ++i) {
            agree += svm_report.folds[f].predictions[i] == knn_report.folds[f].predictions[i];
            ++total;
        }
    }
    CHECK(static_cast<double>(agree) / static_cast<double>(total) >= 0.99);
}

TEST_CASE("confusion matrix pooling requires matching labels") {
    ConfusionMatrix a;
    a.labels = {"x", "y"};
    a.counts = {1, 0, 0, 1};
    ConfusionMatrix b = a;
    b.labels = {"x", "z"};
    CHECK_THROWS_AS(a.add(b), quest::ArgumentError);
}
