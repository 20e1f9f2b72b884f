// classifier.hpp : linear SVMs with one-vs-one voting, a chi-square 1-NN
// oracle, evaluation and cross-validation
#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "quest/dataset.hpp"
#include "quest/features.hpp"

namespace quest {

/// Linear two-class machine: decision(t) = weights . t + bias. A decision
/// value >= 0 votes for label_pos.
struct BinarySvm {
    std::vector<double> weights;
    double bias = 0.0;
    std::string label_pos;
    std::string label_neg;

    double decision(std::span<const double> t) const;
};

struct SvmTrainConfig {
    double c = 1.0;       // regularization
    int epochs = 50;      // full passes over the training set
    std::uint64_t seed = 42;
};

/// Two-class training problem; y entries are +1 or -1 and x pointers address
/// rows of dimension `dim`.
struct SvmProblem {
    std::size_t dim = 0;
    std::vector<const double*> x;
    std::vector<signed char> y;
};

struct SvmTrainResult {
    std::vector<double> weights;
    double bias = 0.0;
    std::vector<double> epoch_dual_objective;  // one entry per completed epoch
};

/// Dual coordinate descent for the L2-regularized hinge loss, bias handled as
/// an implicit constant feature. Sample order is re-drawn per epoch from the
/// seeded generator, so training is fully deterministic.
SvmTrainResult train_binary_svm(const SvmProblem& problem, const SvmTrainConfig& cfg);

/// One machine per unordered label pair, majority vote, margin-sum tie-break.
struct MultiClassModel {
    std::vector<std::string> labels;  // sorted ascending
    std::vector<BinarySvm> machines;  // pairs (i, j), i < j, in index order
    std::size_t dim = 0;

    std::string predict(std::span<const double> t) const;
};

/// Train n(n-1)/2 machines over the selected rows. Machines train
/// independently, so `threads` only affects wall time, never the result.
MultiClassModel train_one_vs_one(const FeatureMatrix& data, std::span<const int> row_indices,
                                 const SvmTrainConfig& cfg, int threads = 1);

std::string model_to_json(const MultiClassModel& model, const SvmTrainConfig& cfg);
MultiClassModel model_from_json(const std::string& text);

/// Chi-square distance sum((u-v)^2 / (u+v+eps)), eps = 1e-10.
double chi_square_distance(std::span<const double> u, std::span<const double> v);

/// 1-nearest-neighbor under chi-square distance; ties resolve to the lowest
/// training index.
struct KnnClassifier {
    const FeatureMatrix* data = nullptr;
    std::vector<int> train_indices;

    std::string predict(std::span<const double> t) const;
};

using PredictFn = std::function<std::string(std::span<const double>)>;

/// Row-indexed by true class, column-indexed by predicted class.
struct ConfusionMatrix {
    std::vector<std::string> labels;
    std::vector<std::uint64_t> counts;  // labels.size()^2, row-major

    std::uint64_t at(std::size_t true_idx, std::size_t pred_idx) const {
        return counts[true_idx * labels.size() + pred_idx];
    }
    std::uint64_t trace() const;
    std::uint64_t total() const;

    void add(const ConfusionMatrix& other);
};

struct Evaluation {
    double accuracy_percent = 0.0;  // always exactly 100 * trace / total
    ConfusionMatrix confusion;
    std::vector<std::string> predictions;  // one per test index, in order
};

/// Predict every test row and accumulate the confusion matrix over
/// `label_universe` (which must cover all true and predicted labels).
Evaluation evaluate(const PredictFn& predict, const FeatureMatrix& data,
                    std::span<const int> test_indices,
                    std::span<const std::string> label_universe);

enum class ClassifierKind { kSvm, kKnn };

std::string classifier_name(ClassifierKind kind);
ClassifierKind classifier_from_name(const std::string& name);

struct CvConfig {
    ClassifierKind classifier = ClassifierKind::kSvm;
    SvmTrainConfig svm;
    int threads = 1;
};

struct FoldReport {
    double accuracy_percent = 0.0;
    ConfusionMatrix confusion;
    std::vector<int> test_indices;
    std::vector<std::string> predictions;
};

struct CvReport {
    Protocol protocol = Protocol::kSubjectKFold;
    std::uint64_t seed = 0;
    ClassifierKind classifier = ClassifierKind::kSvm;
    std::vector<FoldReport> folds;
    double mean_accuracy_percent = 0.0;  // arithmetic mean over folds
    ConfusionMatrix pooled;              // per-fold counts summed
    std::vector<std::string> warnings;
};

/// Train and evaluate every fold of the plan; fully deterministic for a fixed
/// seed and independent of `threads`.
CvReport run_cross_validation(const FoldPlan& plan, const FeatureMatrix& data,
                              const CvConfig& cfg);

}  // namespace quest
