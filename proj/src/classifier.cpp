#include "quest/classifier.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "json.hpp"
#include "quest/error.hpp"
#include "quest/parallel.hpp"
#include "quest/rng.hpp"

namespace quest {

namespace {

// Stable per-machine seed: depends only on the run seed and the label pair, so
// parallel training order cannot influence results.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t state = seed ^ (salt * 0x9e3779b97f4a7c15ULL);
    return splitmix64(state);
}

std::size_t label_index(std::span<const std::string> labels, const std::string& label,
                        const char* context) {
    const auto it = std::find(labels.begin(), labels.end(), label);
    if (it == labels.end()) {
        throw ArgumentError(std::string(context) + ": unknown label \"" + label + "\"");
    }
    return static_cast<std::size_t>(it - labels.begin());
}

}  // namespace

double BinarySvm::decision(std::span<const double> t) const {
    if (t.size() != weights.size()) {
        std::ostringstream msg;
        msg << "SVM decision: input dimension " << t.size() << " does not match model dimension "
            << weights.size();
        throw ShapeError(msg.str());
    }
    double sum = bias;
    for (std::size_t i = 0; i < t.size(); ++i) sum += weights[i] * t[i];
    return sum;
}

std::string MultiClassModel::predict(std::span<const double> t) const {
    if (labels.empty()) {
        throw ArgumentError("cannot predict with an empty model");
    }
    if (t.size() != dim) {
        std::ostringstream msg;
        msg << "predict: input dimension " << t.size() << " does not match model dimension "
            << dim;
        throw ShapeError(msg.str());
    }
    if (labels.size() == 1) {
        return labels[0];
    }

    struct MachineVote {
        std::size_t pos, neg;
        double decision;
    };
    std::vector<MachineVote> outcomes;
    outcomes.reserve(machines.size());
    std::vector<int> votes(labels.size(), 0);
    for (const BinarySvm& machine : machines) {
        MachineVote mv;
        mv.pos = label_index(labels, machine.label_pos, "predict");
        mv.neg = label_index(labels, machine.label_neg, "predict");
        mv.decision = machine.decision(t);
        ++votes[mv.decision >= 0.0 ? mv.pos : mv.neg];  // 0 counts as positive
        outcomes.push_back(mv);
    }

    const int best = *std::max_element(votes.begin(), votes.end());
    std::vector<bool> tied(labels.size(), false);
    int tied_count = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        tied[i] = votes[i] == best;
        tied_count += tied[i];
    }
    if (tied_count == 1) {
        return labels[std::find(tied.begin(), tied.end(), true) - tied.begin()];
    }

    // Tie-break: sum signed margins over the machines between tied labels;
    // remaining ties resolve to the lowest label index.
    std::vector<double> margin(labels.size(), 0.0);
    for (const MachineVote& mv : outcomes) {
        if (tied[mv.pos] && tied[mv.neg]) {
            margin[mv.pos] += mv.decision;
            margin[mv.neg] -= mv.decision;
        }
    }
    std::size_t winner = labels.size();
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (!tied[i]) continue;
        if (winner == labels.size() || margin[i] > margin[winner]) winner = i;
    }
    return labels[winner];
}

MultiClassModel train_one_vs_one(const FeatureMatrix& data, std::span<const int> row_indices,
                                 const SvmTrainConfig& cfg, int threads) {
    if (row_indices.empty()) {
        throw ArgumentError("one-vs-one training: no rows selected");
    }
    for (const int idx : row_indices) {
        if (idx < 0 || static_cast<std::size_t>(idx) >= data.size()) {
            throw RangeError("one-vs-one training: row index out of range");
        }
    }

    std::set<std::string> present;
    for (const int idx : row_indices) present.insert(data.labels[idx]);

    MultiClassModel model;
    model.dim = data.dim;
    model.labels.assign(present.begin(), present.end());

    const std::size_t n = model.labels.size();
    struct Pair {
        std::size_t i, j;
    };
    std::vector<Pair> pairs;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) pairs.push_back({i, j});
    }
    model.machines.resize(pairs.size());

    parallel_for(pairs.size(), threads, [&](std::size_t p) {
        const auto [i, j] = pairs[p];
        SvmProblem problem;
        problem.dim = data.dim;
        for (const int idx : row_indices) {
            const std::string& label = data.labels[idx];
            if (label == model.labels[i]) {
                problem.x.push_back(data.row(idx).data());
                problem.y.push_back(+1);
            } else if (label == model.labels[j]) {
                problem.x.push_back(data.row(idx).data());
                problem.y.push_back(-1);
            }
        }
        SvmTrainConfig machine_cfg = cfg;
        machine_cfg.seed = derive_seed(cfg.seed, i * n + j);
        SvmTrainResult trained = train_binary_svm(problem, machine_cfg);

        BinarySvm& machine = model.machines[p];
        machine.weights = std::move(trained.weights);
        machine.bias = trained.bias;
        machine.label_pos = model.labels[i];
        machine.label_neg = model.labels[j];
    });
    return model;
}

std::string model_to_json(const MultiClassModel& model, const SvmTrainConfig& cfg) {
    nlohmann::ordered_json doc;
    doc["format"] = "quest-ovo-svm";
    doc["kernel"] = "linear";
    doc["dim"] = model.dim;
    doc["labels"] = model.labels;
    doc["trainer"] = {{"c", cfg.c}, {"epochs", cfg.epochs}, {"seed", cfg.seed}};
    doc["machines"] = nlohmann::ordered_json::array();
    for (const BinarySvm& machine : model.machines) {
        nlohmann::ordered_json entry;
        entry["pos"] = machine.label_pos;
        entry["neg"] = machine.label_neg;
        entry["bias"] = machine.bias;
        entry["weights"] = machine.weights;
        doc["machines"].push_back(std::move(entry));
    }
    return doc.dump(2) + "\n";
}

MultiClassModel model_from_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("model file: ") + e.what());
    }
    if (!doc.is_object() || doc.value("format", "") != "quest-ovo-svm" ||
        doc.value("kernel", "") != "linear") {
        throw SchemaError("model file: not a quest-ovo-svm linear model");
    }

    MultiClassModel model;
    model.dim = doc.at("dim").get<std::size_t>();
    model.labels = doc.at("labels").get<std::vector<std::string>>();
    for (const auto& entry : doc.at("machines")) {
        BinarySvm machine;
        machine.label_pos = entry.at("pos").get<std::string>();
        machine.label_neg = entry.at("neg").get<std::string>();
        machine.bias = entry.at("bias").get<double>();
        machine.weights = entry.at("weights").get<std::vector<double>>();
        if (machine.weights.size() != model.dim) {
            throw SchemaError("model file: machine weight dimension mismatch");
        }
        model.machines.push_back(std::move(machine));
    }
    return model;
}

double chi_square_distance(std::span<const double> u, std::span<const double> v) {
    if (u.size() != v.size()) {
        throw ShapeError("chi-square distance: dimension mismatch");
    }
    constexpr double kEps = 1.0e-10;
    double sum = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double diff = u[i] - v[i];
        sum += diff * diff / (u[i] + v[i] + kEps);
    }
    return sum;
}

std::string KnnClassifier::predict(std::span<const double> t) const {
    if (data == nullptr || train_indices.empty()) {
        throw ArgumentError("k-NN: empty training set");
    }
    double best_distance = 0.0;
    int best_index = -1;
    for (const int idx : train_indices) {
        const double d = chi_square_distance(data->row(idx), t);
        if (best_index < 0 || d < best_distance) {
            best_distance = d;
            best_index = idx;
        }
    }
    return data->labels[best_index];
}

std::uint64_t ConfusionMatrix::trace() const {
    std::uint64_t sum = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) sum += at(i, i);
    return sum;
}

std::uint64_t ConfusionMatrix::total() const {
    std::uint64_t sum = 0;
    for (const std::uint64_t c : counts) sum += c;
    return sum;
}

void ConfusionMatrix::add(const ConfusionMatrix& other) {
    if (labels != other.labels) {
        throw ArgumentError("cannot pool confusion matrices over different label sets");
    }
    for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += other.counts[i];
}

Evaluation evaluate(const PredictFn& predict, const FeatureMatrix& data,
                    std::span<const int> test_indices,
                    std::span<const std::string> label_universe) {
    if (test_indices.empty()) {
        throw ArgumentError("evaluate: empty test set");
    }

    Evaluation eval;
    eval.confusion.labels.assign(label_universe.begin(), label_universe.end());
    eval.confusion.counts.assign(label_universe.size() * label_universe.size(), 0);
    eval.predictions.reserve(test_indices.size());

    for (const int idx : test_indices) {
        if (idx < 0 || static_cast<std::size_t>(idx) >= data.size()) {
            throw RangeError("evaluate: test index out of range");
        }
        const std::string predicted = predict(data.row(idx));
        const std::size_t t = label_index(label_universe, data.labels[idx], "evaluate");
        const std::size_t p = label_index(label_universe, predicted, "evaluate");
        ++eval.confusion.counts[t * label_universe.size() + p];
        eval.predictions.push_back(predicted);
    }

    eval.accuracy_percent =
        100.0 * static_cast<double>(eval.confusion.trace()) / eval.confusion.total();
    return eval;
}

std::string classifier_name(ClassifierKind kind) {
    return kind == ClassifierKind::kSvm ? "svm" : "knn";
}

ClassifierKind classifier_from_name(const std::string& name) {
    if (name == "svm") return ClassifierKind::kSvm;
    if (name == "knn") return ClassifierKind::kKnn;
    throw ConfigError("unknown classifier \"" + name + "\" (expected svm or knn)");
}

CvReport run_cross_validation(const FoldPlan& plan, const FeatureMatrix& data,
                              const CvConfig& cfg) {
    if (plan.folds.empty()) {
        throw ConfigError("cross-validation plan has no folds");
    }
    for (const FoldAssignment& fold : plan.folds) {
        for (const int idx : fold.train) {
            if (idx < 0 || static_cast<std::size_t>(idx) >= data.size()) {
                throw RangeError("fold plan: train index out of range");
            }
        }
        for (const int idx : fold.test) {
            if (idx < 0 || static_cast<std::size_t>(idx) >= data.size()) {
                throw RangeError("fold plan: test index out of range");
            }
        }
    }

    const std::vector<std::string> universe = data.label_set();

    CvReport report;
    report.protocol = plan.protocol;
    report.seed = plan.seed;
    report.classifier = cfg.classifier;
    report.pooled.labels = universe;
    report.pooled.counts.assign(universe.size() * universe.size(), 0);

    // Folds run concurrently into per-fold slots; machine-level parallelism is
    // used only when there is a single fold. All reductions below happen in
    // fold order, so the report is identical for any thread count.
    const std::size_t fold_count = plan.folds.size();
    const int machine_threads = fold_count > 1 ? 1 : std::max(1, cfg.threads);
    std::vector<FoldReport> fold_reports(fold_count);
    std::vector<std::string> fold_warnings(fold_count);

    parallel_for(fold_count, cfg.threads, [&](std::size_t f) {
        const FoldAssignment& fold = plan.folds[f];

        std::set<std::string> train_labels;
        for (const int idx : fold.train) train_labels.insert(data.labels[idx]);
        std::set<std::string> missing;
        for (const int idx : fold.test) {
            if (!train_labels.contains(data.labels[idx])) missing.insert(data.labels[idx]);
        }
        if (!missing.empty()) {
            std::ostringstream warning;
            warning << "fold " << f << ": test classes absent from training:";
            for (const std::string& label : missing) warning << " " << label;
            fold_warnings[f] = warning.str();
        }

        PredictFn predict;
        MultiClassModel model;
        KnnClassifier knn;
        if (cfg.classifier == ClassifierKind::kSvm) {
            model = train_one_vs_one(data, fold.train, cfg.svm, machine_threads);
            predict = [&model](std::span<const double> t) { return model.predict(t); };
        } else {
            knn.data = &data;
            knn.train_indices = fold.train;
            predict = [&knn](std::span<const double> t) { return knn.predict(t); };
        }

        Evaluation eval = evaluate(predict, data, fold.test, universe);
        fold_reports[f].accuracy_percent = eval.accuracy_percent;
        fold_reports[f].confusion = std::move(eval.confusion);
        fold_reports[f].test_indices = fold.test;
        fold_reports[f].predictions = std::move(eval.predictions);
    });

    double accuracy_sum = 0.0;
    for (std::size_t f = 0; f < fold_count; ++f) {
        accuracy_sum += fold_reports[f].accuracy_percent;
        report.pooled.add(fold_reports[f].confusion);
        if (!fold_warnings[f].empty()) {
            report.warnings.push_back(fold_warnings[f]);
        }
    }
    report.folds = std::move(fold_reports);
    report.mean_accuracy_percent = accuracy_sum / static_cast<double>(fold_count);
    return report;
}

}  // namespace quest
