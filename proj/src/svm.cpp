// svm.cpp : dual coordinate descent for the L2-regularized hinge-loss SVM
//
// Solves  min_a 0.5 a^T Q a - e^T a,  0 <= a_i <= C,  Q_ij = y_i y_j x_i.x_j,
// maintaining the primal vector w = sum a_i y_i x_i throughout. The bias is an
// implicit constant-1 feature, so it is regularized like any other weight.
// No shrinking; the visit order is a fresh seeded permutation each epoch and
// the epoch count is fixed, which makes training bit-reproducible.
#include <cmath>

#include "quest/classifier.hpp"
#include "quest/error.hpp"
#include "quest/rng.hpp"

namespace quest {

namespace {

double dot(const double* a, const double* b, std::size_t n) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += a[i] * b[i];
    return sum;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

}  // namespace

SvmTrainResult train_binary_svm(const SvmProblem& problem, const SvmTrainConfig& cfg) {
    const std::size_t n = problem.x.size();
    const std::size_t dim = problem.dim;
    if (n == 0 || dim == 0) {
        throw ArgumentError("SVM training needs a non-empty problem");
    }
    if (problem.y.size() != n) {
        throw ShapeError("SVM training: label count does not match sample count");
    }
    if (cfg.c <= 0.0) {
        throw ConfigError("SVM regularization c must be positive");
    }
    if (cfg.epochs < 1) {
        throw ConfigError("SVM epoch count must be at least 1");
    }

    bool has_pos = false;
    bool has_neg = false;
    for (const signed char y : problem.y) {
        if (y == +1) has_pos = true;
        else if (y == -1) has_neg = true;
        else throw ArgumentError("SVM training labels must be +1 or -1");
    }
    if (!has_pos || !has_neg) {
        throw ConfigError("degenerate SVM training set: both classes must be present");
    }

    SvmTrainResult result;
    result.weights.assign(dim, 0.0);
    double* w = result.weights.data();
    double& bias = result.bias;

    std::vector<double> alpha(n, 0.0);
    std::vector<double> q_diag(n);
    for (std::size_t i = 0; i < n; ++i) {
        q_diag[i] = dot(problem.x[i], problem.x[i], dim) + 1.0;  // +1: bias feature
    }

    Rng rng(cfg.seed);
    std::vector<std::size_t> order(n);
    const double c = cfg.c;

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        for (std::size_t i = 0; i < n; ++i) order[i] = i;
        rng.shuffle(order);

        bool changed = false;
        for (const std::size_t i : order) {
            const double yi = problem.y[i];
            const double gradient = yi * (dot(w, problem.x[i], dim) + bias) - 1.0;

            double projected = gradient;
            if (alpha[i] <= 0.0 && gradient > 0.0) projected = 0.0;
            if (alpha[i] >= c && gradient < 0.0) projected = 0.0;
            if (std::fabs(projected) <= 1.0e-12) continue;

            const double updated = std::min(std::max(alpha[i] - gradient / q_diag[i], 0.0), c);
            const double delta = (updated - alpha[i]) * yi;
            if (delta == 0.0) continue;
            alpha[i] = updated;
            axpy(delta, problem.x[i], w, dim);
            bias += delta;
            changed = true;
        }

        double alpha_sum = 0.0;
        for (const double a : alpha) alpha_sum += a;
        const double objective =
            0.5 * (dot(w, w, dim) + bias * bias) - alpha_sum;
        result.epoch_dual_objective.push_back(objective);

        if (!changed) break;  // exact fixed point, later epochs are no-ops
    }
    return result;
}

}  // namespace quest
