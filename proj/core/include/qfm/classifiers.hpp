#pragma once

/**
 * @file
 * Classical decision machines: soft-margin kernel SVM (SMO), L2 logistic
 * regression (L-BFGS) and the 16 -> 8 -> 4 -> 1 ReLU MLP.
 *
 * All binary labels are +1 / -1, and a decision value of exactly 0 maps to +1.
 */

#include "qfm/matrix.hpp"
#include "qfm/trainer.hpp"

#include <Eigen/Core>

#include <cstddef>
#include <random>
#include <span>
#include <vector>

namespace qfm {

// ---------------------------------------------------------------------------
// SVM

struct SvmOptions {
    double C = 1.0;
    double tolerance = 1e-3;
    std::size_t max_iterations = 1'000'000;
};

/// f(x) = sum_{i in SV} dual_coefficients_i K(x_i, x) + bias.
struct SvmModel {
    std::vector<double> dual_coefficients; ///< alpha_i * y_i
    std::vector<std::size_t> support_indices; ///< rows of the training Gram matrix
    double bias = 0.0;                     ///< equals -rho in the usual dual notation
    double C = 1.0;
    std::size_t n_train = 0;
    std::size_t iterations = 0;
    bool converged = false;
};

/// Solves the C-SVC dual on a precomputed square training Gram matrix.
SvmModel svm_fit(const Eigen::MatrixXd& gram, std::span<const int> labels, const SvmOptions& options = {});

/// Decision values for a (test x train) cross-Gram matrix.
std::vector<double> svm_decision(const SvmModel& model, const Eigen::MatrixXd& cross_gram);
std::vector<int> svm_predict(const SvmModel& model, const Eigen::MatrixXd& cross_gram);

/// Full alpha vector (length n_train) recovered from a fitted model.
std::vector<double> svm_alphas(const SvmModel& model);

/// Primal form of an SVM fitted on a linear kernel: f(x) = w.x + b.
struct LinearSvm {
    std::vector<double> w;
    double b = 0.0;
};

LinearSvm linear_svm_fit(const RowMatrix& x, std::span<const int> labels, const SvmOptions& options = {});
std::vector<int> linear_svm_predict(const LinearSvm& model, const RowMatrix& x);

// ---------------------------------------------------------------------------
// Logistic regression

struct LogRegOptions {
    double C = 1.0;
    int max_iter = 5000;
    double gradient_tolerance = 1e-8;
    int history = 10;
};

struct LogRegModel {
    std::vector<double> weights;
    double bias = 0.0;
    double C = 1.0;
    int iterations = 0;
    bool converged = false;
    std::vector<double> objective_trace; ///< objective after each accepted step, starting at the initial point
};

/// (1/2)|w|^2 + C sum_i log(1 + exp(-y_i (w.x_i + b))); the bias is not penalized.
double logreg_objective(std::span<const double> weights, double bias, const RowMatrix& x,
                        std::span<const int> labels, double C);
/// Gradient of logreg_objective, weights first and the bias last.
std::vector<double> logreg_gradient(std::span<const double> weights, double bias, const RowMatrix& x,
                                    std::span<const int> labels, double C);

LogRegModel logreg_fit(const RowMatrix& x, std::span<const int> labels, const LogRegOptions& options = {});
std::vector<double> logreg_decision(const LogRegModel& model, const RowMatrix& x);
std::vector<int> logreg_predict(const LogRegModel& model, const RowMatrix& x);

// ---------------------------------------------------------------------------
// MLP

struct MlpModel {
    std::vector<int> layer_sizes{16, 8, 4, 1};
    std::vector<double> parameters;
};

std::size_t mlp_param_count(std::span<const int> layer_sizes);

/// Layer sizes {input_dim, 8, 4, 1}.
std::vector<int> mlp_architecture(int input_dim);

/// Glorot-uniform weights, zero biases.
MlpModel mlp_init(std::span<const int> layer_sizes, std::mt19937_64& rng);

/// ReLU hidden layers, identity output. Parameters per layer: W (out x in,
/// row-major) followed by b (out).
class MlpNet {
public:
    explicit MlpNet(std::vector<int> layer_sizes);

    [[nodiscard]] std::size_t num_params() const noexcept { return n_params_; }
    [[nodiscard]] const std::vector<int>& layer_sizes() const noexcept { return sizes_; }

    double score(std::span<const double> theta, std::span<const double> x) const;
    double backprop(std::span<const double> theta, std::span<const double> x, int label, double weight,
                    std::span<double> grad) const;

private:
    std::vector<int> sizes_;
    std::size_t n_params_;
};

struct MlpFit {
    MlpModel model;
    FitOutcome outcome;
};

MlpFit mlp_fit(const LabeledData& train, const LabeledData& validation, const TrainConfig& config);
std::vector<int> mlp_predict(const MlpModel& model, const RowMatrix& x);

} // namespace qfm
