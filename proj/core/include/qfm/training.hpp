#pragma once

/**
 * @file
 * End-to-end training of the variational classifier: circuit embedding,
 * Pauli-Z readout, linear head s = w.z + b and softplus logistic loss, with
 * exact gradients from adjoint differentiation.
 */

#include "qfm/matrix.hpp"
#include "qfm/pqc.hpp"
#include "qfm/trainer.hpp"

#include <random>
#include <span>
#include <vector>

namespace qfm {

struct LinearHead {
    std::vector<double> w;
    double b = 0.0;

    friend bool operator==(const LinearHead&, const LinearHead&) = default;
};

double decision_score(std::span<const double> z, const LinearHead& head);

/// Mean softplus loss over a batch; labels must be +1 / -1.
double softplus_loss(std::span<const double> scores, std::span<const int> labels);

struct VqcGradient {
    std::vector<double> d_params; ///< w.r.t. circuit parameters (flat layout)
    std::vector<double> d_w;
    double d_b = 0.0;
    double loss = 0.0;
};

/// Exact gradient of the mean batch loss.
VqcGradient gradient(const CircuitSpec& spec, std::span<const double> params, const LinearHead& head,
                     const RowMatrix& batch_x, std::span<const int> batch_y);

/**
 * Adapter exposing the VQC to fit_balanced. Its flat trainable vector is the
 * circuit parameters followed by the head weights and then the bias.
 */
class VqcModel {
public:
    explicit VqcModel(const CircuitSpec& spec);

    [[nodiscard]] const CircuitSpec& spec() const noexcept { return spec_; }
    [[nodiscard]] std::size_t num_params() const noexcept;

    double score(std::span<const double> theta, std::span<const double> x) const;
    double backprop(std::span<const double> theta, std::span<const double> x, int label, double weight,
                    std::span<double> grad) const;

    std::vector<double> pack(std::span<const double> params, const LinearHead& head) const;
    [[nodiscard]] ParamVector unpack_params(std::span<const double> theta) const;
    [[nodiscard]] LinearHead unpack_head(std::span<const double> theta) const;

    /// Circuit parameters and init angles ~ U[-0.1, 0.1]; w ~ U[-0.5, 0.5]; b = 0.
    std::vector<double> initial_theta(std::mt19937_64& rng) const;

private:
    CircuitSpec spec_;
    std::size_t n_circuit_;
};

struct TrainResult {
    ParamVector best_params;
    LinearHead best_head;
    double best_val_accuracy = 0.0;
    std::vector<double> loss_trace;
    std::vector<double> best_val_trace;
    int epochs_run = 0;
    int best_epoch = 0;
};

TrainResult train_vqc(const CircuitSpec& spec, const LabeledData& train, const LabeledData& validation,
                      const TrainConfig& config);

/// Linear-head predictions of a trained VQC.
std::vector<int> vqc_predict(const ParamVector& params, const LinearHead& head, const RowMatrix& x);
double accuracy(std::span<const int> predicted, std::span<const int> truth);

} // namespace qfm
