#pragma once

/**
 * @file
 * Training scaffolding shared by the VQC and the MLP baseline: softplus
 * logistic loss, Adam, class-balanced mini-batches and best-validation
 * checkpointing with patience-based early stopping.
 */

#include "qfm/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace qfm {

struct TrainConfig {
    double learning_rate = 1e-2;
    int batch_size = 64;
    int max_epochs = 80;
    int patience = 40;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_eps = 1e-8;
    std::uint64_t seed = 0;

    static TrainConfig vqc_defaults() { return {}; }
    /// 500 epochs, best-validation checkpoint, no early stopping.
    static TrainConfig mlp_defaults() {
        TrainConfig c;
        c.max_epochs = 500;
        c.patience = 500;
        return c;
    }

    void validate() const;
};

/// log(1 + exp(-margin)), stable for large |margin|.
inline double softplus_margin_loss(double margin) {
    return std::log1p(std::exp(-std::abs(margin))) + std::max(-margin, 0.0);
}

inline double sigmoid(double t) {
    if (t >= 0.0) {
        return 1.0 / (1.0 + std::exp(-t));
    }
    const double e = std::exp(t);
    return e / (1.0 + e);
}

/// Decision-value to label: sign, with 0 mapped to +1.
inline int label_of(double score) { return score >= 0.0 ? 1 : -1; }

class Adam {
public:
    Adam(std::size_t n_params, const TrainConfig& config);
    void step(std::span<double> params, std::span<const double> grad);

private:
    double lr_, beta1_, beta2_, eps_;
    std::vector<double> m_, v_;
    long long t_ = 0;
};

/**
 * Splits the sample indices into mini-batches holding batch_size/2 samples of
 * each label. Each class is shuffled independently and drawn without
 * replacement; the last batch may be shorter but stays balanced. When class
 * sizes differ, the surplus of the larger class is left out for this epoch.
 */
std::vector<std::vector<std::size_t>> balanced_batches(std::span<const int> labels, int batch_size,
                                                       std::mt19937_64& rng);

struct Evaluation {
    double accuracy = 0.0;
    double mean_loss = 0.0;
};

struct FitOutcome {
    std::vector<double> best_theta;
    double best_val_accuracy = 0.0;
    double best_val_loss = std::numeric_limits<double>::infinity();
    std::vector<double> loss_trace;         ///< mean training loss per epoch
    std::vector<double> best_val_trace;     ///< best validation accuracy seen after each epoch
    int epochs_run = 0;
    int best_epoch = 0;                     ///< 1-based
};

/// Models plugged into fit_balanced provide
///   double score(std::span<const double> theta, std::span<const double> x) const;
///   double backprop(std::span<const double> theta, std::span<const double> x, int label,
///                   double weight, std::span<double> grad) const;
/// where backprop returns the sample's softplus loss and adds weight * dloss/dtheta to grad.
template <class Model>
Evaluation evaluate(const Model& model, std::span<const double> theta, const LabeledData& data) {
    Evaluation ev;
    if (data.size() == 0) {
        return ev;
    }
    std::size_t correct = 0;
    double loss = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        const double s = model.score(theta, row_span(data.x, static_cast<Eigen::Index>(i)));
        correct += (label_of(s) == data.y[i]) ? 1 : 0;
        loss += softplus_margin_loss(data.y[i] * s);
    }
    ev.accuracy = static_cast<double>(correct) / static_cast<double>(data.size());
    ev.mean_loss = loss / static_cast<double>(data.size());
    return ev;
}

void require_binary_training_data(const LabeledData& train, const LabeledData& validation);

template <class Model>
FitOutcome fit_balanced(const Model& model, std::vector<double> theta, const LabeledData& train,
                        const LabeledData& validation, const TrainConfig& config, std::mt19937_64& rng) {
    config.validate();
    require_binary_training_data(train, validation);

    Adam adam(theta.size(), config);
    std::vector<double> grad(theta.size());
    FitOutcome out;
    out.best_theta = theta;
    out.best_val_accuracy = -1.0;
    int since_improvement = 0;

    for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
        const auto batches = balanced_batches(train.y, config.batch_size, rng);
        double epoch_loss = 0.0;
        std::size_t seen = 0;
        for (const auto& batch : batches) {
            std::fill(grad.begin(), grad.end(), 0.0);
            const double weight = 1.0 / static_cast<double>(batch.size());
            for (const std::size_t i : batch) {
                epoch_loss += model.backprop(theta, row_span(train.x, static_cast<Eigen::Index>(i)),
                                             train.y[i], weight, grad);
            }
            for (const double g : grad) {
                if (!std::isfinite(g)) {
                    throw std::runtime_error("non-finite gradient at epoch " + std::to_string(epoch));
                }
            }
            seen += batch.size();
            adam.step(theta, grad);
        }
        out.loss_trace.push_back(seen ? epoch_loss / static_cast<double>(seen) : 0.0);
        out.epochs_run = epoch;

        const Evaluation val = evaluate(model, theta, validation);
        const bool improved = val.accuracy > out.best_val_accuracy ||
                              (val.accuracy == out.best_val_accuracy && val.mean_loss < out.best_val_loss);
        if (improved) {
            out.best_theta = theta;
            out.best_val_accuracy = val.accuracy;
            out.best_val_loss = val.mean_loss;
            out.best_epoch = epoch;
            since_improvement = 0;
        } else if (++since_improvement >= config.patience) {
            out.best_val_trace.push_back(out.best_val_accuracy);
            break;
        }
        out.best_val_trace.push_back(out.best_val_accuracy);
    }
    return out;
}

} // namespace qfm
