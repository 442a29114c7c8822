#include "qfm/trainer.hpp"

#include <algorithm>

namespace qfm {

void TrainConfig::validate() const {
    if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
        throw std::invalid_argument("learning_rate must be positive");
    }
    if (batch_size < 2 || batch_size % 2 != 0) {
        throw std::invalid_argument("batch_size must be even and at least 2");
    }
    if (max_epochs < 1) {
        throw std::invalid_argument("max_epochs must be at least 1");
    }
    if (patience < 0 || patience > max_epochs) {
        throw std::invalid_argument("patience must lie in [0, max_epochs]");
    }
    if (!(adam_beta1 >= 0.0 && adam_beta1 < 1.0) || !(adam_beta2 >= 0.0 && adam_beta2 < 1.0) ||
        !(adam_eps > 0.0)) {
        throw std::invalid_argument("invalid Adam hyperparameters");
    }
}

Adam::Adam(std::size_t n_params, const TrainConfig& config)
    : lr_(config.learning_rate), beta1_(config.adam_beta1), beta2_(config.adam_beta2),
      eps_(config.adam_eps), m_(n_params, 0.0), v_(n_params, 0.0) {}

void Adam::step(std::span<double> params, std::span<const double> grad) {
    if (params.size() != m_.size() || grad.size() != m_.size()) {
        throw std::invalid_argument("Adam::step: size mismatch");
    }
    ++t_;
    const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
    const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
    for (std::size_t i = 0; i < params.size(); ++i) {
        m_[i] = beta1_ * m_[i] + (1.0 - beta1_) * grad[i];
        v_[i] = beta2_ * v_[i] + (1.0 - beta2_) * grad[i] * grad[i];
        const double m_hat = m_[i] / c1;
        const double v_hat = v_[i] / c2;
        params[i] -= lr_ * m_hat / (std::sqrt(v_hat) + eps_);
    }
}

std::vector<std::vector<std::size_t>> balanced_batches(std::span<const int> labels, int batch_size,
                                                       std::mt19937_64& rng) {
    if (batch_size < 2 || batch_size % 2 != 0) {
        throw std::invalid_argument("batch_size must be even and at least 2");
    }
    std::vector<std::size_t> pos;
    std::vector<std::size_t> neg;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] == 1) {
            pos.push_back(i);
        } else if (labels[i] == -1) {
            neg.push_back(i);
        } else {
            throw std::invalid_argument("labels must be +1 or -1");
        }
    }
    std::shuffle(pos.begin(), pos.end(), rng);
    std::shuffle(neg.begin(), neg.end(), rng);

    const std::size_t per_class = std::min(pos.size(), neg.size());
    const auto half = static_cast<std::size_t>(batch_size / 2);
    std::vector<std::vector<std::size_t>> batches;
    for (std::size_t start = 0; start < per_class; start += half) {
        const std::size_t end = std::min(per_class, start + half);
        std::vector<std::size_t> batch;
        batch.reserve(2 * (end - start));
        for (std::size_t k = start; k < end; ++k) {
            batch.push_back(pos[k]);
            batch.push_back(neg[k]);
        }
        batches.push_back(std::move(batch));
    }
    return batches;
}

void require_binary_training_data(const LabeledData& train, const LabeledData& validation) {
    if (train.size() == 0 || validation.size() == 0) {
        throw std::invalid_argument("training and validation sets must be non-empty");
    }
    if (static_cast<std::size_t>(train.x.rows()) != train.size() ||
        static_cast<std::size_t>(validation.x.rows()) != validation.size()) {
        throw std::invalid_argument("feature rows and labels disagree in count");
    }
    bool has_pos = false;
    bool has_neg = false;
    for (const int y : train.y) {
        if (y == 1) {
            has_pos = true;
        } else if (y == -1) {
            has_neg = true;
        } else {
            throw std::invalid_argument("labels must be +1 or -1");
        }
    }
    if (!has_pos || !has_neg) {
        throw std::invalid_argument("training set contains a single class");
    }
}

} // namespace qfm
