#include "qfm/classifiers.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qfm {

std::size_t mlp_param_count(std::span<const int> layer_sizes) {
    std::size_t total = 0;
    for (std::size_t l = 0; l + 1 < layer_sizes.size(); ++l) {
        const auto in = static_cast<std::size_t>(layer_sizes[l]);
        const auto out = static_cast<std::size_t>(layer_sizes[l + 1]);
        total += in * out + out;
    }
    return total;
}

std::vector<int> mlp_architecture(int input_dim) {
    if (input_dim < 1) {
        throw std::invalid_argument("mlp_architecture: input_dim must be positive");
    }
    return {input_dim, 8, 4, 1};
}

MlpModel mlp_init(std::span<const int> layer_sizes, std::mt19937_64& rng) {
    MlpModel model;
    model.layer_sizes.assign(layer_sizes.begin(), layer_sizes.end());
    model.parameters.reserve(mlp_param_count(layer_sizes));
    for (std::size_t l = 0; l + 1 < layer_sizes.size(); ++l) {
        const int in = layer_sizes[l];
        const int out = layer_sizes[l + 1];
        const double limit = std::sqrt(6.0 / static_cast<double>(in + out));
        std::uniform_real_distribution<double> dist(-limit, limit);
        for (int k = 0; k < in * out; ++k) {
            model.parameters.push_back(dist(rng));
        }
        model.parameters.insert(model.parameters.end(), static_cast<std::size_t>(out), 0.0);
    }
    return model;
}

MlpNet::MlpNet(std::vector<int> layer_sizes) : sizes_(std::move(layer_sizes)), n_params_(mlp_param_count(sizes_)) {
    if (sizes_.size() < 2 || sizes_.back() != 1) {
        throw std::invalid_argument("MlpNet: need at least an input layer and a single output unit");
    }
    for (const int s : sizes_) {
        if (s < 1) {
            throw std::invalid_argument("MlpNet: layer sizes must be positive");
        }
    }
}

double MlpNet::score(std::span<const double> theta, std::span<const double> x) const {
    if (x.size() != static_cast<std::size_t>(sizes_.front()) || theta.size() != n_params_) {
        throw std::invalid_argument("MlpNet::score: dimension mismatch");
    }
    std::vector<double> act(x.begin(), x.end());
    std::vector<double> next;
    std::size_t offset = 0;
    const std::size_t layers = sizes_.size() - 1;
    for (std::size_t l = 0; l < layers; ++l) {
        const auto in = static_cast<std::size_t>(sizes_[l]);
        const auto out = static_cast<std::size_t>(sizes_[l + 1]);
        const double* w = theta.data() + offset;
        const double* b = w + in * out;
        next.assign(out, 0.0);
        for (std::size_t o = 0; o < out; ++o) {
            double z = b[o];
            for (std::size_t i = 0; i < in; ++i) {
                z += w[o * in + i] * act[i];
            }
            next[o] = (l + 1 < layers) ? std::max(z, 0.0) : z;
        }
        act.swap(next);
        offset += in * out + out;
    }
    return act[0];
}

double MlpNet::backprop(std::span<const double> theta, std::span<const double> x, int label, double weight,
                        std::span<double> grad) const {
    if (x.size() != static_cast<std::size_t>(sizes_.front()) || theta.size() != n_params_ ||
        grad.size() != n_params_) {
        throw std::invalid_argument("MlpNet::backprop: dimension mismatch");
    }
    const std::size_t layers = sizes_.size() - 1;
    // Activations per layer (index 0 = input) and pre-activations per layer.
    std::vector<std::vector<double>> acts(layers + 1);
    std::vector<std::vector<double>> pre(layers);
    std::vector<std::size_t> offsets(layers);
    acts[0].assign(x.begin(), x.end());
    std::size_t offset = 0;
    for (std::size_t l = 0; l < layers; ++l) {
        offsets[l] = offset;
        const auto in = static_cast<std::size_t>(sizes_[l]);
        const auto out = static_cast<std::size_t>(sizes_[l + 1]);
        const double* w = theta.data() + offset;
        const double* b = w + in * out;
        pre[l].assign(out, 0.0);
        acts[l + 1].assign(out, 0.0);
        for (std::size_t o = 0; o < out; ++o) {
            double z = b[o];
            for (std::size_t i = 0; i < in; ++i) {
                z += w[o * in + i] * acts[l][i];
            }
            pre[l][o] = z;
            acts[l + 1][o] = (l + 1 < layers) ? std::max(z, 0.0) : z;
        }
        offset += in * out + out;
    }

    const double s = acts[layers][0];
    const double margin = label * s;
    std::vector<double> delta{weight * (-label) * sigmoid(-margin)};

    for (std::size_t l = layers; l-- > 0;) {
        const auto in = static_cast<std::size_t>(sizes_[l]);
        const auto out = static_cast<std::size_t>(sizes_[l + 1]);
        const double* w = theta.data() + offsets[l];
        double* gw = grad.data() + offsets[l];
        double* gb = gw + in * out;
        std::vector<double> prev(in, 0.0);
        for (std::size_t o = 0; o < out; ++o) {
            gb[o] += delta[o];
            for (std::size_t i = 0; i < in; ++i) {
                gw[o * in + i] += delta[o] * acts[l][i];
                prev[i] += w[o * in + i] * delta[o];
            }
        }
        if (l > 0) {
            for (std::size_t i = 0; i < in; ++i) {
                if (pre[l - 1][i] <= 0.0) {
                    prev[i] = 0.0;
                }
            }
        }
        delta.swap(prev);
    }
    return softplus_margin_loss(margin);
}

MlpFit mlp_fit(const LabeledData& train, const LabeledData& validation, const TrainConfig& config) {
    const auto sizes = mlp_architecture(static_cast<int>(train.x.cols()));
    if (validation.x.cols() != train.x.cols()) {
        throw std::invalid_argument("mlp_fit: train and validation dimensions differ");
    }
    const MlpNet net(sizes);
    std::mt19937_64 rng(config.seed);
    MlpModel init = mlp_init(sizes, rng);
    MlpFit result;
    result.outcome = fit_balanced(net, std::move(init.parameters), train, validation, config, rng);
    result.model.layer_sizes = sizes;
    result.model.parameters = result.outcome.best_theta;
    return result;
}

std::vector<int> mlp_predict(const MlpModel& model, const RowMatrix& x) {
    const MlpNet net(model.layer_sizes);
    std::vector<int> out(static_cast<std::size_t>(x.rows()));
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        out[static_cast<std::size_t>(i)] = label_of(net.score(model.parameters, row_span(x, i)));
    }
    return out;
}

} // namespace qfm
