#include "qfm/training.hpp"

#include <stdexcept>

namespace qfm {

double decision_score(std::span<const double> z, const LinearHead& head) {
    if (z.size() != head.w.size()) {
        throw std::invalid_argument("decision_score: feature and weight lengths differ");
    }
    double s = head.b;
    for (std::size_t i = 0; i < z.size(); ++i) {
        s += head.w[i] * z[i];
    }
    return s;
}

double softplus_loss(std::span<const double> scores, std::span<const int> labels) {
    if (scores.empty()) {
        throw std::invalid_argument("softplus_loss: empty batch");
    }
    if (scores.size() != labels.size()) {
        throw std::invalid_argument("softplus_loss: scores and labels differ in length");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        acc += softplus_margin_loss(labels[i] * scores[i]);
    }
    return acc / static_cast<double>(scores.size());
}

VqcModel::VqcModel(const CircuitSpec& spec) : spec_(spec), n_circuit_(param_count(spec)) {
    spec_.validate();
}

std::size_t VqcModel::num_params() const noexcept {
    return n_circuit_ + static_cast<std::size_t>(spec_.n_qubits) + 1;
}

double VqcModel::score(std::span<const double> theta, std::span<const double> x) const {
    const auto state = embed(spec_, theta.first(n_circuit_), x);
    const auto z = readout_features(state);
    double s = theta.back();
    for (std::size_t q = 0; q < z.size(); ++q) {
        s += theta[n_circuit_ + q] * z[q];
    }
    return s;
}

double VqcModel::backprop(std::span<const double> theta, std::span<const double> x, int label, double weight,
                          std::span<double> grad) const {
    const auto circuit = build_embedding_circuit(spec_, theta.first(n_circuit_), x);
    const auto state = run_circuit(spec_.n_qubits, circuit.gates);
    const auto z = readout_features(state);
    const auto n = z.size();

    double s = theta.back();
    for (std::size_t q = 0; q < n; ++q) {
        s += theta[n_circuit_ + q] * z[q];
    }
    const double margin = label * s;
    // d softplus(-y s) / ds = -y sigmoid(-y s)
    const double upstream = weight * (-label) * sigmoid(-margin);

    std::vector<double> z_weights(n);
    for (std::size_t q = 0; q < n; ++q) {
        grad[n_circuit_ + q] += upstream * z[q];
        z_weights[q] = upstream * theta[n_circuit_ + q];
    }
    grad[n_circuit_ + n] += upstream;

    const auto angle_grads = adjoint_angle_gradients(state, circuit.gates, z_weights);
    chain_angle_gradients(circuit, angle_grads, grad.first(n_circuit_));
    return softplus_margin_loss(margin);
}

std::vector<double> VqcModel::pack(std::span<const double> params, const LinearHead& head) const {
    if (params.size() != n_circuit_ || head.w.size() != static_cast<std::size_t>(spec_.n_qubits)) {
        throw std::invalid_argument("VqcModel::pack: size mismatch");
    }
    std::vector<double> theta(params.begin(), params.end());
    theta.insert(theta.end(), head.w.begin(), head.w.end());
    theta.push_back(head.b);
    return theta;
}

ParamVector VqcModel::unpack_params(std::span<const double> theta) const {
    const auto p = theta.first(n_circuit_);
    return ParamVector(spec_, std::vector<double>(p.begin(), p.end()));
}

LinearHead VqcModel::unpack_head(std::span<const double> theta) const {
    const auto w = theta.subspan(n_circuit_, static_cast<std::size_t>(spec_.n_qubits));
    return {std::vector<double>(w.begin(), w.end()), theta.back()};
}

std::vector<double> VqcModel::initial_theta(std::mt19937_64& rng) const {
    std::uniform_real_distribution<double> circuit_init(-0.1, 0.1);
    std::uniform_real_distribution<double> head_init(-0.5, 0.5);
    std::vector<double> theta(num_params(), 0.0);
    for (std::size_t i = 0; i < n_circuit_; ++i) {
        theta[i] = circuit_init(rng);
    }
    for (std::size_t q = 0; q < static_cast<std::size_t>(spec_.n_qubits); ++q) {
        theta[n_circuit_ + q] = head_init(rng);
    }
    theta.back() = 0.0;
    return theta;
}

VqcGradient gradient(const CircuitSpec& spec, std::span<const double> params, const LinearHead& head,
                     const RowMatrix& batch_x, std::span<const int> batch_y) {
    if (batch_y.empty()) {
        throw std::invalid_argument("gradient: empty batch");
    }
    if (static_cast<std::size_t>(batch_x.rows()) != batch_y.size()) {
        throw std::invalid_argument("gradient: rows and labels differ in count");
    }
    const VqcModel model(spec);
    const auto theta = model.pack(params, head);
    std::vector<double> grad(theta.size(), 0.0);
    const double weight = 1.0 / static_cast<double>(batch_y.size());
    double loss = 0.0;
    for (std::size_t i = 0; i < batch_y.size(); ++i) {
        loss += model.backprop(theta, row_span(batch_x, static_cast<Eigen::Index>(i)), batch_y[i], weight, grad);
    }
    for (const double g : grad) {
        if (!std::isfinite(g)) {
            throw std::runtime_error("gradient: non-finite value encountered");
        }
    }
    const std::size_t n_circuit = param_count(spec);
    VqcGradient out;
    out.d_params.assign(grad.begin(), grad.begin() + static_cast<std::ptrdiff_t>(n_circuit));
    out.d_w.assign(grad.begin() + static_cast<std::ptrdiff_t>(n_circuit), grad.end() - 1);
    out.d_b = grad.back();
    out.loss = loss * weight;
    return out;
}

TrainResult train_vqc(const CircuitSpec& spec, const LabeledData& train, const LabeledData& validation,
                      const TrainConfig& config) {
    const VqcModel model(spec);
    if (train.x.cols() != spec.input_dim || validation.x.cols() != spec.input_dim) {
        throw std::invalid_argument("train_vqc: feature dimension does not match circuit input_dim");
    }
    std::mt19937_64 rng(config.seed);
    auto theta = model.initial_theta(rng);
    auto fit = fit_balanced(model, std::move(theta), train, validation, config, rng);

    TrainResult result;
    result.best_params = model.unpack_params(fit.best_theta);
    result.best_head = model.unpack_head(fit.best_theta);
    result.best_val_accuracy = fit.best_val_accuracy;
    result.loss_trace = std::move(fit.loss_trace);
    result.best_val_trace = std::move(fit.best_val_trace);
    result.epochs_run = fit.epochs_run;
    result.best_epoch = fit.best_epoch;
    return result;
}

std::vector<int> vqc_predict(const ParamVector& params, const LinearHead& head, const RowMatrix& x) {
    std::vector<int> out(static_cast<std::size_t>(x.rows()));
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        const auto z = readout_features(embed(params, row_span(x, i)));
        out[static_cast<std::size_t>(i)] = label_of(decision_score(z, head));
    }
    return out;
}

double accuracy(std::span<const int> predicted, std::span<const int> truth) {
    if (predicted.size() != truth.size() || truth.empty()) {
        throw std::invalid_argument("accuracy: size mismatch or empty input");
    }
    std::size_t correct = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        correct += predicted[i] == truth[i] ? 1 : 0;
    }
    return static_cast<double>(correct) / static_cast<double>(truth.size());
}

} // namespace qfm
