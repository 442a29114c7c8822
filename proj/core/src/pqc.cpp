#include "qfm/pqc.hpp"

#include <numbers>
#include <stdexcept>
#include <string>

namespace qfm {

namespace {

void require_block_qubit(const CircuitSpec& spec, int block, int qubit) {
    if (block < 0 || block >= spec.n_blocks) {
        throw std::out_of_range("block index " + std::to_string(block) + " out of range");
    }
    if (qubit < 0 || qubit >= spec.n_qubits) {
        throw std::out_of_range("qubit index " + std::to_string(qubit) + " out of range");
    }
}

void require_sizes(const CircuitSpec& spec, std::span<const double> params, std::span<const double> x) {
    if (params.size() != param_count(spec)) {
        throw std::invalid_argument("parameter vector has length " + std::to_string(params.size()) +
                                    ", expected " + std::to_string(param_count(spec)));
    }
    if (x.size() != static_cast<std::size_t>(spec.input_dim)) {
        throw std::invalid_argument("input has length " + std::to_string(x.size()) + ", expected " +
                                    std::to_string(spec.input_dim));
    }
}

} // namespace

void CircuitSpec::validate() const {
    if (n_qubits < 1 || n_qubits > kMaxQubits) {
        throw std::invalid_argument("n_qubits out of range");
    }
    if (n_blocks < 0) {
        throw std::invalid_argument("n_blocks must be non-negative");
    }
    if (input_dim < 2) {
        throw std::invalid_argument("input_dim must be at least 2");
    }
}

std::size_t param_count(const CircuitSpec& spec) {
    const auto n = static_cast<std::size_t>(spec.n_qubits);
    const auto l = static_cast<std::size_t>(spec.n_blocks);
    return 2 * n + 6 * l * n;
}

std::size_t init_ry_index(const CircuitSpec& spec, int qubit) {
    if (qubit < 0 || qubit >= spec.n_qubits) {
        throw std::out_of_range("qubit index out of range");
    }
    return 2 * static_cast<std::size_t>(qubit);
}

std::size_t init_rz_index(const CircuitSpec& spec, int qubit) { return init_ry_index(spec, qubit) + 1; }

std::size_t coefficient_index(const CircuitSpec& spec, int block, int qubit, Coefficient coef) {
    require_block_qubit(spec, block, qubit);
    const auto n = static_cast<std::size_t>(spec.n_qubits);
    const auto unit = static_cast<std::size_t>(block) * n + static_cast<std::size_t>(qubit);
    return 2 * n + 6 * unit + static_cast<std::size_t>(coef);
}

ParamVector::ParamVector(const CircuitSpec& s) : spec(s), values(param_count(s), 0.0) {}

ParamVector::ParamVector(const CircuitSpec& s, std::vector<double> v) : spec(s), values(std::move(v)) {
    if (values.size() != param_count(spec)) {
        throw std::invalid_argument("parameter vector length does not match circuit spec");
    }
}

FeaturePair feature_pair(const CircuitSpec& spec, int block, int qubit) {
    require_block_qubit(spec, block, qubit);
    const int slot = block * spec.n_qubits + qubit;
    return {(2 * slot) % spec.input_dim, (2 * slot + 1) % spec.input_dim};
}

EncodingAngles encode_angles(const CircuitSpec& spec, std::span<const double> params,
                             std::span<const double> x, int block, int qubit) {
    require_sizes(spec, params, x);
    const auto [i1, i2] = feature_pair(spec, block, qubit);
    const auto at = [&](Coefficient c) { return params[coefficient_index(spec, block, qubit, c)]; };
    constexpr double pi = std::numbers::pi;
    return {
        pi * (at(Coefficient::A) * x[i1] + at(Coefficient::B)),
        pi * (at(Coefficient::C) * x[i2] + at(Coefficient::D)),
        pi * (at(Coefficient::E) * (x[i1] + x[i2]) + at(Coefficient::F)),
    };
}

std::vector<std::pair<int, int>> entangling_layer(const CircuitSpec& spec, int block) {
    const int n = spec.n_qubits;
    if (n < 2) {
        return {};
    }
    if (n == 2) {
        return {{0, 1}};
    }
    const int stride = (block % 2 == 0) ? 1 : 2;
    std::vector<std::pair<int, int>> pairs;
    pairs.reserve(static_cast<std::size_t>(n));
    for (int q = 0; q < n; ++q) {
        const int t = (q + stride) % n;
        if (t != q) {
            pairs.emplace_back(q, t);
        }
    }
    return pairs;
}

EmbeddingCircuit build_embedding_circuit(const CircuitSpec& spec, std::span<const double> params,
                                         std::span<const double> x) {
    spec.validate();
    require_sizes(spec, params, x);
    const int n = spec.n_qubits;
    constexpr double pi = std::numbers::pi;

    EmbeddingCircuit circuit;
    circuit.n_qubits = n;
    const std::size_t expected = static_cast<std::size_t>(n) * (4 + 3 * spec.n_blocks) +
                                 static_cast<std::size_t>(spec.n_blocks * n);
    circuit.gates.reserve(expected);
    circuit.sources.reserve(expected);

    auto fixed = [&](Gate g) {
        circuit.gates.push_back(g);
        circuit.sources.push_back({});
    };
    auto rotation = [&](GateKind kind, int q, AngleSource src) {
        double angle = src.scale * params[src.offset];
        if (src.slope != AngleSource::kNone) {
            angle += src.scale * params[src.slope] * src.feature;
        }
        circuit.gates.push_back({kind, q, -1, angle});
        circuit.sources.push_back(src);
    };

    for (int q = 0; q < n; ++q) {
        fixed({GateKind::H, q});
    }
    for (int q = 1; q < n; q += 2) {
        fixed({GateKind::X, q});
    }
    for (int q = 0; q < n; ++q) {
        rotation(GateKind::RY, q, {init_ry_index(spec, q)});
        rotation(GateKind::RZ, q, {init_rz_index(spec, q)});
    }
    for (int l = 0; l < spec.n_blocks; ++l) {
        for (int q = 0; q < n; ++q) {
            const auto [i1, i2] = feature_pair(spec, l, q);
            const auto idx = [&](Coefficient c) { return coefficient_index(spec, l, q, c); };
            rotation(GateKind::RY, q, {idx(Coefficient::B), idx(Coefficient::A), x[i1], pi});
            rotation(GateKind::RZ, q, {idx(Coefficient::D), idx(Coefficient::C), x[i2], pi});
            rotation(GateKind::RX, q, {idx(Coefficient::F), idx(Coefficient::E), x[i1] + x[i2], pi});
        }
        for (const auto& [c, t] : entangling_layer(spec, l)) {
            fixed({GateKind::CNOT, t, c});
        }
    }
    return circuit;
}

QState embed(const CircuitSpec& spec, std::span<const double> params, std::span<const double> x) {
    const auto circuit = build_embedding_circuit(spec, params, x);
    return run_circuit(spec.n_qubits, circuit.gates);
}

std::vector<double> readout_features(const QState& state) {
    const int n = state.num_qubits();
    std::vector<double> z(static_cast<std::size_t>(n), 0.0);
    const auto amps = state.amplitudes();
    for (std::size_t i = 0; i < amps.size(); ++i) {
        const double p = std::norm(amps[i]);
        for (int q = 0; q < n; ++q) {
            const std::size_t mask = std::size_t{1} << (n - 1 - q);
            z[static_cast<std::size_t>(q)] += (i & mask) ? -p : p;
        }
    }
    return z;
}

void chain_angle_gradients(const EmbeddingCircuit& circuit, std::span<const double> angle_grads,
                           std::span<double> param_grads) {
    if (angle_grads.size() != circuit.gates.size()) {
        throw std::invalid_argument("chain_angle_gradients: gradient length mismatch");
    }
    for (std::size_t k = 0; k < angle_grads.size(); ++k) {
        const auto& src = circuit.sources[k];
        if (src.offset == AngleSource::kNone) {
            continue;
        }
        const double g = angle_grads[k] * src.scale;
        param_grads[src.offset] += g;
        if (src.slope != AngleSource::kNone) {
            param_grads[src.slope] += g * src.feature;
        }
    }
}

} // namespace qfm
