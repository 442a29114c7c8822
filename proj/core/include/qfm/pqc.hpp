#pragma once

/**
 * @file
 * Data re-uploading circuit family.
 *
 * Gate order for an input x:
 *   1. H on every qubit
 *   2. X on odd-indexed qubits (1, 3, 5, ...)
 *   3. R_y(t_y[q]) then R_z(t_z[q]) on every qubit (trainable, input-free)
 *   4. for block l = 0 .. n_blocks-1:
 *        per qubit q: R_y(alpha) R_z(beta) R_x(gamma), applied in that order, with
 *          alpha = pi (a x[i1] + b)
 *          beta  = pi (c x[i2] + d)
 *          gamma = pi (e (x[i1] + x[i2]) + f)
 *        then CNOTs of entangling_layer(l) in listed order.
 *
 * Flat parameter layout (size 2 n + 6 L n):
 *   [t_y[0], t_z[0], t_y[1], t_z[1], ..., then per block, per qubit: a b c d e f]
 */

#include "qfm/simulator.hpp"

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace qfm {

struct CircuitSpec {
    int n_qubits = 4;
    int n_blocks = 6;
    int input_dim = 16;

    /// Throws std::invalid_argument if any field is out of range.
    void validate() const;

    friend bool operator==(const CircuitSpec&, const CircuitSpec&) = default;
};

std::size_t param_count(const CircuitSpec& spec);

enum class Coefficient { A = 0, B, C, D, E, F };

std::size_t init_ry_index(const CircuitSpec& spec, int qubit);
std::size_t init_rz_index(const CircuitSpec& spec, int qubit);
std::size_t coefficient_index(const CircuitSpec& spec, int block, int qubit, Coefficient coef);

/// Trainable circuit parameters together with the architecture they belong to.
struct ParamVector {
    CircuitSpec spec;
    std::vector<double> values;

    ParamVector() = default;
    explicit ParamVector(const CircuitSpec& s);
    ParamVector(const CircuitSpec& s, std::vector<double> v);

    friend bool operator==(const ParamVector&, const ParamVector&) = default;
};

struct FeaturePair {
    int first;
    int second;
};

/// Round-robin schedule: i1 = 2(l n + q) mod d, i2 = (2(l n + q) + 1) mod d.
FeaturePair feature_pair(const CircuitSpec& spec, int block, int qubit);

struct EncodingAngles {
    double alpha;
    double beta;
    double gamma;
};

EncodingAngles encode_angles(const CircuitSpec& spec, std::span<const double> params,
                             std::span<const double> x, int block, int qubit);

/// Even blocks: ring (q, q+1 mod n). Odd blocks: stride two (q, q+2 mod n).
/// n = 1 yields no pairs; n = 2 yields the single pair (0, 1) for both patterns.
std::vector<std::pair<int, int>> entangling_layer(const CircuitSpec& spec, int block);

/// How a rotation angle depends on the flat parameter vector:
/// angle = scale * (params[slope] * feature + params[offset]); slope may be absent.
struct AngleSource {
    static constexpr std::size_t kNone = static_cast<std::size_t>(-1);
    std::size_t offset = kNone;
    std::size_t slope = kNone;
    double feature = 0.0;
    double scale = 1.0;
};

/// Gate tape for one input plus, per gate, the angle's parameter dependence
/// (sources[k].offset == kNone for fixed gates).
struct EmbeddingCircuit {
    int n_qubits = 0;
    std::vector<Gate> gates;
    std::vector<AngleSource> sources;
};

EmbeddingCircuit build_embedding_circuit(const CircuitSpec& spec, std::span<const double> params,
                                         std::span<const double> x);

/// |psi_theta(x)>.
QState embed(const CircuitSpec& spec, std::span<const double> params, std::span<const double> x);
inline QState embed(const ParamVector& params, std::span<const double> x) {
    return embed(params.spec, params.values, x);
}

/// Per-qubit Pauli-Z expectations (<Z_0>, ..., <Z_{n-1}>).
std::vector<double> readout_features(const QState& state);

/// Adds sum_k angle_grads[k] * d angle_k / d params into `param_grads`.
void chain_angle_gradients(const EmbeddingCircuit& circuit, std::span<const double> angle_grads,
                           std::span<double> param_grads);

} // namespace qfm
