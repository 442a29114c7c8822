#pragma once

/**
 * @file
 * Dense state-vector simulation for the gate set used by the embedding
 * circuits: H, X, R_x, R_y, R_z and CNOT.
 *
 * Conventions:
 *  - R_n(t) = exp(-i t P_n / 2) for P_n in {X, Y, Z}.
 *  - Qubit 0 is the most significant bit of the basis index, i.e. qubit q
 *    corresponds to bit (n_qubits - 1 - q).
 *  - Gates are applied in place with stride loops; no 2^n x 2^n matrices.
 */

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace qfm {

using Complex = std::complex<double>;

/// Row-major 2x2 complex matrix {m00, m01, m10, m11}.
using Mat2 = std::array<Complex, 4>;

enum class Axis { X, Y, Z };

inline constexpr int kMaxQubits = 16;

Mat2 rotation_matrix(Axis axis, double angle);
Mat2 hadamard_matrix();
Mat2 pauli_x_matrix();

class QState {
public:
    /// Prepares |0...0> on `n_qubits` wires; throws std::invalid_argument
    /// outside [1, kMaxQubits].
    explicit QState(int n_qubits);

    /// Wraps an explicit amplitude vector (length must be 2^n_qubits).
    /// Normalization is the caller's responsibility.
    static QState from_amplitudes(int n_qubits, std::vector<Complex> amplitudes);

    [[nodiscard]] int num_qubits() const noexcept { return n_qubits_; }
    [[nodiscard]] std::size_t dimension() const noexcept { return amplitudes_.size(); }
    [[nodiscard]] std::span<const Complex> amplitudes() const noexcept { return amplitudes_; }
    [[nodiscard]] std::span<Complex> amplitudes() noexcept { return amplitudes_; }
    [[nodiscard]] double norm_squared() const noexcept;

    QState& apply_h(int qubit);
    QState& apply_x(int qubit);
    QState& apply_rotation(Axis axis, int qubit, double angle);
    QState& apply_cnot(int control, int target);
    QState& apply_single(int qubit, const Mat2& m);

    /// <psi| Z_qubit |psi>.
    [[nodiscard]] double expect_z(int qubit) const;

    /// Bit mask of `qubit` in the basis index; throws std::out_of_range.
    [[nodiscard]] std::size_t qubit_mask(int qubit) const;

private:
    int n_qubits_;
    std::vector<Complex> amplitudes_;
};

QState zero_state(int n_qubits);

/// <a|b> = sum_i conj(a_i) b_i; throws std::invalid_argument on size mismatch.
Complex inner_product(const QState& a, const QState& b);

/// <a| P_axis(qubit) |b> without materializing P|b>.
Complex pauli_matrix_element(const QState& a, const QState& b, Axis axis, int qubit);

// ---------------------------------------------------------------------------
// Gate sequences

enum class GateKind { H, X, RX, RY, RZ, CNOT };

struct Gate {
    GateKind kind;
    int target;
    int control = -1;   ///< CNOT only
    double angle = 0.0; ///< rotations only

    [[nodiscard]] bool is_rotation() const noexcept {
        return kind == GateKind::RX || kind == GateKind::RY || kind == GateKind::RZ;
    }
};

void apply_gate(QState& state, const Gate& gate);
void apply_gate_inverse(QState& state, const Gate& gate);

/// Runs `gates` on |0...0>.
QState run_circuit(int n_qubits, std::span<const Gate> gates);

/**
 * Adjoint differentiation of f = <psi| O |psi> with O = sum_q weights[q] Z_q,
 * where |psi> = U_N ... U_1 |0> is `final_state`.
 *
 * Returns df/d(angle_k) for every gate k (zero for non-rotation gates).
 * Cost is two backward sweeps over the sequence; no extra forward runs.
 */
std::vector<double> adjoint_angle_gradients(
    const QState& final_state, std::span<const Gate> gates, std::span<const double> z_weights);

} // namespace qfm
