#include "qfm/simulator.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace qfm {

namespace {

constexpr Complex kI{0.0, 1.0};

void require_finite(double angle) {
    if (!std::isfinite(angle)) {
        throw std::invalid_argument("rotation angle must be finite");
    }
}

// Visits every (i0, i1) amplitude pair differing only in the bit `mask`.
template <class F>
void for_each_pair(std::size_t dim, std::size_t mask, F&& f) {
    for (std::size_t base = 0; base < dim; base += 2 * mask) {
        for (std::size_t k = 0; k < mask; ++k) {
            const std::size_t i0 = base + k;
            f(i0, i0 | mask);
        }
    }
}

} // namespace

Mat2 rotation_matrix(Axis axis, double angle) {
    require_finite(angle);
    const double c = std::cos(angle / 2.0);
    const double s = std::sin(angle / 2.0);
    switch (axis) {
    case Axis::X:
        return {Complex{c, 0.0}, Complex{0.0, -s}, Complex{0.0, -s}, Complex{c, 0.0}};
    case Axis::Y:
        return {Complex{c, 0.0}, Complex{-s, 0.0}, Complex{s, 0.0}, Complex{c, 0.0}};
    case Axis::Z:
        return {Complex{c, -s}, Complex{0.0, 0.0}, Complex{0.0, 0.0}, Complex{c, s}};
    }
    throw std::invalid_argument("unknown rotation axis");
}

Mat2 hadamard_matrix() {
    const double h = 1.0 / std::sqrt(2.0);
    return {Complex{h, 0.0}, Complex{h, 0.0}, Complex{h, 0.0}, Complex{-h, 0.0}};
}

Mat2 pauli_x_matrix() {
    return {Complex{0.0, 0.0}, Complex{1.0, 0.0}, Complex{1.0, 0.0}, Complex{0.0, 0.0}};
}

QState::QState(int n_qubits) : n_qubits_(n_qubits) {
    if (n_qubits < 1 || n_qubits > kMaxQubits) {
        throw std::invalid_argument("n_qubits must be in [1, " + std::to_string(kMaxQubits) +
                                    "], got " + std::to_string(n_qubits));
    }
    amplitudes_.assign(std::size_t{1} << n_qubits, Complex{0.0, 0.0});
    amplitudes_[0] = Complex{1.0, 0.0};
}

QState QState::from_amplitudes(int n_qubits, std::vector<Complex> amplitudes) {
    QState state(n_qubits);
    if (amplitudes.size() != state.dimension()) {
        throw std::invalid_argument("amplitude vector length must be 2^n_qubits");
    }
    state.amplitudes_ = std::move(amplitudes);
    return state;
}

double QState::norm_squared() const noexcept {
    double acc = 0.0;
    for (const auto& a : amplitudes_) {
        acc += std::norm(a);
    }
    return acc;
}

std::size_t QState::qubit_mask(int qubit) const {
    if (qubit < 0 || qubit >= n_qubits_) {
        throw std::out_of_range("qubit index " + std::to_string(qubit) + " out of range for " +
                                std::to_string(n_qubits_) + " qubits");
    }
    return std::size_t{1} << (n_qubits_ - 1 - qubit);
}

QState& QState::apply_single(int qubit, const Mat2& m) {
    const std::size_t mask = qubit_mask(qubit);
    for_each_pair(dimension(), mask, [&](std::size_t i0, std::size_t i1) {
        const Complex a0 = amplitudes_[i0];
        const Complex a1 = amplitudes_[i1];
        amplitudes_[i0] = m[0] * a0 + m[1] * a1;
        amplitudes_[i1] = m[2] * a0 + m[3] * a1;
    });
    return *this;
}

QState& QState::apply_h(int qubit) {
    const std::size_t mask = qubit_mask(qubit);
    const double h = 1.0 / std::sqrt(2.0);
    for_each_pair(dimension(), mask, [&](std::size_t i0, std::size_t i1) {
        const Complex a0 = amplitudes_[i0];
        const Complex a1 = amplitudes_[i1];
        amplitudes_[i0] = h * (a0 + a1);
        amplitudes_[i1] = h * (a0 - a1);
    });
    return *this;
}

QState& QState::apply_x(int qubit) {
    const std::size_t mask = qubit_mask(qubit);
    for_each_pair(dimension(), mask,
                  [&](std::size_t i0, std::size_t i1) { std::swap(amplitudes_[i0], amplitudes_[i1]); });
    return *this;
}

QState& QState::apply_rotation(Axis axis, int qubit, double angle) {
    require_finite(angle);
    const std::size_t mask = qubit_mask(qubit);
    const double c = std::cos(angle / 2.0);
    const double s = std::sin(angle / 2.0);
    switch (axis) {
    case Axis::X:
        for_each_pair(dimension(), mask, [&](std::size_t i0, std::size_t i1) {
            const Complex a0 = amplitudes_[i0];
            const Complex a1 = amplitudes_[i1];
            amplitudes_[i0] = c * a0 - kI * s * a1;
            amplitudes_[i1] = c * a1 - kI * s * a0;
        });
        break;
    case Axis::Y:
        for_each_pair(dimension(), mask, [&](std::size_t i0, std::size_t i1) {
            const Complex a0 = amplitudes_[i0];
            const Complex a1 = amplitudes_[i1];
            amplitudes_[i0] = c * a0 - s * a1;
            amplitudes_[i1] = s * a0 + c * a1;
        });
        break;
    case Axis::Z: {
        const Complex lo{c, -s};
        const Complex hi{c, s};
        for_each_pair(dimension(), mask, [&](std::size_t i0, std::size_t i1) {
            amplitudes_[i0] *= lo;
            amplitudes_[i1] *= hi;
        });
        break;
    }
    }
    return *this;
}

QState& QState::apply_cnot(int control, int target) {
    if (control == target) {
        throw std::invalid_argument("CNOT control and target must differ");
    }
    const std::size_t cmask = qubit_mask(control);
    const std::size_t tmask = qubit_mask(target);
    for_each_pair(dimension(), tmask, [&](std::size_t i0, std::size_t i1) {
        if (i0 & cmask) {
            std::swap(amplitudes_[i0], amplitudes_[i1]);
        }
    });
    return *this;
}

double QState::expect_z(int qubit) const {
    const std::size_t mask = qubit_mask(qubit);
    double acc = 0.0;
    for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
        const double p = std::norm(amplitudes_[i]);
        acc += (i & mask) ? -p : p;
    }
    return acc;
}

QState zero_state(int n_qubits) { return QState(n_qubits); }

Complex inner_product(const QState& a, const QState& b) {
    if (a.num_qubits() != b.num_qubits()) {
        throw std::invalid_argument("inner_product: qubit count mismatch");
    }
    const auto x = a.amplitudes();
    const auto y = b.amplitudes();
    Complex acc{0.0, 0.0};
    for (std::size_t i = 0; i < x.size(); ++i) {
        acc += std::conj(x[i]) * y[i];
    }
    return acc;
}

Complex pauli_matrix_element(const QState& a, const QState& b, Axis axis, int qubit) {
    if (a.num_qubits() != b.num_qubits()) {
        throw std::invalid_argument("pauli_matrix_element: qubit count mismatch");
    }
    const std::size_t mask = b.qubit_mask(qubit);
    const auto x = a.amplitudes();
    const auto y = b.amplitudes();
    Complex acc{0.0, 0.0};
    switch (axis) {
    case Axis::X:
        for_each_pair(y.size(), mask, [&](std::size_t i0, std::size_t i1) {
            acc += std::conj(x[i0]) * y[i1] + std::conj(x[i1]) * y[i0];
        });
        break;
    case Axis::Y:
        // Y|0> = i|1>, Y|1> = -i|0>
        for_each_pair(y.size(), mask, [&](std::size_t i0, std::size_t i1) {
            acc += std::conj(x[i0]) * (-kI * y[i1]) + std::conj(x[i1]) * (kI * y[i0]);
        });
        break;
    case Axis::Z:
        for_each_pair(y.size(), mask, [&](std::size_t i0, std::size_t i1) {
            acc += std::conj(x[i0]) * y[i0] - std::conj(x[i1]) * y[i1];
        });
        break;
    }
    return acc;
}

void apply_gate(QState& state, const Gate& gate) {
    switch (gate.kind) {
    case GateKind::H: state.apply_h(gate.target); break;
    case GateKind::X: state.apply_x(gate.target); break;
    case GateKind::RX: state.apply_rotation(Axis::X, gate.target, gate.angle); break;
    case GateKind::RY: state.apply_rotation(Axis::Y, gate.target, gate.angle); break;
    case GateKind::RZ: state.apply_rotation(Axis::Z, gate.target, gate.angle); break;
    case GateKind::CNOT: state.apply_cnot(gate.control, gate.target); break;
    }
}

void apply_gate_inverse(QState& state, const Gate& gate) {
    switch (gate.kind) {
    case GateKind::RX: state.apply_rotation(Axis::X, gate.target, -gate.angle); break;
    case GateKind::RY: state.apply_rotation(Axis::Y, gate.target, -gate.angle); break;
    case GateKind::RZ: state.apply_rotation(Axis::Z, gate.target, -gate.angle); break;
    default: apply_gate(state, gate); break; // self-inverse
    }
}

QState run_circuit(int n_qubits, std::span<const Gate> gates) {
    QState state(n_qubits);
    for (const auto& g : gates) {
        apply_gate(state, g);
    }
    return state;
}

std::vector<double> adjoint_angle_gradients(
    const QState& final_state, std::span<const Gate> gates, std::span<const double> z_weights) {
    const int n = final_state.num_qubits();
    if (z_weights.size() != static_cast<std::size_t>(n)) {
        throw std::invalid_argument("adjoint_angle_gradients: one weight per qubit required");
    }
    std::vector<double> grads(gates.size(), 0.0);

    std::size_t first_rotation = gates.size();
    for (std::size_t k = 0; k < gates.size(); ++k) {
        if (gates[k].is_rotation()) {
            first_rotation = k;
            break;
        }
    }
    if (first_rotation == gates.size()) {
        return grads;
    }

    QState phi = final_state;
    QState lambda = final_state;
    {
        // O is diagonal in the computational basis.
        auto amps = lambda.amplitudes();
        for (std::size_t i = 0; i < amps.size(); ++i) {
            double eig = 0.0;
            for (int q = 0; q < n; ++q) {
                const std::size_t mask = std::size_t{1} << (n - 1 - q);
                eig += (i & mask) ? -z_weights[q] : z_weights[q];
            }
            amps[i] *= eig;
        }
    }

    for (std::size_t k = gates.size(); k-- > first_rotation;) {
        const Gate& g = gates[k];
        if (g.is_rotation()) {
            const Axis axis = g.kind == GateKind::RX ? Axis::X : g.kind == GateKind::RY ? Axis::Y : Axis::Z;
            grads[k] = pauli_matrix_element(lambda, phi, axis, g.target).imag();
        }
        if (k == first_rotation) {
            break;
        }
        apply_gate_inverse(phi, g);
        apply_gate_inverse(lambda, g);
    }
    return grads;
}

} // namespace qfm
