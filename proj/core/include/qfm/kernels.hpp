#pragma once

/**
 * @file
 * Fidelity kernel K(x, x') = |<psi(x)|psi(x')>|^2 for a frozen circuit, the
 * classical linear and RBF kernels, Gram assembly and validity diagnostics.
 */

#include "qfm/matrix.hpp"
#include "qfm/pqc.hpp"

#include <Eigen/Core>

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

namespace qfm {

enum class KernelKind { Fidelity = 0, Linear = 1, Rbf = 2 };

std::string_view kernel_name(KernelKind kind);

struct KernelMatrix {
    Eigen::MatrixXd values; ///< rows: left samples, columns: right samples
    KernelKind kind = KernelKind::Linear;
};

double fidelity_kernel(const CircuitSpec& spec, std::span<const double> params, std::span<const double> x,
                       std::span<const double> x_prime);

struct GramOptions {
    /// Upper bound on bytes held by cached state vectors.
    std::size_t max_cache_bytes = std::size_t{1} << 30;
    int workers = 1;
};

/// Embedded states of a sample set, computed once and then read-only.
class StateCache {
public:
    StateCache(const CircuitSpec& spec, std::span<const double> params, const RowMatrix& samples,
               const GramOptions& options = {});

    [[nodiscard]] std::size_t size() const noexcept { return states_.size(); }
    [[nodiscard]] const QState& operator[](std::size_t i) const { return states_[i]; }
    [[nodiscard]] std::span<QState> states() noexcept { return states_; }

private:
    std::vector<QState> states_;
};

/// Cross Gram matrix K[i][j] = K(left_i, right_j).
KernelMatrix fidelity_gram(const CircuitSpec& spec, std::span<const double> params, const RowMatrix& left,
                           const RowMatrix& right, const GramOptions& options = {});
/// Self Gram matrix; fills the upper triangle and mirrors it.
KernelMatrix fidelity_gram(const CircuitSpec& spec, std::span<const double> params, const RowMatrix& samples,
                           const GramOptions& options = {});
KernelMatrix fidelity_gram(const StateCache& left, const StateCache& right, int workers = 1);
KernelMatrix fidelity_gram(const StateCache& samples, int workers = 1);

double linear_kernel(std::span<const double> x, std::span<const double> y);
double rbf_kernel(std::span<const double> x, std::span<const double> y, double gamma);

/// 1 / (n_features * population variance of every entry of `train`).
double gamma_scale(const RowMatrix& train);

KernelMatrix linear_gram(const RowMatrix& left, const RowMatrix& right);
KernelMatrix rbf_gram(const RowMatrix& left, const RowMatrix& right, double gamma);

struct KernelDiagnostics {
    double max_asymmetry = 0.0;      ///< max |K_ij - K_ji|
    double max_diagonal_error = 0.0; ///< max |K_ii - 1|
    double min_eigenvalue = 0.0;
    double min_entry = 0.0;
    double max_entry = 0.0;
};

/// Requires a square matrix.
KernelDiagnostics diagnose(const KernelMatrix& k);

/**
 * Binary dump: magic "QFMGRAM1", then little-endian uint64 rows, uint64 cols,
 * uint32 kind, uint32 reserved (0), followed by rows*cols float64 values in
 * row-major order.
 */
void write_gram(std::ostream& out, const KernelMatrix& k);
KernelMatrix read_gram(std::istream& in);

} // namespace qfm
