#include "qfm/kernels.hpp"

#include "qfm/parallel.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

namespace qfm {

namespace {

void require_same_dim(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) {
        throw std::invalid_argument("kernel inputs differ in dimension");
    }
}

double squared_overlap(const QState& a, const QState& b) { return std::norm(inner_product(a, b)); }

constexpr char kGramMagic[8] = {'Q', 'F', 'M', 'G', 'R', 'A', 'M', '1'};

template <class T>
void write_le(std::ostream& out, T value) {
    static_assert(std::endian::native == std::endian::little, "big-endian hosts are not supported");
    out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <class T>
T read_le(std::istream& in) {
    T value{};
    in.read(reinterpret_cast<char*>(&value), sizeof(T));
    if (!in) {
        throw std::runtime_error("truncated Gram dump");
    }
    return value;
}

} // namespace

std::string_view kernel_name(KernelKind kind) {
    switch (kind) {
    case KernelKind::Fidelity: return "fidelity";
    case KernelKind::Linear: return "linear";
    case KernelKind::Rbf: return "rbf";
    }
    return "unknown";
}

double fidelity_kernel(const CircuitSpec& spec, std::span<const double> params, std::span<const double> x,
                       std::span<const double> x_prime) {
    require_same_dim(x, x_prime);
    return squared_overlap(embed(spec, params, x), embed(spec, params, x_prime));
}

StateCache::StateCache(const CircuitSpec& spec, std::span<const double> params, const RowMatrix& samples,
                       const GramOptions& options) {
    spec.validate();
    const std::size_t bytes = static_cast<std::size_t>(samples.rows()) * (std::size_t{1} << spec.n_qubits) *
                              sizeof(Complex);
    if (bytes > options.max_cache_bytes) {
        throw std::length_error("state cache would need " + std::to_string(bytes) + " bytes, budget is " +
                                std::to_string(options.max_cache_bytes));
    }
    states_.assign(static_cast<std::size_t>(samples.rows()), QState(spec.n_qubits));
    parallel_for(states_.size(), options.workers, [&](std::size_t i) {
        states_[i] = embed(spec, params, row_span(samples, static_cast<Eigen::Index>(i)));
    });
}

KernelMatrix fidelity_gram(const StateCache& left, const StateCache& right, int workers) {
    KernelMatrix k{Eigen::MatrixXd(static_cast<Eigen::Index>(left.size()), static_cast<Eigen::Index>(right.size())),
                   KernelKind::Fidelity};
    parallel_for(left.size(), workers, [&](std::size_t i) {
        for (std::size_t j = 0; j < right.size(); ++j) {
            k.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = squared_overlap(left[i], right[j]);
        }
    });
    return k;
}

KernelMatrix fidelity_gram(const StateCache& samples, int workers) {
    const auto n = static_cast<Eigen::Index>(samples.size());
    KernelMatrix k{Eigen::MatrixXd(n, n), KernelKind::Fidelity};
    parallel_for(samples.size(), workers, [&](std::size_t i) {
        const auto r = static_cast<Eigen::Index>(i);
        for (Eigen::Index c = r; c < n; ++c) {
            k.values(r, c) = squared_overlap(samples[i], samples[static_cast<std::size_t>(c)]);
        }
    });
    for (Eigen::Index r = 0; r < n; ++r) {
        for (Eigen::Index c = 0; c < r; ++c) {
            k.values(r, c) = k.values(c, r);
        }
    }
    return k;
}

KernelMatrix fidelity_gram(const CircuitSpec& spec, std::span<const double> params, const RowMatrix& left,
                           const RowMatrix& right, const GramOptions& options) {
    if (left.cols() != right.cols()) {
        throw std::invalid_argument("fidelity_gram: left and right feature dimensions differ");
    }
    GramOptions half = options;
    half.max_cache_bytes = options.max_cache_bytes / 2;
    const StateCache lc(spec, params, left, half);
    const StateCache rc(spec, params, right, half);
    return fidelity_gram(lc, rc, options.workers);
}

KernelMatrix fidelity_gram(const CircuitSpec& spec, std::span<const double> params, const RowMatrix& samples,
                           const GramOptions& options) {
    const StateCache cache(spec, params, samples, options);
    return fidelity_gram(cache, options.workers);
}

double linear_kernel(std::span<const double> x, std::span<const double> y) {
    require_same_dim(x, y);
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        acc += x[i] * y[i];
    }
    return acc;
}

double rbf_kernel(std::span<const double> x, std::span<const double> y, double gamma) {
    require_same_dim(x, y);
    if (!(gamma > 0.0) || !std::isfinite(gamma)) {
        throw std::invalid_argument("rbf_kernel: gamma must be positive");
    }
    double d2 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - y[i];
        d2 += d * d;
    }
    return std::exp(-gamma * d2);
}

double gamma_scale(const RowMatrix& train) {
    if (train.size() == 0) {
        throw std::invalid_argument("gamma_scale: empty matrix");
    }
    const double mean = train.mean();
    const double var = (train.array() - mean).square().mean();
    if (!(var > 0.0)) {
        // Constant training matrix.
        return 1.0;
    }
    return 1.0 / (static_cast<double>(train.cols()) * var);
}

KernelMatrix linear_gram(const RowMatrix& left, const RowMatrix& right) {
    if (left.cols() != right.cols()) {
        throw std::invalid_argument("linear_gram: feature dimensions differ");
    }
    KernelMatrix k{Eigen::MatrixXd(left.rows(), right.rows()), KernelKind::Linear};
    for (Eigen::Index i = 0; i < left.rows(); ++i) {
        for (Eigen::Index j = 0; j < right.rows(); ++j) {
            k.values(i, j) = linear_kernel(row_span(left, i), row_span(right, j));
        }
    }
    return k;
}

KernelMatrix rbf_gram(const RowMatrix& left, const RowMatrix& right, double gamma) {
    if (left.cols() != right.cols()) {
        throw std::invalid_argument("rbf_gram: feature dimensions differ");
    }
    KernelMatrix k{Eigen::MatrixXd(left.rows(), right.rows()), KernelKind::Rbf};
    for (Eigen::Index i = 0; i < left.rows(); ++i) {
        for (Eigen::Index j = 0; j < right.rows(); ++j) {
            k.values(i, j) = rbf_kernel(row_span(left, i), row_span(right, j), gamma);
        }
    }
    return k;
}

KernelDiagnostics diagnose(const KernelMatrix& k) {
    const auto& m = k.values;
    if (m.rows() != m.cols() || m.rows() == 0) {
        throw std::invalid_argument("diagnose: kernel matrix must be square and non-empty");
    }
    KernelDiagnostics d;
    d.max_asymmetry = (m - m.transpose()).cwiseAbs().maxCoeff();
    d.max_diagonal_error = (m.diagonal().array() - 1.0).abs().maxCoeff();
    d.min_entry = m.minCoeff();
    d.max_entry = m.maxCoeff();
    const Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym, Eigen::EigenvaluesOnly);
    d.min_eigenvalue = solver.eigenvalues().minCoeff();
    return d;
}

void write_gram(std::ostream& out, const KernelMatrix& k) {
    out.write(kGramMagic, sizeof(kGramMagic));
    write_le<std::uint64_t>(out, static_cast<std::uint64_t>(k.values.rows()));
    write_le<std::uint64_t>(out, static_cast<std::uint64_t>(k.values.cols()));
    write_le<std::uint32_t>(out, static_cast<std::uint32_t>(k.kind));
    write_le<std::uint32_t>(out, 0);
    for (Eigen::Index i = 0; i < k.values.rows(); ++i) {
        for (Eigen::Index j = 0; j < k.values.cols(); ++j) {
            write_le<double>(out, k.values(i, j));
        }
    }
    if (!out) {
        throw std::runtime_error("failed to write Gram dump");
    }
}

KernelMatrix read_gram(std::istream& in) {
    char magic[sizeof(kGramMagic)];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kGramMagic, sizeof(kGramMagic)) != 0) {
        throw std::runtime_error("not a Gram dump (bad magic)");
    }
    const auto rows = read_le<std::uint64_t>(in);
    const auto cols = read_le<std::uint64_t>(in);
    const auto kind = read_le<std::uint32_t>(in);
    (void)read_le<std::uint32_t>(in);
    if (kind > static_cast<std::uint32_t>(KernelKind::Rbf)) {
        throw std::runtime_error("Gram dump has unknown kernel kind");
    }
    KernelMatrix k{Eigen::MatrixXd(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols)),
                   static_cast<KernelKind>(kind)};
    for (Eigen::Index i = 0; i < k.values.rows(); ++i) {
        for (Eigen::Index j = 0; j < k.values.cols(); ++j) {
            k.values(i, j) = read_le<double>(in);
        }
    }
    return k;
}

} // namespace qfm
