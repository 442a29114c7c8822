#include "qfm/kernels.hpp"
#include "qfm/preprocess.hpp"

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <random>
#include <sstream>

using namespace qfm;

namespace {

RowMatrix random_matrix(int rows, int cols, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    RowMatrix m(rows, cols);
    for (Eigen::Index i = 0; i < m.size(); ++i) {
        m.data()[i] = g(rng);
    }
    return m;
}

std::vector<double> uniform(std::size_t n, double lo, double hi, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> v(n);
    for (auto& e : v) {
        e = u(rng);
    }
    return v;
}

double min_eigenvalue(const Eigen::MatrixXd& m) {
    return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
}

} // namespace

TEST(FidelityKernel, SelfAndSymmetry) {
    std::mt19937_64 rng(71);
    const CircuitSpec spec{3, 4, 6};
    const auto p = uniform(param_count(spec), -1, 1, rng);
    for (int t = 0; t < 10; ++t) {
        const auto x = uniform(6, -2, 2, rng);
        const auto y = uniform(6, -2, 2, rng);
        EXPECT_NEAR(fidelity_kernel(spec, p, x, x), 1.0, 1e-10);
        EXPECT_NEAR(fidelity_kernel(spec, p, x, y), fidelity_kernel(spec, p, y, x), 1e-12);
    }
}

TEST(FidelityKernel, PlusAgainstZeroIsHalf) {
    // n = 1, no blocks: embed = R_z(tz) R_y(ty) H |0>. ty = 0, tz = 0 gives |+>;
    // ty = -pi/2 rotates |+> back to |0>.
    const CircuitSpec spec{1, 0, 2};
    const std::vector<double> plus{0.0, 0.0};
    const std::vector<double> zero{-std::numbers::pi / 2, 0.0};
    const std::vector<double> x{0.0, 0.0};
    const auto a = embed(spec, plus, x);
    const auto b = embed(spec, zero, x);
    EXPECT_NEAR(std::norm(b.amplitudes()[0]), 1.0, 1e-12);
    EXPECT_NEAR(std::norm(inner_product(a, b)), 0.5, 1e-12);
}

TEST(FidelityGram, SingleSample) {
    const CircuitSpec spec{2, 1, 2};
    const std::vector<double> p(param_count(spec), 0.3);
    RowMatrix x(1, 2);
    x << 0.4, -0.9;
    const auto k = fidelity_gram(spec, p, x);
    ASSERT_EQ(k.values.rows(), 1);
    EXPECT_NEAR(k.values(0, 0), 1.0, 1e-12);
    EXPECT_EQ(k.kind, KernelKind::Fidelity);
}

TEST(FidelityGram, MatchesCacheFreeRecomputation) {
    std::mt19937_64 rng(72);
    const CircuitSpec spec{2, 3, 4};
    const auto p = uniform(param_count(spec), -1, 1, rng);
    const RowMatrix a = random_matrix(3, 4, rng);
    const RowMatrix b = random_matrix(5, 4, rng);
    const auto self = fidelity_gram(spec, p, a);
    const auto cross = fidelity_gram(spec, p, a, b);
    for (Eigen::Index i = 0; i < 3; ++i) {
        for (Eigen::Index j = 0; j < 3; ++j) {
            EXPECT_NEAR(self.values(i, j), fidelity_kernel(spec, p, row_span(a, i), row_span(a, j)), 1e-12);
        }
        for (Eigen::Index j = 0; j < 5; ++j) {
            EXPECT_NEAR(cross.values(i, j), fidelity_kernel(spec, p, row_span(a, i), row_span(b, j)), 1e-12);
        }
    }
}

TEST(FidelityGram, WorkerCountDoesNotChangeEntries) {
    std::mt19937_64 rng(73);
    const CircuitSpec spec{3, 2, 6};
    const auto p = uniform(param_count(spec), -1, 1, rng);
    const RowMatrix a = random_matrix(17, 6, rng);
    const auto one = fidelity_gram(spec, p, a, GramOptions{.workers = 1});
    const auto four = fidelity_gram(spec, p, a, GramOptions{.workers = 4});
    EXPECT_EQ(one.values, four.values);
}

TEST(FidelityGram, ValidOnRandomDraws) {
    std::mt19937_64 rng(74);
    const CircuitSpec spec{4, 6, 16};
    for (int draw = 0; draw < 5; ++draw) {
        const auto p = uniform(param_count(spec), -1, 1, rng);
        const auto k = fidelity_gram(spec, p, random_matrix(50, 16, rng));
        const auto d = diagnose(k);
        EXPECT_LT(d.max_asymmetry, 1e-10);
        EXPECT_LT(d.max_diagonal_error, 1e-10);
        EXPECT_GE(d.min_eigenvalue, -1e-8);
        EXPECT_GE(d.min_entry, 0.0);
        EXPECT_LE(d.max_entry, 1.0 + 1e-10);
        EXPECT_NEAR(d.min_eigenvalue, min_eigenvalue(k.values), 1e-10);
    }
}

TEST(FidelityGram, GlobalPhaseInvariance) {
    std::mt19937_64 rng(75);
    const CircuitSpec spec{2, 2, 4};
    const auto p = uniform(param_count(spec), -1, 1, rng);
    const RowMatrix a = random_matrix(6, 4, rng);
    StateCache cache(spec, p, a);
    const auto before = fidelity_gram(cache);
    const Complex phase = std::polar(1.0, 0.73);
    for (auto& s : cache.states()) {
        for (auto& amp : s.amplitudes()) {
            amp *= phase;
        }
    }
    const auto after = fidelity_gram(cache);
    EXPECT_LT((before.values - after.values).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(StateCache, RespectsMemoryBudget) {
    const CircuitSpec spec{4, 1, 2};
    const std::vector<double> p(param_count(spec), 0.0);
    const RowMatrix a = RowMatrix::Zero(10, 2);
    EXPECT_THROW(StateCache(spec, p, a, GramOptions{.max_cache_bytes = 100}), std::length_error);
}

TEST(RbfKernel, Examples) {
    const std::vector<double> x{0.3, -1.2};
    EXPECT_DOUBLE_EQ(rbf_kernel(x, x, 3.7), 1.0);
    EXPECT_NEAR(rbf_kernel(std::vector<double>{0.0}, std::vector<double>{1.0}, 1.0), std::exp(-1.0), 1e-15);
    EXPECT_THROW(rbf_kernel(x, x, 0.0), std::invalid_argument);
}

TEST(RbfKernel, GramIsPsdWithUnitDiagonal) {
    std::mt19937_64 rng(76);
    const RowMatrix a = random_matrix(40, 5, rng);
    const auto k = rbf_gram(a, a, gamma_scale(a));
    const auto d = diagnose(k);
    EXPECT_LT(d.max_diagonal_error, 1e-15);
    EXPECT_GE(d.min_eigenvalue, -1e-8);
}

TEST(GammaScale, StandardizedInputsGiveInverseDimension) {
    std::mt19937_64 rng(77);
    const RowMatrix raw = random_matrix(300, 16, rng) * 4.0;
    const RowMatrix z = standardize_apply(standardize_fit(raw), raw);
    const double mean = z.mean();
    const double var = (z.array() - mean).square().mean();
    EXPECT_NEAR(gamma_scale(z), 1.0 / (16.0 * var), 1e-12);
    EXPECT_NEAR(gamma_scale(z), 1.0 / 16.0, 1e-3);
}

TEST(LinearKernel, Examples) {
    EXPECT_DOUBLE_EQ(linear_kernel(std::vector<double>{0, 1, 0}, std::vector<double>{0, 1, 0}), 1.0);
    EXPECT_DOUBLE_EQ(linear_kernel(std::vector<double>{1, 0}, std::vector<double>{0, 5}), 0.0);
    EXPECT_DOUBLE_EQ(linear_kernel(std::vector<double>{1, 2}, std::vector<double>{3, -1}), 1.0);
}

TEST(GramDump, RoundTripsAndRejectsGarbage) {
    std::mt19937_64 rng(78);
    const RowMatrix a = random_matrix(4, 3, rng);
    const RowMatrix b = random_matrix(6, 3, rng);
    const auto k = rbf_gram(a, b, 0.3);
    std::stringstream buf;
    write_gram(buf, k);
    EXPECT_EQ(buf.str().size(), 8u + 8u + 8u + 4u + 4u + 4u * 6u * 8u);
    EXPECT_EQ(buf.str().substr(0, 8), "QFMGRAM1");
    const auto back = read_gram(buf);
    EXPECT_EQ(back.kind, KernelKind::Rbf);
    EXPECT_EQ(back.values, k.values);

    std::stringstream bad("NOTAGRAM........");
    EXPECT_THROW(read_gram(bad), std::runtime_error);
    std::stringstream truncated(buf.str().substr(0, 30));
    EXPECT_THROW(read_gram(truncated), std::runtime_error);
}
