#include "qfm/classifiers.hpp"
#include "qfm/kernels.hpp"
#include "qfm/training.hpp"

#include "toy_data.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

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

std::vector<int> noisy_linear_labels(const RowMatrix& x, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 0.5);
    std::vector<int> y;
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        y.push_back(x(i, 0) - 0.5 * x(i, 1) + g(rng) >= 0.0 ? 1 : -1);
    }
    return y;
}

double kkt_violation(const SvmModel& model, const Eigen::MatrixXd& gram, std::span<const int> y) {
    const auto alpha = svm_alphas(model);
    const auto f = svm_decision(model, gram);
    double worst = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double m = y[i] * f[i];
        if (alpha[i] <= 0.0) {
            worst = std::max(worst, 1.0 - m);
        } else if (alpha[i] >= model.C) {
            worst = std::max(worst, m - 1.0);
        } else {
            worst = std::max(worst, std::abs(m - 1.0));
        }
    }
    return worst;
}

} // namespace

TEST(Svm, TwoPointAnalyticSolution) {
    RowMatrix x(2, 1);
    x << -1.0, 1.0;
    const std::vector<int> y{1, -1};
    const auto model = svm_fit(linear_gram(x, x).values, y, {1.0});
    const auto alpha = svm_alphas(model);
    EXPECT_NEAR(alpha[0], 0.5, 1e-6);
    EXPECT_NEAR(alpha[1], 0.5, 1e-6);
    EXPECT_NEAR(model.bias, 0.0, 1e-6);
    EXPECT_EQ(svm_predict(model, linear_gram(x, x).values), y);
    RowMatrix origin(1, 1);
    origin << 0.0;
    EXPECT_NEAR(svm_decision(model, linear_gram(origin, x).values)[0], 0.0, 1e-6);
}

TEST(Svm, KktConditionsHold) {
    std::mt19937_64 rng(51);
    for (int t = 0; t < 5; ++t) {
        const RowMatrix x = random_matrix(60, 4, rng);
        const auto y = noisy_linear_labels(x, rng);
        for (const double C : {0.1, 1.0, 10.0}) {
            const auto gram = rbf_gram(x, x, 0.25).values;
            const auto model = svm_fit(gram, y, {C});
            EXPECT_TRUE(model.converged);
            EXPECT_LE(kkt_violation(model, gram, y), 1e-3);
            for (const double a : svm_alphas(model)) {
                EXPECT_GE(a, 0.0);
                EXPECT_LE(a, C);
            }
        }
    }
}

TEST(Svm, PrecomputedLinearMatchesDirectLinear) {
    std::mt19937_64 rng(52);
    for (int t = 0; t < 5; ++t) {
        const RowMatrix x = random_matrix(50, 3, rng);
        const auto y = noisy_linear_labels(x, rng);
        const RowMatrix test = random_matrix(40, 3, rng);
        const auto kernel_model = svm_fit(linear_gram(x, x).values, y);
        const auto primal = linear_svm_fit(x, y);
        EXPECT_EQ(svm_predict(kernel_model, linear_gram(test, x).values), linear_svm_predict(primal, test));
    }
}

TEST(Svm, DuplicatePointGetsTwinLabel) {
    std::mt19937_64 rng(53);
    const RowMatrix x = random_matrix(30, 2, rng);
    const auto y = noisy_linear_labels(x, rng);
    const auto model = svm_fit(rbf_gram(x, x, 0.5).values, y);
    const auto train_pred = svm_predict(model, rbf_gram(x, x, 0.5).values);
    const RowMatrix twin = x.row(7);
    EXPECT_EQ(svm_predict(model, rbf_gram(twin, x, 0.5).values)[0], train_pred[7]);
}

TEST(Svm, XorFourPointsWithTrainedFidelityKernel) {
    RowMatrix x(4, 2);
    x << 1, 1, -1, -1, 1, -1, -1, 1;
    const std::vector<int> y{1, 1, -1, -1};
    LabeledData train{x, y};
    TrainConfig cfg;
    cfg.batch_size = 4;
    cfg.seed = 3;
    const CircuitSpec spec{2, 6, 2};
    const auto trained = train_vqc(spec, train, train, cfg);
    const auto gram = fidelity_gram(spec, trained.best_params.values, x).values;
    const auto model = svm_fit(gram, y, {10.0});
    EXPECT_EQ(svm_predict(model, gram), y);
}

TEST(Svm, ZeroDecisionMapsToPositive) {
    SvmModel m;
    m.n_train = 1;
    m.support_indices = {0};
    m.dual_coefficients = {0.0};
    m.bias = 0.0;
    EXPECT_EQ(svm_predict(m, Eigen::MatrixXd::Ones(1, 1))[0], 1);
}

TEST(Svm, RejectsBadInput) {
    const Eigen::MatrixXd g = Eigen::MatrixXd::Identity(3, 3);
    EXPECT_THROW(svm_fit(g, std::vector<int>{1, 1, 1}), std::invalid_argument);
    EXPECT_THROW(svm_fit(g, std::vector<int>{1, -1}), std::invalid_argument);
    EXPECT_THROW(svm_fit(g, std::vector<int>{1, -1, 1}, {0.0}), std::invalid_argument);
}

TEST(LogReg, SymmetricTwoPointProblem) {
    RowMatrix x(2, 1);
    x << 1.0, -1.0;
    const auto model = logreg_fit(x, std::vector<int>{1, -1});
    EXPECT_NEAR(model.bias, 0.0, 1e-6);
    EXPECT_GT(model.weights[0], 0.0);
}

TEST(LogReg, OptimumBeatsOrigin) {
    std::mt19937_64 rng(54);
    const RowMatrix x = random_matrix(80, 5, rng);
    const auto y = noisy_linear_labels(x, rng);
    for (const double C : {0.1, 1.0, 10.0}) {
        const auto model = logreg_fit(x, y, {C});
        const std::vector<double> zero(5, 0.0);
        const double at_origin = logreg_objective(zero, 0.0, x, y, C);
        EXPECT_NEAR(at_origin, 80 * C * std::log(2.0), 1e-9);
        EXPECT_LE(logreg_objective(model.weights, model.bias, x, y, C), at_origin);
        const auto g = logreg_gradient(model.weights, model.bias, x, y, C);
        double inf = 0.0;
        for (const double v : g) {
            inf = std::max(inf, std::abs(v));
        }
        EXPECT_LT(inf, 1e-6);
        EXPECT_TRUE(model.converged);
    }
}

TEST(LogReg, GradientMatchesFiniteDifferences) {
    std::mt19937_64 rng(55);
    const RowMatrix x = random_matrix(20, 3, rng);
    const auto y = noisy_linear_labels(x, rng);
    std::vector<double> w{0.3, -0.7, 1.1};
    const double b = 0.2;
    const auto g = logreg_gradient(w, b, x, y, 2.0);
    for (std::size_t k = 0; k < 3; ++k) {
        auto wp = w;
        auto wm = w;
        wp[k] += 1e-6;
        wm[k] -= 1e-6;
        const double fd = (logreg_objective(wp, b, x, y, 2.0) - logreg_objective(wm, b, x, y, 2.0)) / 2e-6;
        EXPECT_NEAR(g[k], fd, 1e-6 * std::max(1.0, std::abs(fd)));
    }
    const double fd_b = (logreg_objective(w, b + 1e-6, x, y, 2.0) - logreg_objective(w, b - 1e-6, x, y, 2.0)) / 2e-6;
    EXPECT_NEAR(g[3], fd_b, 1e-6 * std::max(1.0, std::abs(fd_b)));
}

TEST(LogReg, SeparableBlobsTrainingAccuracy) {
    const auto d = toy::blobs(100, 6.0, 56, 4);
    const auto model = logreg_fit(d.x, d.y);
    EXPECT_GE(accuracy(logreg_predict(model, d.x), d.y), 0.99);
}

TEST(LogReg, RejectsSingleClass) {
    RowMatrix x(3, 1);
    x << 1, 2, 3;
    EXPECT_THROW(logreg_fit(x, std::vector<int>{1, 1, 1}), std::invalid_argument);
}

TEST(Mlp, ParameterCount) {
    EXPECT_EQ(mlp_param_count(mlp_architecture(16)), 177u);
    EXPECT_EQ(16 * 8 + 8 + 8 * 4 + 4 + 4 * 1 + 1, 177);
    EXPECT_EQ(MlpNet(mlp_architecture(16)).num_params(), 177u);
}

TEST(Mlp, GlorotInitialization) {
    std::mt19937_64 rng(57);
    const auto sizes = mlp_architecture(16);
    const auto m = mlp_init(sizes, rng);
    ASSERT_EQ(m.parameters.size(), 177u);
    std::size_t offset = 0;
    for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
        const int in = sizes[l];
        const int out = sizes[l + 1];
        const double limit = std::sqrt(6.0 / (in + out));
        for (int k = 0; k < in * out; ++k) {
            EXPECT_LE(std::abs(m.parameters[offset++]), limit);
        }
        for (int k = 0; k < out; ++k) {
            EXPECT_EQ(m.parameters[offset++], 0.0);
        }
    }
}

TEST(Mlp, BackpropMatchesFiniteDifferences) {
    std::mt19937_64 rng(58);
    for (const auto& sizes : {std::vector<int>{3, 5, 1}, std::vector<int>{6, 8, 4, 1}}) {
        const MlpNet net(sizes);
        std::uniform_real_distribution<double> u(-0.8, 0.8);
        std::vector<double> theta(net.num_params());
        for (auto& v : theta) {
            v = u(rng);
        }
        std::vector<double> x(static_cast<std::size_t>(sizes[0]));
        for (auto& v : x) {
            v = u(rng);
        }
        for (const int label : {1, -1}) {
            std::vector<double> grad(theta.size(), 0.0);
            net.backprop(theta, x, label, 1.0, grad);
            for (std::size_t k = 0; k < theta.size(); ++k) {
                auto tp = theta;
                auto tm = theta;
                tp[k] += 1e-5;
                tm[k] -= 1e-5;
                const double fd = (softplus_margin_loss(label * net.score(tp, x)) -
                                   softplus_margin_loss(label * net.score(tm, x))) /
                                  2e-5;
                const double diff = std::abs(grad[k] - fd);
                EXPECT_TRUE(diff <= 1e-8 || diff <= 1e-5 * std::max(std::abs(fd), std::abs(grad[k])))
                    << "param " << k << " analytic " << grad[k] << " fd " << fd;
            }
        }
    }
}

TEST(Mlp, BlobsAndXor) {
    TrainConfig cfg = TrainConfig::mlp_defaults();
    cfg.max_epochs = 200;
    cfg.patience = 200;
    cfg.batch_size = 32;
    const auto blobs = toy::blobs(150, 6.0, 59);
    const auto blobs_val = toy::blobs(40, 6.0, 60);
    const auto blobs_test = toy::blobs(100, 6.0, 61);
    const auto fit = mlp_fit(blobs, blobs_val, cfg);
    EXPECT_GE(accuracy(mlp_predict(fit.model, blobs_test.x), blobs_test.y), 0.99);

    const auto xr = toy::xor_clusters(60, 0.3, 62);
    const auto xr_val = toy::xor_clusters(20, 0.3, 63);
    const auto xr_test = toy::xor_clusters(50, 0.3, 64);
    const auto xfit = mlp_fit(xr, xr_val, cfg);
    EXPECT_GE(accuracy(mlp_predict(xfit.model, xr_test.x), xr_test.y), 0.90);
    EXPECT_LE(accuracy(logreg_predict(logreg_fit(xr.x, xr.y), xr_test.x), xr_test.y), 0.55);
}
