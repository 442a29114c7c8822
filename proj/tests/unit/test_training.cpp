#include "qfm/classifiers.hpp"
#include "qfm/training.hpp"

#include "toy_data.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>
#include <set>

using namespace qfm;

namespace {

std::vector<double> uniform(std::size_t n, double lo, double hi, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> v(n);
    for (auto& e : v) {
        e = u(rng);
    }
    return v;
}

RowMatrix random_matrix(int rows, int cols, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    RowMatrix m(rows, cols);
    for (Eigen::Index i = 0; i < m.size(); ++i) {
        m.data()[i] = g(rng);
    }
    return m;
}

double batch_loss(const CircuitSpec& spec, std::span<const double> params, const LinearHead& head,
                  const RowMatrix& x, std::span<const int> y) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        const auto z = readout_features(embed(spec, params, row_span(x, i)));
        double s = head.b;
        for (std::size_t q = 0; q < z.size(); ++q) {
            s += head.w[q] * z[q];
        }
        total += std::log1p(std::exp(-y[static_cast<std::size_t>(i)] * s));
    }
    return total / static_cast<double>(x.rows());
}

bool close(double analytic, double fd) {
    const double diff = std::abs(analytic - fd);
    return diff <= 1e-8 || diff <= 1e-5 * std::max(std::abs(analytic), std::abs(fd));
}

std::pair<LabeledData, LabeledData> split_half(const LabeledData& d) {
    LabeledData a;
    LabeledData b;
    std::vector<std::size_t> ia;
    std::vector<std::size_t> ib;
    for (std::size_t i = 0; i < d.size(); ++i) {
        (i % 2 == 0 ? ia : ib).push_back(i);
        (i % 2 == 0 ? a.y : b.y).push_back(d.y[i]);
    }
    a.x = select_rows(d.x, ia);
    b.x = select_rows(d.x, ib);
    return {a, b};
}

} // namespace

TEST(DecisionScore, Examples) {
    EXPECT_DOUBLE_EQ(decision_score(std::vector<double>{1, -1}, {{0.5, 0.5}, 0.0}), 0.0);
    EXPECT_DOUBLE_EQ(decision_score(std::vector<double>{0, 0, 0}, {{3, -2, 7}, 1.25}), 1.25);
    EXPECT_NEAR(decision_score(std::vector<double>{0.2, 0.4, -0.1, 0.3}, {{1, 2, 3, 4}, -1.0}), 0.9, 1e-15);
}

TEST(SoftplusLoss, Examples) {
    EXPECT_NEAR(softplus_loss(std::vector<double>{0.0}, std::vector<int>{1}), std::log(2.0), 1e-15);
    const double sat = softplus_loss(std::vector<double>{50.0}, std::vector<int>{1});
    EXPECT_LT(sat, 1e-20);
    EXPECT_GE(sat, 0.0);
    EXPECT_TRUE(std::isfinite(softplus_loss(std::vector<double>{-1e6}, std::vector<int>{1})));
    EXPECT_NEAR(softplus_loss(std::vector<double>{1.0, -1.0}, std::vector<int>{1, -1}), 0.313261687518223, 1e-12);
    EXPECT_THROW(softplus_loss(std::vector<double>{}, std::vector<int>{}), std::invalid_argument);
}

TEST(VqcGradient, MatchesFiniteDifferencesForEveryParameterClass) {
    std::mt19937_64 rng(31);
    constexpr double h = 1e-5;
    int instances = 0;
    for (int trial = 0; trial < 12; ++trial) {
        const int n = 1 + trial % 3;
        const CircuitSpec spec{n, 1 + trial % 3, 6};
        const auto params = uniform(param_count(spec), -1.0, 1.0, rng);
        LinearHead head{uniform(static_cast<std::size_t>(n), -1.0, 1.0, rng), 0.2};
        const RowMatrix x = random_matrix(4, 6, rng);
        const std::vector<int> y{1, -1, -1, 1};
        const auto g = gradient(spec, params, head, x, y);
        EXPECT_NEAR(g.loss, batch_loss(spec, params, head, x, y), 1e-12);

        for (std::size_t k = 0; k < params.size(); ++k) {
            auto p = params;
            p[k] += h;
            const double up = batch_loss(spec, p, head, x, y);
            p[k] -= 2 * h;
            const double down = batch_loss(spec, p, head, x, y);
            EXPECT_TRUE(close(g.d_params[k], (up - down) / (2 * h)))
                << "n=" << n << " param " << k << " analytic " << g.d_params[k] << " fd " << (up - down) / (2 * h);
        }
        for (std::size_t k = 0; k < head.w.size(); ++k) {
            auto hp = head;
            hp.w[k] += h;
            auto hm = head;
            hm.w[k] -= h;
            const double fd = (batch_loss(spec, params, hp, x, y) - batch_loss(spec, params, hm, x, y)) / (2 * h);
            EXPECT_TRUE(close(g.d_w[k], fd));
        }
        auto hp = head;
        hp.b += h;
        auto hm = head;
        hm.b -= h;
        const double fd = (batch_loss(spec, params, hp, x, y) - batch_loss(spec, params, hm, x, y)) / (2 * h);
        EXPECT_TRUE(close(g.d_b, fd));
        ++instances;
    }
    EXPECT_GE(instances, 10);
}

TEST(VqcGradient, HeadGradientMatchesClosedForm) {
    std::mt19937_64 rng(32);
    const CircuitSpec spec{3, 2, 4};
    const auto params = uniform(param_count(spec), -1.0, 1.0, rng);
    const LinearHead head{{0.4, -0.3, 0.8}, -0.1};
    const RowMatrix x = random_matrix(5, 4, rng);
    const std::vector<int> y{1, 1, -1, -1, 1};
    const auto g = gradient(spec, params, head, x, y);

    std::vector<double> dw(3, 0.0);
    double db = 0.0;
    for (Eigen::Index i = 0; i < 5; ++i) {
        const auto z = readout_features(embed(spec, params, row_span(x, i)));
        const double s = head.b + head.w[0] * z[0] + head.w[1] * z[1] + head.w[2] * z[2];
        const double yi = y[static_cast<std::size_t>(i)];
        const double coef = (1.0 / (1.0 + std::exp(yi * s))) * (-yi) / 5.0;
        for (int q = 0; q < 3; ++q) {
            dw[static_cast<std::size_t>(q)] += coef * z[static_cast<std::size_t>(q)];
        }
        db += coef;
    }
    for (int q = 0; q < 3; ++q) {
        EXPECT_NEAR(g.d_w[static_cast<std::size_t>(q)], dw[static_cast<std::size_t>(q)], 1e-12);
    }
    EXPECT_NEAR(g.d_b, db, 1e-12);
}

TEST(VqcGradient, VanishesOnSaturatedBatch) {
    std::mt19937_64 rng(33);
    const CircuitSpec spec{2, 2, 4};
    const auto params = uniform(param_count(spec), -1.0, 1.0, rng);
    // Bias alone pushes every margin beyond 50 (|w.z| <= 2).
    const LinearHead head{{1.0, -1.0}, 60.0};
    const RowMatrix x = random_matrix(6, 4, rng);
    const std::vector<int> y(6, 1);
    const auto g = gradient(spec, params, head, x, y);
    double norm = 0.0;
    for (const double v : g.d_params) {
        norm += v * v;
    }
    EXPECT_LT(std::sqrt(norm), 1e-15);
}

TEST(BalancedBatches, EveryBatchIsBalanced) {
    std::mt19937_64 rng(34);
    std::vector<int> labels;
    for (int i = 0; i < 70; ++i) {
        labels.push_back(i % 2 == 0 ? 1 : -1);
    }
    for (const int bs : {32, 64, 8}) {
        const auto batches = balanced_batches(labels, bs, rng);
        std::size_t total = 0;
        std::set<std::size_t> seen;
        for (const auto& b : batches) {
            int pos = 0;
            for (const auto i : b) {
                pos += labels[i] == 1 ? 1 : 0;
                EXPECT_TRUE(seen.insert(i).second);
            }
            EXPECT_EQ(2 * pos, static_cast<int>(b.size()));
            EXPECT_LE(static_cast<int>(b.size()), bs);
            total += b.size();
        }
        for (std::size_t k = 0; k + 1 < batches.size(); ++k) {
            EXPECT_EQ(static_cast<int>(batches[k].size()), bs);
        }
        EXPECT_EQ(total, labels.size());
    }
}

TEST(BalancedBatches, UnequalClassesStayBalanced) {
    std::mt19937_64 rng(35);
    std::vector<int> labels(30, 1);
    labels.insert(labels.end(), 20, -1);
    const auto batches = balanced_batches(labels, 8, rng);
    std::size_t total = 0;
    for (const auto& b : batches) {
        int pos = 0;
        for (const auto i : b) {
            pos += labels[i] == 1 ? 1 : 0;
        }
        EXPECT_EQ(2 * pos, static_cast<int>(b.size()));
        total += b.size();
    }
    EXPECT_EQ(total, 40u);
}

TEST(TrainVqc, SeparableBlobs) {
    const auto data = toy::blobs(150, 6.0, 41);
    const auto test = toy::blobs(100, 6.0, 42);
    const auto [train, val] = split_half(data);
    TrainConfig cfg;
    cfg.seed = 1;
    const auto result = train_vqc({2, 6, 2}, train, val, cfg);
    EXPECT_GE(accuracy(vqc_predict(result.best_params, result.best_head, test.x), test.y), 0.99);
}

TEST(TrainVqc, XorBeatsLinearOracle) {
    const auto data = toy::xor_clusters(100, 0.3, 43);
    const auto test = toy::xor_clusters(50, 0.3, 44);
    const auto [train, val] = split_half(data);
    TrainConfig cfg;
    cfg.seed = 2;
    const auto result = train_vqc({2, 6, 2}, train, val, cfg);
    const double vqc = accuracy(vqc_predict(result.best_params, result.best_head, test.x), test.y);
    const double linear = accuracy(logreg_predict(logreg_fit(train.x, train.y), test.x), test.y);
    EXPECT_GE(vqc, 0.90);
    EXPECT_LE(linear, 0.55);
    EXPECT_GT(vqc, linear);
}

TEST(TrainVqc, SeedDeterminism) {
    const auto data = toy::xor_clusters(30, 0.3, 45);
    const auto [train, val] = split_half(data);
    TrainConfig cfg;
    cfg.max_epochs = 5;
    cfg.patience = 5;
    cfg.batch_size = 16;
    cfg.seed = 9;
    const auto a = train_vqc({2, 2, 2}, train, val, cfg);
    const auto b = train_vqc({2, 2, 2}, train, val, cfg);
    EXPECT_EQ(a.best_params, b.best_params);
    EXPECT_EQ(a.best_head, b.best_head);
    EXPECT_EQ(a.loss_trace, b.loss_trace);
    EXPECT_EQ(a.best_val_trace, b.best_val_trace);
    EXPECT_EQ(a.epochs_run, b.epochs_run);
    cfg.seed = 10;
    const auto c = train_vqc({2, 2, 2}, train, val, cfg);
    EXPECT_NE(a.best_params, c.best_params);
}

TEST(TrainVqc, BestValidationAccuracyNeverDecreases) {
    const auto data = toy::xor_clusters(40, 0.4, 46);
    const auto [train, val] = split_half(data);
    TrainConfig cfg;
    cfg.max_epochs = 20;
    cfg.patience = 20;
    cfg.batch_size = 16;
    const auto r = train_vqc({2, 3, 2}, train, val, cfg);
    ASSERT_EQ(r.best_val_trace.size(), static_cast<std::size_t>(r.epochs_run));
    for (std::size_t k = 1; k < r.best_val_trace.size(); ++k) {
        EXPECT_GE(r.best_val_trace[k], r.best_val_trace[k - 1]);
    }
    EXPECT_DOUBLE_EQ(r.best_val_trace.back(), r.best_val_accuracy);
}

TEST(TrainVqc, ZeroPatienceStopsAtFirstNonImprovingEpoch) {
    const auto data = toy::xor_clusters(40, 0.4, 47);
    const auto [train, val] = split_half(data);
    TrainConfig cfg;
    cfg.max_epochs = 80;
    cfg.patience = 0;
    cfg.batch_size = 16;
    const auto r = train_vqc({2, 2, 2}, train, val, cfg);
    // Every epoch before the last improved the checkpoint; the last one did not
    // (unless the epoch limit was reached first).
    if (r.epochs_run < cfg.max_epochs) {
        EXPECT_EQ(r.best_epoch, r.epochs_run - 1);
    }
    EXPECT_LT(r.epochs_run, cfg.max_epochs);
}

TEST(TrainVqc, RejectsSingleClassTraining) {
    auto data = toy::blobs(10, 4.0, 48);
    LabeledData single{data.x.topRows(10), std::vector<int>(10, 1)};
    TrainConfig cfg;
    cfg.batch_size = 4;
    EXPECT_THROW(train_vqc({2, 1, 2}, single, data, cfg), std::invalid_argument);
}

TEST(VqcModel, InitializationRanges) {
    const VqcModel model({4, 6, 16});
    std::mt19937_64 rng(49);
    const auto theta = model.initial_theta(rng);
    ASSERT_EQ(theta.size(), 152u + 4u + 1u);
    for (std::size_t k = 0; k < 152; ++k) {
        EXPECT_LE(std::abs(theta[k]), 0.1);
    }
    for (std::size_t k = 152; k < 156; ++k) {
        EXPECT_LE(std::abs(theta[k]), 0.5);
    }
    EXPECT_EQ(theta.back(), 0.0);
}
