#include "qfm/stats.hpp"

#include <gtest/gtest.h>

#include <boost/math/distributions/students_t.hpp>

#include <cmath>
#include <vector>

using namespace qfm;

TEST(StudentT, TabulatedQuantiles) {
    EXPECT_NEAR(student_t_quantile(0.975, 4.0), 2.776, 1e-3);
}

TEST(StudentT, FortyFourDegreesOfFreedom) {
    EXPECT_NEAR(student_t_quantile(0.975, 44.0), 2.0154, 1e-3);
}

TEST(StudentT, MatchesBoostOracle) {
    for (const double dof : {1.0, 2.0, 3.0, 4.0, 9.0, 44.0, 100.0}) {
        const boost::math::students_t dist(dof);
        for (const double p : {0.6, 0.9, 0.975, 0.995}) {
            EXPECT_NEAR(student_t_quantile(p, dof), boost::math::quantile(dist, p), 1e-9)
                << "dof=" << dof << " p=" << p;
        }
        for (const double t : {-3.0, -0.5, 0.0, 1.3, 4.0}) {
            EXPECT_NEAR(student_t_cdf(t, dof), boost::math::cdf(dist, t), 1e-12);
        }
    }
}

TEST(IncompleteBeta, Endpoints) {
    EXPECT_DOUBLE_EQ(regularized_incomplete_beta(2.0, 3.0, 0.0), 0.0);
    EXPECT_DOUBLE_EQ(regularized_incomplete_beta(2.0, 3.0, 1.0), 1.0);
    // I_x(1, 1) = x.
    EXPECT_NEAR(regularized_incomplete_beta(1.0, 1.0, 0.37), 0.37, 1e-14);
}

TEST(ConfidenceInterval, ConstantInputHasZeroWidth) {
    const std::vector<double> v(5, 0.93);
    const auto ci = confidence_interval(v);
    EXPECT_DOUBLE_EQ(ci.mean, 0.93);
    EXPECT_EQ(ci.half_width, 0.0);
    EXPECT_EQ(ci.n, 5u);
}

TEST(ConfidenceInterval, ConstantInputIsExactWhereNaiveSummingRounds) {
    // 0.1 + 0.1 + 0.1 != 0.3 in binary, so a plain sum / n mean drifts by an ulp.
    for (const double value : {0.1, 0.7, 0.9666666666666667}) {
        for (std::size_t n = 2; n <= 45; ++n) {
            const std::vector<double> v(n, value);
            EXPECT_EQ(mean_of(v), value);
            EXPECT_EQ(sample_std(v), 0.0);
            EXPECT_EQ(confidence_interval(v).half_width, 0.0);
        }
    }
}

TEST(ConfidenceInterval, TwoValues) {
    const std::vector<double> v{0.0, 1.0};
    const auto ci = confidence_interval(v);
    EXPECT_DOUBLE_EQ(ci.mean, 0.5);
    EXPECT_NEAR(sample_std(v), 1.0 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(ci.half_width, 12.706 * 0.5, 1e-3);
}

TEST(ConfidenceInterval, FiveValuesUseT4) {
    const std::vector<double> v{0.91, 0.94, 0.92, 0.95, 0.93};
    const auto ci = confidence_interval(v);
    const double s = sample_std(v);
    const boost::math::students_t dist(4.0);
    EXPECT_NEAR(ci.half_width, boost::math::quantile(dist, 0.975) * s / std::sqrt(5.0), 1e-12);
}

TEST(ConfidenceInterval, RejectsTooFewValues) {
    EXPECT_THROW(confidence_interval(std::vector<double>{1.0}), std::invalid_argument);
    EXPECT_THROW(student_t_quantile(1.0, 4.0), std::invalid_argument);
}
