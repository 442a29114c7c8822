#pragma once

#include <cstddef>
#include <span>

namespace qfm {

/// I_x(a, b), evaluated with a continued fraction (modified Lentz).
double regularized_incomplete_beta(double a, double b, double x);

double student_t_cdf(double t, double dof);

/// Inverse of student_t_cdf in its first argument, found by bisection.
double student_t_quantile(double p, double dof);

struct ConfidenceInterval {
    double mean = 0.0;
    double half_width = 0.0;
    std::size_t n = 0;
};

double mean_of(std::span<const double> values);
/// Sample standard deviation (n - 1 in the denominator).
double sample_std(std::span<const double> values);

/// Student-t interval: half_width = t_{(1+level)/2, n-1} * s / sqrt(n). Requires n >= 2.
ConfidenceInterval confidence_interval(std::span<const double> values, double level = 0.95);

} // namespace qfm
