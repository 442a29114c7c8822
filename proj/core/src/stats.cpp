#include "qfm/stats.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace qfm {

namespace {

double beta_continued_fraction(double a, double b, double x) {
    constexpr int kMaxIter = 1000;
    constexpr double kEps = 1e-16;
    constexpr double kFloor = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kFloor) {
        d = kFloor;
    }
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kFloor) {
            d = kFloor;
        }
        c = 1.0 + aa / c;
        if (std::abs(c) < kFloor) {
            c = kFloor;
        }
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kFloor) {
            d = kFloor;
        }
        c = 1.0 + aa / c;
        if (std::abs(c) < kFloor) {
            c = kFloor;
        }
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) {
            return h;
        }
    }
    throw std::runtime_error("incomplete beta continued fraction did not converge");
}

} // namespace

double regularized_incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) {
        throw std::invalid_argument("incomplete beta: a and b must be positive");
    }
    if (!(x >= 0.0 && x <= 1.0)) {
        throw std::invalid_argument("incomplete beta: x must lie in [0, 1]");
    }
    if (x == 0.0 || x == 1.0) {
        return x;
    }
    const double log_front =
        std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(log_front);
    // The continued fraction converges fast for x < (a + 1) / (a + b + 2); use symmetry otherwise.
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * beta_continued_fraction(a, b, x) / a;
    }
    return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double student_t_cdf(double t, double dof) {
    if (!(dof > 0.0)) {
        throw std::invalid_argument("student_t_cdf: degrees of freedom must be positive");
    }
    if (std::isnan(t)) {
        throw std::invalid_argument("student_t_cdf: t is NaN");
    }
    if (std::isinf(t)) {
        return t > 0 ? 1.0 : 0.0;
    }
    const double x = dof / (dof + t * t);
    const double tail = 0.5 * regularized_incomplete_beta(0.5 * dof, 0.5, x);
    return t > 0.0 ? 1.0 - tail : tail;
}

double student_t_quantile(double p, double dof) {
    if (!(p > 0.0 && p < 1.0)) {
        throw std::invalid_argument("student_t_quantile: p must lie in (0, 1)");
    }
    if (p < 0.5) {
        return -student_t_quantile(1.0 - p, dof);
    }
    if (p == 0.5) {
        return 0.0;
    }
    double lo = 0.0;
    double hi = 1.0;
    while (student_t_cdf(hi, dof) < p) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e300) {
            throw std::runtime_error("student_t_quantile: failed to bracket");
        }
    }
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (student_t_cdf(mid, dof) < p) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double mean_of(std::span<const double> values) {
    if (values.empty()) {
        throw std::invalid_argument("mean of empty sample");
    }
    // Shifted by the first value so constant samples come back exactly.
    const double shift = values.front();
    double acc = 0.0;
    for (const double v : values) {
        acc += v - shift;
    }
    return shift + acc / static_cast<double>(values.size());
}

double sample_std(std::span<const double> values) {
    if (values.size() < 2) {
        throw std::invalid_argument("sample standard deviation needs at least two values");
    }
    const double shift = values.front();
    const double n = static_cast<double>(values.size());
    double sum = 0.0;
    for (const double v : values) {
        sum += v - shift;
    }
    const double centre = sum / n;
    double ss = 0.0;
    for (const double v : values) {
        const double d = (v - shift) - centre;
        ss += d * d;
    }
    return std::sqrt(ss / (n - 1.0));
}

ConfidenceInterval confidence_interval(std::span<const double> values, double level) {
    if (values.size() < 2) {
        throw std::invalid_argument("confidence_interval needs at least two values");
    }
    if (!(level > 0.0 && level < 1.0)) {
        throw std::invalid_argument("confidence level must lie in (0, 1)");
    }
    const double n = static_cast<double>(values.size());
    const double s = sample_std(values);
    const double t = student_t_quantile(0.5 * (1.0 + level), n - 1.0);
    return {mean_of(values), s == 0.0 ? 0.0 : t * s / std::sqrt(n), values.size()};
}

} // namespace qfm
