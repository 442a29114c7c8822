#include "qfm/selfcheck.hpp"

#include "qfm/classifiers.hpp"
#include "qfm/kernels.hpp"
#include "qfm/pqc.hpp"
#include "qfm/stats.hpp"
#include "qfm/training.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>

namespace qfm {

namespace {

std::string fmt(double v) {
    std::ostringstream s;
    s << std::setprecision(3) << std::scientific << v;
    return s.str();
}

RowMatrix random_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    RowMatrix m(rows, cols);
    for (Eigen::Index i = 0; i < m.size(); ++i) {
        m.data()[i] = g(rng);
    }
    return m;
}

std::vector<double> random_vector(std::size_t n, double half_width, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-half_width, half_width);
    std::vector<double> v(n);
    for (auto& e : v) {
        e = u(rng);
    }
    return v;
}

CheckResult check_unitarity(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> angle(-7.0, 7.0);
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        for (const auto axis : {Axis::X, Axis::Y, Axis::Z}) {
            const Mat2 u = rotation_matrix(axis, angle(rng));
            // (U^dagger U)_{ij} = sum_k conj(U_ki) U_kj
            for (int i = 0; i < 2; ++i) {
                for (int j = 0; j < 2; ++j) {
                    const Complex e = std::conj(u[i]) * u[j] + std::conj(u[2 + i]) * u[2 + j];
                    worst = std::max(worst, std::abs(e - Complex(i == j ? 1.0 : 0.0)));
                }
            }
        }
    }
    const CircuitSpec spec{3, 6, 6};
    for (int trial = 0; trial < 10; ++trial) {
        const auto params = random_vector(param_count(spec), 2.0, rng);
        const auto x = random_vector(6, 2.0, rng);
        worst = std::max(worst, std::abs(embed(spec, params, x).norm_squared() - 1.0));
    }
    return {"gate unitarity", worst < 1e-12, "max deviation " + fmt(worst), 0.0};
}

double batch_loss(const CircuitSpec& spec, std::span<const double> params, const LinearHead& head,
                  const RowMatrix& x, std::span<const int> y) {
    std::vector<double> scores;
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        scores.push_back(decision_score(readout_features(embed(spec, params, row_span(x, i))), head));
    }
    return softplus_loss(scores, y);
}

CheckResult check_gradient(std::mt19937_64& rng, bool corrupt) {
    constexpr double h = 1e-5;
    double worst = 0.0;
    bool ok = true;
    for (int instance = 0; instance < 12; ++instance) {
        const int n = 1 + instance % 3;
        const CircuitSpec spec{n, 2, 4};
        auto params = random_vector(param_count(spec), 0.5, rng);
        LinearHead head{random_vector(static_cast<std::size_t>(n), 1.0, rng), 0.3};
        const RowMatrix x = random_matrix(3, 4, rng);
        const std::vector<int> y{1, -1, 1};

        auto g = gradient(spec, params, head, x, y);
        if (corrupt) {
            g.d_params[0] += 1e-3;
        }
        const auto compare = [&](double analytic, const std::function<double(double)>& loss_at) {
            const double fd = (loss_at(h) - loss_at(-h)) / (2.0 * h);
            const double diff = std::abs(analytic - fd);
            const double rel = diff / std::max({std::abs(analytic), std::abs(fd), 1e-300});
            if (std::max(std::abs(analytic), std::abs(fd)) > 1e-8) {
                worst = std::max(worst, rel);
            }
            ok = ok && (diff <= 1e-8 || rel < 1e-5);
        };
        for (std::size_t k = 0; k < params.size(); ++k) {
            compare(g.d_params[k], [&](double step) {
                auto p = params;
                p[k] += step;
                return batch_loss(spec, p, head, x, y);
            });
        }
        for (std::size_t k = 0; k < head.w.size(); ++k) {
            compare(g.d_w[k], [&](double step) {
                auto hd = head;
                hd.w[k] += step;
                return batch_loss(spec, params, hd, x, y);
            });
        }
        compare(g.d_b, [&](double step) {
            auto hd = head;
            hd.b += step;
            return batch_loss(spec, params, hd, x, y);
        });
    }
    return {"gradient vs finite differences", ok, "max relative error " + fmt(worst), 0.0};
}

CheckResult check_kernel(std::mt19937_64& rng) {
    const CircuitSpec spec{4, 6, 8};
    const auto params = random_vector(param_count(spec), 1.0, rng);
    const auto d = diagnose(fidelity_gram(spec, params, random_matrix(30, 8, rng)));
    const bool ok = d.max_asymmetry < 1e-10 && d.max_diagonal_error < 1e-10 && d.min_eigenvalue >= -1e-8;
    return {"fidelity kernel PSD", ok,
            "asym " + fmt(d.max_asymmetry) + ", diag " + fmt(d.max_diagonal_error) + ", min eig " +
                fmt(d.min_eigenvalue),
            0.0};
}

CheckResult check_kkt(std::mt19937_64& rng) {
    const RowMatrix x = random_matrix(40, 3, rng);
    std::vector<int> y(40);
    for (Eigen::Index i = 0; i < 40; ++i) {
        y[static_cast<std::size_t>(i)] = x(i, 0) * x(i, 1) + 0.3 * x(i, 2) >= 0.0 ? 1 : -1;
    }
    const auto gram = rbf_gram(x, x, 0.5).values;
    const SvmOptions opts{1.0};
    const auto model = svm_fit(gram, y, opts);
    const auto alpha = svm_alphas(model);
    const auto f = svm_decision(model, gram);
    double worst = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double m = y[i] * f[i];
        double violation = 0.0;
        if (alpha[i] <= 0.0) {
            violation = std::max(0.0, 1.0 - m);
        } else if (alpha[i] >= opts.C) {
            violation = std::max(0.0, m - 1.0);
        } else {
            violation = std::abs(m - 1.0);
        }
        worst = std::max(worst, violation);
    }
    return {"SMO KKT conditions", model.converged && worst <= 1e-3, "max violation " + fmt(worst), 0.0};
}

CheckResult check_t_constant() {
    const double t = student_t_quantile(0.975, 4.0);
    std::ostringstream s;
    s << std::setprecision(6) << "t(0.975, 4) = " << t;
    return {"Student-t constant 2.776", std::abs(t - 2.776) < 1e-3, s.str(), 0.0};
}

} // namespace

std::vector<CheckResult> run_selfcheck(const SelfcheckOptions& options) {
    std::mt19937_64 rng(options.seed);
    const std::vector<std::pair<std::string, std::function<CheckResult()>>> checks{
        {"gate unitarity", [&] { return check_unitarity(rng); }},
        {"gradient vs finite differences", [&] { return check_gradient(rng, options.corrupt_gradient); }},
        {"fidelity kernel PSD", [&] { return check_kernel(rng); }},
        {"SMO KKT conditions", [&] { return check_kkt(rng); }},
        {"Student-t constant 2.776", [] { return check_t_constant(); }},
    };
    std::vector<CheckResult> results;
    for (const auto& [name, check] : checks) {
        const auto start = std::chrono::steady_clock::now();
        CheckResult r;
        try {
            r = check();
        } catch (const std::exception& e) {
            r.name = name;
            r.passed = false;
            r.detail = std::string("exception: ") + e.what();
        }
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        results.push_back(std::move(r));
    }
    return results;
}

void print_selfcheck(std::ostream& out, const std::vector<CheckResult>& results) {
    for (const auto& r : results) {
        out << (r.passed ? "PASS  " : "FAIL  ") << std::left << std::setw(32) << r.name << std::right
            << std::fixed << std::setprecision(2) << std::setw(7) << r.seconds << "s  " << r.detail << '\n';
    }
    out.unsetf(std::ios::floatfield);
}

bool all_passed(const std::vector<CheckResult>& results) {
    return std::all_of(results.begin(), results.end(), [](const CheckResult& r) { return r.passed; });
}

} // namespace qfm
