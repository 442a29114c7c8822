#include "qfm/classifiers.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

namespace qfm {

namespace {

void require_problem(const RowMatrix& x, std::span<const int> labels) {
    if (static_cast<std::size_t>(x.rows()) != labels.size() || labels.empty()) {
        throw std::invalid_argument("logistic regression: rows and labels differ in count or are empty");
    }
    bool pos = false;
    bool neg = false;
    for (const int y : labels) {
        if (y == 1) {
            pos = true;
        } else if (y == -1) {
            neg = true;
        } else {
            throw std::invalid_argument("labels must be +1 or -1");
        }
    }
    if (!pos || !neg) {
        throw std::invalid_argument("logistic regression needs both classes");
    }
}

double dot(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        acc += a[i] * b[i];
    }
    return acc;
}

double inf_norm(std::span<const double> v) {
    double m = 0.0;
    for (const double x : v) {
        m = std::max(m, std::abs(x));
    }
    return m;
}

// Packed parameter vector: weights then bias.
struct Objective {
    const RowMatrix& x;
    std::span<const int> y;
    double C;

    [[nodiscard]] std::size_t dim() const { return static_cast<std::size_t>(x.cols()); }

    double value(std::span<const double> p) const {
        return logreg_objective(p.first(dim()), p.back(), x, y, C);
    }
    std::vector<double> gradient(std::span<const double> p) const {
        return logreg_gradient(p.first(dim()), p.back(), x, y, C);
    }
};

} // namespace

double logreg_objective(std::span<const double> weights, double bias, const RowMatrix& x,
                        std::span<const int> labels, double C) {
    double reg = 0.5 * dot(weights, weights);
    double data = 0.0;
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        const double s = dot(weights, row_span(x, i)) + bias;
        data += softplus_margin_loss(labels[static_cast<std::size_t>(i)] * s);
    }
    return reg + C * data;
}

std::vector<double> logreg_gradient(std::span<const double> weights, double bias, const RowMatrix& x,
                                    std::span<const int> labels, double C) {
    const std::size_t d = weights.size();
    std::vector<double> g(d + 1, 0.0);
    for (std::size_t k = 0; k < d; ++k) {
        g[k] = weights[k];
    }
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        const auto row = row_span(x, i);
        const int y = labels[static_cast<std::size_t>(i)];
        const double s = dot(weights, row) + bias;
        const double coef = C * (-y) * sigmoid(-y * s);
        for (std::size_t k = 0; k < d; ++k) {
            g[k] += coef * row[k];
        }
        g[d] += coef;
    }
    return g;
}

LogRegModel logreg_fit(const RowMatrix& x, std::span<const int> labels, const LogRegOptions& options) {
    require_problem(x, labels);
    if (!(options.C > 0.0) || options.max_iter < 1 || options.history < 1) {
        throw std::invalid_argument("logreg_fit: invalid options");
    }
    const Objective obj{x, labels, options.C};
    const std::size_t n = obj.dim() + 1;

    std::vector<double> p(n, 0.0);
    double f = obj.value(p);
    std::vector<double> g = obj.gradient(p);

    LogRegModel model;
    model.C = options.C;
    model.objective_trace.push_back(f);

    std::deque<std::vector<double>> s_hist;
    std::deque<std::vector<double>> y_hist;
    std::deque<double> rho_hist;
    std::vector<double> dir(n);
    std::vector<double> trial(n);

    int iter = 0;
    for (; iter < options.max_iter; ++iter) {
        if (inf_norm(g) < options.gradient_tolerance) {
            model.converged = true;
            break;
        }
        // Two-loop recursion: dir = -H g.
        std::vector<double> q = g;
        std::vector<double> a(s_hist.size());
        for (std::size_t k = s_hist.size(); k-- > 0;) {
            a[k] = rho_hist[k] * dot(s_hist[k], q);
            for (std::size_t t = 0; t < n; ++t) {
                q[t] -= a[k] * y_hist[k][t];
            }
        }
        const double h0 = s_hist.empty()
                              ? 1.0 / std::max(1.0, std::sqrt(dot(g, g)))
                              : dot(s_hist.back(), y_hist.back()) / dot(y_hist.back(), y_hist.back());
        for (auto& v : q) {
            v *= h0;
        }
        for (std::size_t k = 0; k < s_hist.size(); ++k) {
            const double b = rho_hist[k] * dot(y_hist[k], q);
            for (std::size_t t = 0; t < n; ++t) {
                q[t] += s_hist[k][t] * (a[k] - b);
            }
        }
        for (std::size_t t = 0; t < n; ++t) {
            dir[t] = -q[t];
        }
        double slope = dot(g, dir);
        if (slope >= 0.0) {
            // Not a descent direction; restart from steepest descent.
            s_hist.clear();
            y_hist.clear();
            rho_hist.clear();
            for (std::size_t t = 0; t < n; ++t) {
                dir[t] = -g[t];
            }
            slope = dot(g, dir);
        }

        // Backtracking line search with the Armijo condition.
        double step = 1.0;
        double f_new = f;
        bool accepted = false;
        for (int ls = 0; ls < 60; ++ls) {
            for (std::size_t t = 0; t < n; ++t) {
                trial[t] = p[t] + step * dir[t];
            }
            f_new = obj.value(trial);
            if (f_new <= f + 1e-4 * step * slope) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            // No representable decrease left along this direction.
            break;
        }

        std::vector<double> g_new = obj.gradient(trial);
        std::vector<double> s(n);
        std::vector<double> yv(n);
        for (std::size_t t = 0; t < n; ++t) {
            s[t] = trial[t] - p[t];
            yv[t] = g_new[t] - g[t];
        }
        const double sy = dot(s, yv);
        if (sy > 1e-12 * std::sqrt(dot(s, s) * dot(yv, yv))) {
            s_hist.push_back(std::move(s));
            y_hist.push_back(std::move(yv));
            rho_hist.push_back(1.0 / sy);
            if (s_hist.size() > static_cast<std::size_t>(options.history)) {
                s_hist.pop_front();
                y_hist.pop_front();
                rho_hist.pop_front();
            }
        }
        p = trial;
        f = f_new;
        g = std::move(g_new);
        model.objective_trace.push_back(f);
    }
    if (!model.converged && inf_norm(g) < options.gradient_tolerance) {
        model.converged = true;
    }
    model.iterations = iter;
    model.weights.assign(p.begin(), p.end() - 1);
    model.bias = p.back();
    return model;
}

std::vector<double> logreg_decision(const LogRegModel& model, const RowMatrix& x) {
    if (static_cast<std::size_t>(x.cols()) != model.weights.size()) {
        throw std::invalid_argument("logreg_decision: dimension mismatch");
    }
    std::vector<double> out(static_cast<std::size_t>(x.rows()));
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        out[static_cast<std::size_t>(i)] = dot(model.weights, row_span(x, i)) + model.bias;
    }
    return out;
}

std::vector<int> logreg_predict(const LogRegModel& model, const RowMatrix& x) {
    const auto f = logreg_decision(model, x);
    std::vector<int> out(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        out[i] = label_of(f[i]);
    }
    return out;
}

} // namespace qfm
