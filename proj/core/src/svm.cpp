#include "qfm/classifiers.hpp"

#include <cmath>
#include <iostream>
#include <limits>
#include <stdexcept>

namespace qfm {

namespace {

constexpr double kTau = 1e-12;

void require_labels(std::span<const int> labels) {
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
        throw std::invalid_argument("SVM needs both classes in the training labels");
    }
}

} // namespace

SvmModel svm_fit(const Eigen::MatrixXd& gram, std::span<const int> labels, const SvmOptions& options) {
    const auto n = static_cast<std::size_t>(gram.rows());
    if (gram.rows() != gram.cols()) {
        throw std::invalid_argument("svm_fit: Gram matrix must be square");
    }
    if (labels.size() != n) {
        throw std::invalid_argument("svm_fit: label count does not match Gram matrix");
    }
    if (!(options.C > 0.0)) {
        throw std::invalid_argument("svm_fit: C must be positive");
    }
    require_labels(labels);

    const double C = options.C;
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = labels[i];
    }
    std::vector<double> alpha(n, 0.0);
    // Gradient of (1/2) a'Qa - e'a, Q_ij = y_i y_j K_ij.
    std::vector<double> grad(n, -1.0);
    const auto K = [&](std::size_t i, std::size_t j) {
        return gram(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    };
    const auto in_up = [&](std::size_t t) { return (y[t] > 0 && alpha[t] < C) || (y[t] < 0 && alpha[t] > 0); };
    const auto in_low = [&](std::size_t t) { return (y[t] > 0 && alpha[t] > 0) || (y[t] < 0 && alpha[t] < C); };

    SvmModel model;
    model.C = C;
    model.n_train = n;

    std::size_t iter = 0;
    for (; iter < options.max_iterations; ++iter) {
        double g_max = -std::numeric_limits<double>::infinity();
        double g_min = std::numeric_limits<double>::infinity();
        std::size_t i = n;
        std::size_t j = n;
        for (std::size_t t = 0; t < n; ++t) {
            const double v = -y[t] * grad[t];
            if (in_up(t) && v > g_max) {
                g_max = v;
                i = t;
            }
            if (in_low(t) && v < g_min) {
                g_min = v;
                j = t;
            }
        }
        if (i == n || j == n || g_max - g_min < options.tolerance) {
            model.converged = true;
            break;
        }

        const double q_ii = K(i, i);
        const double q_jj = K(j, j);
        const double q_ij = y[i] * y[j] * K(i, j);
        const double old_i = alpha[i];
        const double old_j = alpha[j];

        if (y[i] != y[j]) {
            double quad = q_ii + q_jj + 2.0 * q_ij;
            if (quad <= 0.0) {
                quad = kTau;
            }
            const double delta = (-grad[i] - grad[j]) / quad;
            const double diff = alpha[i] - alpha[j];
            alpha[i] += delta;
            alpha[j] += delta;
            if (diff > 0.0) {
                if (alpha[j] < 0.0) {
                    alpha[j] = 0.0;
                    alpha[i] = diff;
                }
            } else if (alpha[i] < 0.0) {
                alpha[i] = 0.0;
                alpha[j] = -diff;
            }
            if (diff > 0.0) {
                if (alpha[i] > C) {
                    alpha[i] = C;
                    alpha[j] = C - diff;
                }
            } else if (alpha[j] > C) {
                alpha[j] = C;
                alpha[i] = C + diff;
            }
        } else {
            double quad = q_ii + q_jj - 2.0 * q_ij;
            if (quad <= 0.0) {
                quad = kTau;
            }
            const double delta = (grad[i] - grad[j]) / quad;
            const double sum = alpha[i] + alpha[j];
            alpha[i] -= delta;
            alpha[j] += delta;
            if (sum > C) {
                if (alpha[i] > C) {
                    alpha[i] = C;
                    alpha[j] = sum - C;
                }
            } else if (alpha[j] < 0.0) {
                alpha[j] = 0.0;
                alpha[i] = sum;
            }
            if (sum > C) {
                if (alpha[j] > C) {
                    alpha[j] = C;
                    alpha[i] = sum - C;
                }
            } else if (alpha[i] < 0.0) {
                alpha[i] = 0.0;
                alpha[j] = sum;
            }
        }

        const double d_i = alpha[i] - old_i;
        const double d_j = alpha[j] - old_j;
        for (std::size_t t = 0; t < n; ++t) {
            grad[t] += y[t] * (y[i] * K(t, i) * d_i + y[j] * K(t, j) * d_j);
        }
    }
    model.iterations = iter;
    if (!model.converged) {
        std::cerr << "warning: SMO hit the iteration cap (" << options.max_iterations
                  << ") before reaching tolerance " << options.tolerance << "\n";
    }

    // rho: mean of y_i G_i over free vectors, else midpoint of the feasible range.
    double ub = std::numeric_limits<double>::infinity();
    double lb = -std::numeric_limits<double>::infinity();
    double free_sum = 0.0;
    std::size_t n_free = 0;
    for (std::size_t t = 0; t < n; ++t) {
        const double yg = y[t] * grad[t];
        if (alpha[t] >= C) {
            if (y[t] < 0) {
                ub = std::min(ub, yg);
            } else {
                lb = std::max(lb, yg);
            }
        } else if (alpha[t] <= 0.0) {
            if (y[t] > 0) {
                ub = std::min(ub, yg);
            } else {
                lb = std::max(lb, yg);
            }
        } else {
            ++n_free;
            free_sum += yg;
        }
    }
    const double rho = n_free > 0 ? free_sum / static_cast<double>(n_free) : 0.5 * (ub + lb);
    model.bias = -rho;

    for (std::size_t t = 0; t < n; ++t) {
        if (alpha[t] > 0.0) {
            model.support_indices.push_back(t);
            model.dual_coefficients.push_back(alpha[t] * y[t]);
        }
    }
    return model;
}

std::vector<double> svm_decision(const SvmModel& model, const Eigen::MatrixXd& cross_gram) {
    if (static_cast<std::size_t>(cross_gram.cols()) != model.n_train) {
        throw std::invalid_argument("svm_decision: cross-Gram columns must index the training set");
    }
    std::vector<double> out(static_cast<std::size_t>(cross_gram.rows()), model.bias);
    for (Eigen::Index r = 0; r < cross_gram.rows(); ++r) {
        double f = model.bias;
        for (std::size_t k = 0; k < model.support_indices.size(); ++k) {
            f += model.dual_coefficients[k] * cross_gram(r, static_cast<Eigen::Index>(model.support_indices[k]));
        }
        out[static_cast<std::size_t>(r)] = f;
    }
    return out;
}

std::vector<int> svm_predict(const SvmModel& model, const Eigen::MatrixXd& cross_gram) {
    const auto f = svm_decision(model, cross_gram);
    std::vector<int> labels(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        labels[i] = label_of(f[i]);
    }
    return labels;
}

std::vector<double> svm_alphas(const SvmModel& model) {
    std::vector<double> alpha(model.n_train, 0.0);
    for (std::size_t k = 0; k < model.support_indices.size(); ++k) {
        alpha[model.support_indices[k]] = std::abs(model.dual_coefficients[k]);
    }
    return alpha;
}

LinearSvm linear_svm_fit(const RowMatrix& x, std::span<const int> labels, const SvmOptions& options) {
    const Eigen::MatrixXd gram = x * x.transpose();
    const SvmModel dual = svm_fit(gram, labels, options);
    LinearSvm out;
    out.w.assign(static_cast<std::size_t>(x.cols()), 0.0);
    for (std::size_t k = 0; k < dual.support_indices.size(); ++k) {
        const auto row = static_cast<Eigen::Index>(dual.support_indices[k]);
        for (Eigen::Index c = 0; c < x.cols(); ++c) {
            out.w[static_cast<std::size_t>(c)] += dual.dual_coefficients[k] * x(row, c);
        }
    }
    out.b = dual.bias;
    return out;
}

std::vector<int> linear_svm_predict(const LinearSvm& model, const RowMatrix& x) {
    if (static_cast<std::size_t>(x.cols()) != model.w.size()) {
        throw std::invalid_argument("linear_svm_predict: dimension mismatch");
    }
    std::vector<int> out(static_cast<std::size_t>(x.rows()));
    for (Eigen::Index r = 0; r < x.rows(); ++r) {
        double f = model.b;
        for (Eigen::Index c = 0; c < x.cols(); ++c) {
            f += model.w[static_cast<std::size_t>(c)] * x(r, c);
        }
        out[static_cast<std::size_t>(r)] = label_of(f);
    }
    return out;
}

} // namespace qfm
