#include "qfm/preprocess.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <iostream>
#include <stdexcept>
#include <string>

namespace qfm {

PcaBasis pca_fit(const RowMatrix& train, int n_components) {
    const Eigen::Index n = train.rows();
    const Eigen::Index d = train.cols();
    if (n_components < 1 || n_components > std::min(n, d)) {
        throw std::invalid_argument("pca_fit: n_components=" + std::to_string(n_components) +
                                    " exceeds min(n_samples, n_features)=" + std::to_string(std::min(n, d)));
    }
    if (n < 2) {
        throw std::invalid_argument("pca_fit: need at least two samples");
    }
    PcaBasis basis;
    basis.mean = train.colwise().mean();
    const Eigen::MatrixXd centered = train.rowwise() - basis.mean;
    const Eigen::MatrixXd cov = (centered.transpose() * centered) / static_cast<double>(n - 1);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("pca_fit: eigen-decomposition failed");
    }
    // Eigenvalues come in ascending order.
    basis.components.resize(n_components, d);
    basis.explained_variance.resize(n_components);
    for (int k = 0; k < n_components; ++k) {
        const Eigen::Index col = d - 1 - k;
        Eigen::VectorXd v = solver.eigenvectors().col(col);
        Eigen::Index arg = 0;
        v.cwiseAbs().maxCoeff(&arg);
        if (v(arg) < 0.0) {
            v = -v;
        }
        basis.components.row(k) = v.transpose();
        basis.explained_variance(k) = solver.eigenvalues()(col);
    }
    return basis;
}

RowMatrix pca_transform(const PcaBasis& basis, const RowMatrix& features) {
    if (features.cols() != basis.mean.size()) {
        throw std::invalid_argument("pca_transform: feature dimension mismatch");
    }
    return (features.rowwise() - basis.mean) * basis.components.transpose();
}

Standardizer standardize_fit(const RowMatrix& train) {
    if (train.rows() < 1) {
        throw std::invalid_argument("standardize_fit: empty training matrix");
    }
    Standardizer s;
    s.mean = train.colwise().mean();
    s.scale = ((train.rowwise() - s.mean).array().square().colwise().mean()).sqrt();
    // Round-off after PCA leaves "constant" columns at ~1e-17, not exactly 0.
    const double floor = 1e-10 * std::max(1.0, s.scale.maxCoeff());
    for (Eigen::Index c = 0; c < s.scale.size(); ++c) {
        if (!(s.scale(c) > floor)) {
            std::cerr << "warning: zero-variance feature column " << c << "; using scale 1\n";
            s.scale(c) = 1.0;
            s.zero_variance_columns.push_back(static_cast<int>(c));
        }
    }
    return s;
}

RowMatrix standardize_apply(const Standardizer& s, const RowMatrix& features) {
    if (features.cols() != s.mean.size()) {
        throw std::invalid_argument("standardize_apply: feature dimension mismatch");
    }
    return (features.rowwise() - s.mean).array().rowwise() / s.scale.array();
}

} // namespace qfm
