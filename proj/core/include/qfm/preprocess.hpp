#pragma once

#include "qfm/matrix.hpp"

#include <Eigen/Core>

#include <vector>

namespace qfm {

/// Principal axes of a training matrix. Each component's largest-magnitude
/// entry is positive, so the basis is reproducible bit for bit.
struct PcaBasis {
    Eigen::RowVectorXd mean;        ///< training mean (1 x raw_dim)
    RowMatrix components;           ///< n_components x raw_dim, orthonormal rows
    Eigen::VectorXd explained_variance;
};

/// Top eigenvectors of the (n - 1)-normalized covariance of mean-centered `train`.
PcaBasis pca_fit(const RowMatrix& train, int n_components);

/// (x - mean) projected onto the components.
RowMatrix pca_transform(const PcaBasis& basis, const RowMatrix& features);

struct Standardizer {
    Eigen::RowVectorXd mean;
    Eigen::RowVectorXd scale;               ///< population standard deviation
    std::vector<int> zero_variance_columns; ///< columns whose scale was replaced by 1
};

/// A column with zero variance gets scale 1 and a warning on stderr.
Standardizer standardize_fit(const RowMatrix& train);
RowMatrix standardize_apply(const Standardizer& s, const RowMatrix& features);

} // namespace qfm
