#pragma once

// Small two-dimensional binary tasks shared by the trainer and classifier tests.

#include "qfm/matrix.hpp"

#include <random>

namespace toy {

/// Two isotropic unit-variance Gaussians whose centers are `separation` apart.
inline qfm::LabeledData blobs(int per_class, double separation, std::uint64_t seed, int dim = 2) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    qfm::LabeledData d;
    d.x.resize(2 * per_class, dim);
    for (int i = 0; i < 2 * per_class; ++i) {
        const int label = i < per_class ? 1 : -1;
        for (int j = 0; j < dim; ++j) {
            const double center = j == 0 ? label * separation / 2.0 : 0.0;
            d.x(i, j) = center + g(rng);
        }
        d.y.push_back(label);
    }
    return d;
}

/// Four Gaussian clusters at (+-1, +-1) with std `sigma`; label = sign(x0 * x1).
inline qfm::LabeledData xor_clusters(int per_cluster, double sigma, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, sigma);
    qfm::LabeledData d;
    d.x.resize(4 * per_cluster, 2);
    int row = 0;
    for (const auto [cx, cy] : {std::pair{1.0, 1.0}, std::pair{-1.0, -1.0}, std::pair{1.0, -1.0}, std::pair{-1.0, 1.0}}) {
        for (int i = 0; i < per_cluster; ++i, ++row) {
            d.x(row, 0) = cx + g(rng);
            d.x(row, 1) = cy + g(rng);
            d.y.push_back(cx * cy > 0 ? 1 : -1);
        }
    }
    return d;
}

} // namespace toy
