#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <span>
#include <vector>

namespace qfm {

/// Samples x features, one sample per contiguous row.
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

inline std::span<const double> row_span(const RowMatrix& m, Eigen::Index row) {
    return {m.data() + row * m.cols(), static_cast<std::size_t>(m.cols())};
}

/// Gathers `rows` of `m` into a new matrix, preserving order.
inline RowMatrix select_rows(const RowMatrix& m, std::span<const std::size_t> rows) {
    RowMatrix out(static_cast<Eigen::Index>(rows.size()), m.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out.row(static_cast<Eigen::Index>(i)) = m.row(static_cast<Eigen::Index>(rows[i]));
    }
    return out;
}

/// Binary-labelled samples; labels are +1 / -1.
struct LabeledData {
    RowMatrix x;
    std::vector<int> y;

    [[nodiscard]] std::size_t size() const noexcept { return y.size(); }
};

} // namespace qfm
