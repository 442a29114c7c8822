#pragma once

/**
 * @file
 * Labelled feature datasets and the delimited feature-file format:
 *
 *     class,f0,f1,...,f{d-1}
 *     AnnualCrop,0.12,3.4,...
 *
 * One sample per line; the first field is the class name, the rest are finite
 * real features. Class ids follow the order of first appearance unless an
 * explicit class list is supplied.
 */

#include "qfm/matrix.hpp"

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace qfm {

struct Dataset {
    RowMatrix features;
    std::vector<int> labels; ///< class ids, indexes into class_names
    std::vector<std::string> class_names;

    [[nodiscard]] int num_classes() const noexcept { return static_cast<int>(class_names.size()); }
    [[nodiscard]] std::size_t size() const noexcept { return labels.size(); }
    [[nodiscard]] std::vector<std::size_t> indices_of(int class_id) const;

    /// Throws DataError on inconsistent shapes, bad ids or non-finite features.
    void validate() const;
};

/// Parses a feature file. With `declared_classes`, rows naming any other class
/// are rejected and ids follow the declared order. Errors carry line numbers.
Dataset read_feature_file(std::istream& in, const std::optional<std::vector<std::string>>& declared_classes = {});
Dataset read_feature_file(const std::filesystem::path& path,
                          const std::optional<std::vector<std::string>>& declared_classes = {});

/// Writes with 17 significant digits so values round-trip exactly.
void write_feature_file(std::ostream& out, const Dataset& data);
void write_feature_file(const std::filesystem::path& path, const Dataset& data);

} // namespace qfm
