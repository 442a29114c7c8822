#include "qfm/dataset.hpp"

#include "qfm/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <string_view>

namespace qfm {

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        fields.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
        if (comma == std::string_view::npos) {
            break;
        }
        start = comma + 1;
    }
    return fields;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

double parse_double(std::string_view field, std::size_t line_no, std::size_t column) {
    field = trim(field);
    double value = 0.0;
    const auto* end = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(field.data(), end, value);
    if (ec != std::errc() || ptr != end) {
        throw DataError("line " + std::to_string(line_no) + ", column " + std::to_string(column + 1) +
                        ": not a number: '" + std::string(field) + "'");
    }
    if (!std::isfinite(value)) {
        throw DataError("line " + std::to_string(line_no) + ", column " + std::to_string(column + 1) +
                        ": non-finite feature value");
    }
    return value;
}

} // namespace

std::vector<std::size_t> Dataset::indices_of(int class_id) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] == class_id) {
            out.push_back(i);
        }
    }
    return out;
}

void Dataset::validate() const {
    if (static_cast<std::size_t>(features.rows()) != labels.size()) {
        throw DataError("dataset: feature rows and labels differ in count");
    }
    if (class_names.empty()) {
        throw DataError("dataset: no classes declared");
    }
    for (const int y : labels) {
        if (y < 0 || y >= num_classes()) {
            throw DataError("dataset: class id out of range");
        }
    }
    if (!features.allFinite()) {
        throw DataError("dataset: non-finite feature value");
    }
}

Dataset read_feature_file(std::istream& in, const std::optional<std::vector<std::string>>& declared_classes) {
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) {
        throw DataError("feature file is empty");
    }
    ++line_no;
    const auto header = split_fields(trim(line));
    if (header.size() < 2 || trim(header[0]) != "class") {
        throw DataError("line 1: header must start with 'class' followed by feature names");
    }
    const std::size_t dim = header.size() - 1;

    Dataset data;
    std::map<std::string, int, std::less<>> ids;
    if (declared_classes) {
        for (const auto& name : *declared_classes) {
            if (!ids.emplace(name, static_cast<int>(data.class_names.size())).second) {
                throw DataError("duplicate declared class '" + name + "'");
            }
            data.class_names.push_back(name);
        }
    }

    std::vector<double> values;
    while (std::getline(in, line)) {
        ++line_no;
        const auto body = trim(line);
        if (body.empty()) {
            continue;
        }
        const auto fields = split_fields(body);
        if (fields.size() != dim + 1) {
            throw DataError("line " + std::to_string(line_no) + ": expected " + std::to_string(dim + 1) +
                            " fields, found " + std::to_string(fields.size()));
        }
        const std::string name(trim(fields[0]));
        if (name.empty()) {
            throw DataError("line " + std::to_string(line_no) + ": empty class name");
        }
        auto it = ids.find(name);
        if (it == ids.end()) {
            if (declared_classes) {
                throw DataError("line " + std::to_string(line_no) + ": undeclared class '" + name + "'");
            }
            it = ids.emplace(name, static_cast<int>(data.class_names.size())).first;
            data.class_names.push_back(name);
        }
        data.labels.push_back(it->second);
        for (std::size_t c = 1; c <= dim; ++c) {
            values.push_back(parse_double(fields[c], line_no, c));
        }
    }
    if (data.labels.empty()) {
        throw DataError("feature file contains no samples");
    }
    data.features = Eigen::Map<const RowMatrix>(values.data(), static_cast<Eigen::Index>(data.labels.size()),
                                                static_cast<Eigen::Index>(dim));
    data.validate();
    return data;
}

Dataset read_feature_file(const std::filesystem::path& path,
                          const std::optional<std::vector<std::string>>& declared_classes) {
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open feature file " + path.string());
    }
    return read_feature_file(in, declared_classes);
}

void write_feature_file(std::ostream& out, const Dataset& data) {
    data.validate();
    out << "class";
    for (Eigen::Index c = 0; c < data.features.cols(); ++c) {
        out << ",f" << c;
    }
    out << '\n';
    out << std::setprecision(17);
    for (std::size_t i = 0; i < data.size(); ++i) {
        out << data.class_names[static_cast<std::size_t>(data.labels[i])];
        for (Eigen::Index c = 0; c < data.features.cols(); ++c) {
            out << ',' << data.features(static_cast<Eigen::Index>(i), c);
        }
        out << '\n';
    }
}

void write_feature_file(const std::filesystem::path& path, const Dataset& data) {
    std::ofstream out(path);
    if (!out) {
        throw DataError("cannot write feature file " + path.string());
    }
    write_feature_file(out, data);
    if (!out) {
        throw DataError("failed while writing " + path.string());
    }
}

} // namespace qfm
