#include "qfm/synth.hpp"

#include "qfm/errors.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace qfm {

namespace {

constexpr double kPlaneDecay = 0.85;

double plane_scale(int plane) { return std::pow(kPlaneDecay, plane); }

} // namespace

std::string_view structure_name(SynthStructure s) {
    switch (s) {
    case SynthStructure::Blobs: return "blobs";
    case SynthStructure::Rings: return "rings";
    case SynthStructure::XorTiles: return "xor-tiles";
    }
    return "unknown";
}

std::optional<SynthStructure> parse_structure(std::string_view name) {
    for (const auto s : {SynthStructure::Blobs, SynthStructure::Rings, SynthStructure::XorTiles}) {
        if (structure_name(s) == name) {
            return s;
        }
    }
    return std::nullopt;
}

void SynthSpec::validate() const {
    if (num_classes < 2) {
        throw ConfigError("synthetic data needs at least 2 classes");
    }
    if (samples_per_class < 1) {
        throw ConfigError("samples per class must be positive");
    }
    if (raw_dim < 2) {
        throw ConfigError("raw dimension must be at least 2");
    }
    if (!(noise >= 0.0) || !std::isfinite(noise)) {
        throw ConfigError("noise must be finite and non-negative");
    }
    if (!(separation > 0.0) || !std::isfinite(separation)) {
        throw ConfigError("separation must be positive");
    }
    if (!(ring_gap > 0.0) || !std::isfinite(ring_gap)) {
        throw ConfigError("ring gap must be positive");
    }
}

Dataset synthesize(const SynthSpec& spec) {
    spec.validate();
    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    const int C = spec.num_classes;
    const int D = spec.raw_dim;
    const int planes = D / 2;

    Dataset data;
    for (int c = 0; c < C; ++c) {
        data.class_names.push_back("c" + std::to_string(c));
    }
    data.features.resize(static_cast<Eigen::Index>(C) * spec.samples_per_class, D);
    data.labels.reserve(static_cast<std::size_t>(data.features.rows()));

    // Blob centers: orthogonal axes when there is room, otherwise random
    // directions of the same norm.
    const double center_norm = spec.separation / std::numbers::sqrt2;
    RowMatrix centers = RowMatrix::Zero(C, D);
    for (int c = 0; c < C; ++c) {
        if (D >= C) {
            centers(c, c) = center_norm;
        } else {
            for (int j = 0; j < D; ++j) {
                centers(c, j) = gauss(rng);
            }
            centers.row(c) *= center_norm / centers.row(c).norm();
        }
    }

    const int grid = std::max(2, C);
    Eigen::Index row = 0;
    for (int c = 0; c < C; ++c) {
        for (int s = 0; s < spec.samples_per_class; ++s, ++row) {
            data.labels.push_back(c);
            auto x = data.features.row(row);
            switch (spec.structure) {
            case SynthStructure::Blobs:
                for (int j = 0; j < D; ++j) {
                    x(j) = centers(c, j) + gauss(rng);
                }
                break;
            case SynthStructure::Rings: {
                const double radius = 1.0 + spec.ring_gap * c;
                for (int k = 0; k < planes; ++k) {
                    const double angle = 2.0 * std::numbers::pi * unit(rng);
                    const double rho = radius + spec.noise * gauss(rng);
                    x(2 * k) = plane_scale(k) * rho * std::cos(angle);
                    x(2 * k + 1) = plane_scale(k) * rho * std::sin(angle);
                }
                break;
            }
            case SynthStructure::XorTiles:
                for (int k = 0; k < planes; ++k) {
                    // Pick a tile of class c: any row i, then the column fixing (i + j) mod C.
                    const int i = static_cast<int>(unit(rng) * grid) % grid;
                    int j = ((c - i) % C + C) % C;
                    const int wraps = (grid - 1 - j) / C + 1; // columns j, j + C, ... inside the grid
                    j += C * (static_cast<int>(unit(rng) * wraps) % wraps);
                    const double u = i + 0.1 + 0.8 * unit(rng) + spec.noise * gauss(rng) - grid / 2.0;
                    const double v = j + 0.1 + 0.8 * unit(rng) + spec.noise * gauss(rng) - grid / 2.0;
                    x(2 * k) = plane_scale(k) * u;
                    x(2 * k + 1) = plane_scale(k) * v;
                }
                break;
            }
            if (D % 2 == 1 && spec.structure != SynthStructure::Blobs) {
                x(D - 1) = plane_scale(planes) * gauss(rng);
            }
        }
    }
    return data;
}

} // namespace qfm
