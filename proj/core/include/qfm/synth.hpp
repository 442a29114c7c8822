#pragma once

/**
 * @file
 * Deterministic synthetic datasets for desk-scale runs.
 *
 * Raw features are grouped into planes (dims 2k, 2k+1) scaled by 0.85^k, so
 * PCA keeps each plane's pair of directions together and the ordering is
 * stable. Every plane carries the class signal independently:
 *
 * - blobs: isotropic Gaussians around class centers `separation` sigma apart
 *   (linearly separable);
 * - rings: class c sits on radius 1 + c * ring_gap in every plane at a random
 *   angle (radially separable, linearly not);
 * - xor-tiles: a checkerboard of tiles per plane, tile (i, j) belongs to
 *   class (i + j) mod C.
 */

#include "qfm/dataset.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace qfm {

enum class SynthStructure { Blobs, Rings, XorTiles };

std::string_view structure_name(SynthStructure s);
std::optional<SynthStructure> parse_structure(std::string_view name);

struct SynthSpec {
    int num_classes = 10;
    int samples_per_class = 200;
    int raw_dim = 32;
    SynthStructure structure = SynthStructure::Rings;
    std::uint64_t seed = 0;
    double noise = 0.1;      ///< rings: radial std; xor-tiles: jitter std in tile units
    double separation = 6.0; ///< blobs: center distance in units of sigma
    double ring_gap = 1.0;

    /// Throws ConfigError.
    void validate() const;
};

Dataset synthesize(const SynthSpec& spec);

} // namespace qfm
