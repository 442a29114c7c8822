#pragma once

/**
 * @file
 * User-facing run configuration shared by the command-line subcommands.
 */

#include "qfm/dataset.hpp"
#include "qfm/pipeline.hpp"
#include "qfm/synth.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace qfm {

struct RunConfig {
    /// Feature file; when empty the synthetic spec below is generated instead.
    std::optional<std::filesystem::path> dataset;
    /// Declared class names for the feature file, in id order (optional).
    std::vector<std::string> classes;
    SynthSpec synth;

    std::vector<std::string> models{"logreg", "svm-linear", "svm-rbf", "nn", "vqc", "svm-qk"};
    std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4};
    /// Defaults to 16 for benchmarks and 32 for sweeps.
    std::optional<int> pca_components;
    int batch_size = 64;
    /// Fraction of the full 1400/300/300 per-class split; absent means full scale.
    std::optional<double> desk_scale;
    std::uint64_t split_seed = kDefaultSplitSeed;
    int n_qubits = 4;
    int n_blocks = 6;
    std::vector<int> sweep_qubits{1, 2, 3, 4, 5, 6, 7};
    int vqc_epochs = 80;
    int vqc_patience = 40;
    int mlp_epochs = 500;
    double learning_rate = 1e-2;
    int workers = 1;
    std::filesystem::path out_dir = "out";

    /// Throws ConfigError on the first invalid field.
    void validate() const;

    [[nodiscard]] BenchmarkConfig benchmark_config() const;
    [[nodiscard]] SweepConfig sweep_config() const;
};

/// Reads the feature file or synthesizes the configured dataset.
Dataset load_dataset(const RunConfig& config);

} // namespace qfm
