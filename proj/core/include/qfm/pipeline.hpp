#pragma once

/**
 * @file
 * One-vs-one evaluation protocol: fixed per-class splits, per-pair PCA and
 * standardization fitted on training rows only, every (pair, model, seed)
 * run, per-class / macro aggregation with Student-t intervals, and the
 * qubit-count sweep.
 */

#include "qfm/dataset.hpp"
#include "qfm/matrix.hpp"
#include "qfm/preprocess.hpp"
#include "qfm/trainer.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qfm {

/// Seed for the data split; independent of the training seeds so splits stay
/// fixed across runs.
inline constexpr std::uint64_t kDefaultSplitSeed = 20240917;

struct SplitSpec {
    int train_per_class = 1400;
    int validation_per_class = 300;
    int test_per_class = 300;
    std::uint64_t split_seed = kDefaultSplitSeed;

    static SplitSpec full_scale() { return {}; }
    /// Counts scaled by `fraction` (0.1 gives 140/30/30), at least 1 each.
    static SplitSpec desk_scale(double fraction);

    [[nodiscard]] int per_class() const noexcept {
        return train_per_class + validation_per_class + test_per_class;
    }
    void validate() const;

    friend bool operator==(const SplitSpec&, const SplitSpec&) = default;
};

struct SplitIndices {
    std::vector<std::size_t> train;
    std::vector<std::size_t> validation;
    std::vector<std::size_t> test;
};

/// Split of one class's rows; the same for every pair containing the class.
SplitIndices split_class(const Dataset& data, int class_id, const SplitSpec& split);

/// Binary task for (class_a, class_b); class_a is labelled +1, class_b -1.
struct PairTask {
    int class_a = 0;
    int class_b = 1;
    SplitIndices split; ///< dataset rows, class_a rows first within each set
    PcaBasis pca;
    Standardizer scaler;
    LabeledData train;
    LabeledData validation;
    LabeledData test;
};

PairTask make_pair_task(const Dataset& data, int class_a, int class_b, const SplitSpec& split,
                        int pca_components);

/// All unordered pairs (a, b) with a < b, in lexicographic order.
std::vector<std::pair<int, int>> enumerate_pairs(int num_classes);

enum class ModelKind { LogReg, SvmLinear, SvmRbf, Mlp, Vqc, SvmQk };

inline constexpr std::array<ModelKind, 6> kAllModels = {ModelKind::LogReg, ModelKind::SvmLinear, ModelKind::SvmRbf,
                                                        ModelKind::Mlp,    ModelKind::Vqc,       ModelKind::SvmQk};

std::string_view model_name(ModelKind model);
std::optional<ModelKind> parse_model(std::string_view name);
/// Models with no seed dependence run once per pair; the result is replicated across seeds.
bool is_deterministic(ModelKind model);

struct BenchmarkConfig {
    std::vector<ModelKind> models{kAllModels.begin(), kAllModels.end()};
    std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4};
    SplitSpec split;
    int pca_components = 16;
    int n_qubits = 4;
    int n_blocks = 6;
    TrainConfig vqc = TrainConfig::vqc_defaults();
    TrainConfig mlp = TrainConfig::mlp_defaults();
    double svm_C = 1.0;
    double logreg_C = 1.0;
    int logreg_max_iter = 5000;
    int workers = 1;
    /// Restrict to these pairs; empty means every pair.
    std::vector<std::pair<int, int>> pairs;

    void validate() const;
};

struct TrainingSummary {
    int epochs_run = 0;
    int best_epoch = 0;
    double best_val_accuracy = 0.0;
    std::vector<double> loss_trace;

    friend bool operator==(const TrainingSummary&, const TrainingSummary&) = default;
};

struct RunRecord {
    int class_a = 0;
    int class_b = 0;
    ModelKind model = ModelKind::LogReg;
    std::uint64_t seed = 0;
    int n_qubits = 0; ///< circuit width for Vqc / SvmQk records, else 0
    double accuracy = 0.0;
    double wall_seconds = 0.0;
    std::optional<TrainingSummary> training;
    std::string error; ///< non-empty when the run failed

    [[nodiscard]] bool ok() const noexcept { return error.empty(); }
    friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

struct PairSummary {
    int class_a = 0;
    int class_b = 0;
    ModelKind model = ModelKind::LogReg;
    double mean = 0.0;
    std::optional<double> ci_half_width; ///< absent with fewer than two seeds
    std::size_t n_seeds = 0;

    friend bool operator==(const PairSummary&, const PairSummary&) = default;
};

struct ClassSummary {
    int class_id = 0;
    ModelKind model = ModelKind::LogReg;
    double mean = 0.0;                   ///< mean over pairs containing the class of seed-averaged accuracies
    std::optional<double> ci_half_width; ///< over seeds of the per-seed class means
    std::size_t n_pairs = 0;

    friend bool operator==(const ClassSummary&, const ClassSummary&) = default;
};

struct ModelSummary {
    ModelKind model = ModelKind::LogReg;
    double macro_mean = 0.0;
    /// Mean of the per-class half-widths; a summary, not an interval for macro_mean.
    std::optional<double> mean_ci_half_width;
    std::size_t n_classes = 0;

    friend bool operator==(const ModelSummary&, const ModelSummary&) = default;
};

struct EvalReport {
    std::vector<std::string> class_names;
    std::vector<ModelKind> models;
    std::vector<std::uint64_t> seeds;
    int pca_components = 16;
    int n_qubits = 4;
    std::vector<RunRecord> records;
    std::vector<PairSummary> pair_summaries;
    std::vector<ClassSummary> class_summaries;
    std::vector<ModelSummary> model_summaries;

    friend bool operator==(const EvalReport&, const EvalReport&) = default;
};

/// Recomputes every summary block of `report` from its records.
void aggregate(EvalReport& report);

EvalReport run_benchmark(const Dataset& data, const BenchmarkConfig& config);

/// Runs one model on one prepared task. Vqc and SvmQk share a trained circuit,
/// so asking for either returns records for every requested member of that pair.
std::vector<RunRecord> run_models_on_task(const PairTask& task, std::span<const ModelKind> models,
                                          std::uint64_t seed, const BenchmarkConfig& config);

/// Per-run training seed derived from (seed, pair, model family).
std::uint64_t derive_seed(std::uint64_t seed, int class_a, int class_b, ModelKind model);

struct SweepConfig {
    BenchmarkConfig base;                  ///< models and n_qubits are ignored
    std::vector<int> qubit_counts{1, 2, 3, 4, 5, 6, 7};
    bool include_baselines = true;         ///< linear SVM and RBF SVM reference levels

    SweepConfig() { base.pca_components = 32; }
};

struct SweepPoint {
    int n_qubits = 0;
    std::size_t param_count = 0;
    double mean = 0.0;                   ///< mean over pairs of seed-averaged accuracy
    std::optional<double> ci_half_width; ///< Student-t over the pair means
    std::size_t n_pairs = 0;
    std::vector<double> pair_means;

    friend bool operator==(const SweepPoint&, const SweepPoint&) = default;
};

struct SweepReport {
    std::vector<std::string> class_names;
    std::vector<std::uint64_t> seeds;
    int pca_components = 32;
    std::vector<SweepPoint> points;
    std::vector<RunRecord> records;
    std::optional<double> svm_linear_mean;
    std::optional<double> svm_rbf_mean;

    friend bool operator==(const SweepReport&, const SweepReport&) = default;
};

SweepReport qubit_sweep(const Dataset& data, const SweepConfig& config);

} // namespace qfm
