#include "qfm/run_config.hpp"

#include "qfm/errors.hpp"

#include <cmath>
#include <set>

namespace qfm {

namespace {

BenchmarkConfig base_config(const RunConfig& c, int default_pca) {
    BenchmarkConfig b;
    b.models.clear();
    for (const auto& name : c.models) {
        b.models.push_back(*parse_model(name));
    }
    b.seeds = c.seeds;
    b.split = c.desk_scale ? SplitSpec::desk_scale(*c.desk_scale) : SplitSpec::full_scale();
    b.split.split_seed = c.split_seed;
    b.pca_components = c.pca_components.value_or(default_pca);
    b.n_qubits = c.n_qubits;
    b.n_blocks = c.n_blocks;
    b.vqc.batch_size = c.batch_size;
    b.vqc.max_epochs = c.vqc_epochs;
    b.vqc.patience = c.vqc_patience;
    b.vqc.learning_rate = c.learning_rate;
    b.mlp.batch_size = c.batch_size;
    b.mlp.max_epochs = c.mlp_epochs;
    b.mlp.patience = c.mlp_epochs;
    b.mlp.learning_rate = c.learning_rate;
    b.workers = c.workers;
    return b;
}

} // namespace

void RunConfig::validate() const {
    if (models.empty()) {
        throw ConfigError("models: at least one model is required");
    }
    std::set<std::string> seen;
    for (const auto& name : models) {
        if (!parse_model(name)) {
            throw ConfigError("models: unknown model '" + name +
                              "' (expected logreg, svm-linear, svm-rbf, nn, vqc or svm-qk)");
        }
        if (!seen.insert(name).second) {
            throw ConfigError("models: '" + name + "' listed twice");
        }
    }
    if (seeds.empty()) {
        throw ConfigError("seeds: at least one seed is required");
    }
    if (pca_components && *pca_components < 2) {
        throw ConfigError("pca: must be at least 2");
    }
    if (batch_size < 2 || batch_size % 2 != 0) {
        throw ConfigError("batch-size: must be an even number >= 2");
    }
    if (desk_scale && !(*desk_scale > 0.0 && *desk_scale <= 1.0)) {
        throw ConfigError("desk-scale: must lie in (0, 1]");
    }
    if (n_qubits < 1 || n_qubits > 16) {
        throw ConfigError("qubits: must lie in [1, 16]");
    }
    if (n_blocks < 0) {
        throw ConfigError("blocks: must be non-negative");
    }
    for (const int q : sweep_qubits) {
        if (q < 1 || q > 16) {
            throw ConfigError("sweep-qubits: each entry must lie in [1, 16]");
        }
    }
    if (vqc_epochs < 1 || mlp_epochs < 1) {
        throw ConfigError("epochs: must be positive");
    }
    if (vqc_patience < 0 || vqc_patience > vqc_epochs) {
        throw ConfigError("patience: must lie in [0, vqc-epochs]");
    }
    if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
        throw ConfigError("lr: must be positive");
    }
    if (workers < 1) {
        throw ConfigError("workers: must be at least 1");
    }
    if (!dataset) {
        synth.validate();
    }
    benchmark_config().validate();
}

BenchmarkConfig RunConfig::benchmark_config() const { return base_config(*this, 16); }

SweepConfig RunConfig::sweep_config() const {
    SweepConfig s;
    s.base = base_config(*this, 32);
    s.qubit_counts = sweep_qubits;
    return s;
}

Dataset load_dataset(const RunConfig& config) {
    if (!config.dataset) {
        return synthesize(config.synth);
    }
    if (config.classes.empty()) {
        return read_feature_file(*config.dataset);
    }
    return read_feature_file(*config.dataset, config.classes);
}

} // namespace qfm
