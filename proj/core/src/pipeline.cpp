#include "qfm/pipeline.hpp"

#include "qfm/classifiers.hpp"
#include "qfm/errors.hpp"
#include "qfm/kernels.hpp"
#include "qfm/parallel.hpp"
#include "qfm/stats.hpp"
#include "qfm/training.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <stdexcept>
#include <tuple>

namespace qfm {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::vector<std::size_t> concat(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
    std::vector<std::size_t> out(a);
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

std::vector<int> pair_labels(std::size_t n_a, std::size_t n_b) {
    std::vector<int> y(n_a, 1);
    y.insert(y.end(), n_b, -1);
    return y;
}

int model_rank(ModelKind m) {
    return static_cast<int>(std::find(kAllModels.begin(), kAllModels.end(), m) - kAllModels.begin());
}

bool contains(std::span<const ModelKind> models, ModelKind m) {
    return std::find(models.begin(), models.end(), m) != models.end();
}

RunRecord base_record(const PairTask& task, ModelKind model, std::uint64_t seed) {
    RunRecord r;
    r.class_a = task.class_a;
    r.class_b = task.class_b;
    r.model = model;
    r.seed = seed;
    return r;
}

std::vector<std::pair<int, int>> selected_pairs(const Dataset& data, const BenchmarkConfig& config) {
    if (config.pairs.empty()) {
        return enumerate_pairs(data.num_classes());
    }
    for (const auto& [a, b] : config.pairs) {
        if (a < 0 || b < 0 || a >= data.num_classes() || b >= data.num_classes() || a == b) {
            throw ConfigError("invalid class pair (" + std::to_string(a) + ", " + std::to_string(b) + ")");
        }
    }
    return config.pairs;
}

std::vector<PairTask> build_tasks(const Dataset& data, const std::vector<std::pair<int, int>>& pairs,
                                  const BenchmarkConfig& config) {
    std::vector<PairTask> tasks(pairs.size());
    parallel_for(pairs.size(), config.workers, [&](std::size_t i) {
        tasks[i] = make_pair_task(data, pairs[i].first, pairs[i].second, config.split, config.pca_components);
    });
    return tasks;
}

void sort_records(std::vector<RunRecord>& records) {
    std::stable_sort(records.begin(), records.end(), [](const RunRecord& l, const RunRecord& r) {
        return std::tuple(l.class_a, l.class_b, l.n_qubits, model_rank(l.model), l.seed) <
               std::tuple(r.class_a, r.class_b, r.n_qubits, model_rank(r.model), r.seed);
    });
}

std::optional<double> ci_or_none(std::span<const double> values) {
    if (values.size() < 2) {
        return std::nullopt;
    }
    return confidence_interval(values).half_width;
}

} // namespace

SplitSpec SplitSpec::desk_scale(double fraction) {
    if (!(fraction > 0.0 && fraction <= 1.0)) {
        throw ConfigError("desk-scale fraction must lie in (0, 1]");
    }
    const auto scaled = [&](int n) { return std::max(1, static_cast<int>(std::lround(n * fraction))); };
    SplitSpec s;
    s.train_per_class = scaled(s.train_per_class);
    s.validation_per_class = scaled(s.validation_per_class);
    s.test_per_class = scaled(s.test_per_class);
    return s;
}

void SplitSpec::validate() const {
    if (train_per_class < 2 || validation_per_class < 1 || test_per_class < 1) {
        throw ConfigError("split needs at least 2 training and 1 validation/test sample per class");
    }
}

SplitIndices split_class(const Dataset& data, int class_id, const SplitSpec& split) {
    split.validate();
    auto rows = data.indices_of(class_id);
    if (rows.size() < static_cast<std::size_t>(split.per_class())) {
        throw DataError("class '" + data.class_names.at(static_cast<std::size_t>(class_id)) + "' has " +
                        std::to_string(rows.size()) + " samples; the split needs " +
                        std::to_string(split.per_class()) + " (use a desk-scale fraction for smaller data)");
    }
    std::seed_seq seq{static_cast<std::uint32_t>(split.split_seed), static_cast<std::uint32_t>(split.split_seed >> 32),
                      static_cast<std::uint32_t>(class_id)};
    std::mt19937_64 rng(seq);
    std::shuffle(rows.begin(), rows.end(), rng);

    const auto n_tr = static_cast<std::ptrdiff_t>(split.train_per_class);
    const auto n_va = static_cast<std::ptrdiff_t>(split.validation_per_class);
    const auto n_te = static_cast<std::ptrdiff_t>(split.test_per_class);
    SplitIndices out;
    out.train.assign(rows.begin(), rows.begin() + n_tr);
    out.validation.assign(rows.begin() + n_tr, rows.begin() + n_tr + n_va);
    out.test.assign(rows.begin() + n_tr + n_va, rows.begin() + n_tr + n_va + n_te);
    return out;
}

PairTask make_pair_task(const Dataset& data, int class_a, int class_b, const SplitSpec& split, int pca_components) {
    if (class_a == class_b) {
        throw std::invalid_argument("make_pair_task: classes must differ");
    }
    if (class_a < 0 || class_b < 0 || class_a >= data.num_classes() || class_b >= data.num_classes()) {
        throw std::invalid_argument("make_pair_task: class id out of range");
    }
    const auto sa = split_class(data, class_a, split);
    const auto sb = split_class(data, class_b, split);

    PairTask task;
    task.class_a = class_a;
    task.class_b = class_b;
    task.split.train = concat(sa.train, sb.train);
    task.split.validation = concat(sa.validation, sb.validation);
    task.split.test = concat(sa.test, sb.test);

    const RowMatrix raw_train = select_rows(data.features, task.split.train);
    task.pca = pca_fit(raw_train, pca_components);
    const RowMatrix pca_train = pca_transform(task.pca, raw_train);
    task.scaler = standardize_fit(pca_train);

    const auto view = [&](const std::vector<std::size_t>& rows) {
        return standardize_apply(task.scaler, pca_transform(task.pca, select_rows(data.features, rows)));
    };
    task.train = {standardize_apply(task.scaler, pca_train), pair_labels(sa.train.size(), sb.train.size())};
    task.validation = {view(task.split.validation), pair_labels(sa.validation.size(), sb.validation.size())};
    task.test = {view(task.split.test), pair_labels(sa.test.size(), sb.test.size())};
    return task;
}

std::vector<std::pair<int, int>> enumerate_pairs(int num_classes) {
    std::vector<std::pair<int, int>> pairs;
    for (int a = 0; a < num_classes; ++a) {
        for (int b = a + 1; b < num_classes; ++b) {
            pairs.emplace_back(a, b);
        }
    }
    return pairs;
}

std::string_view model_name(ModelKind model) {
    switch (model) {
    case ModelKind::LogReg: return "logreg";
    case ModelKind::SvmLinear: return "svm-linear";
    case ModelKind::SvmRbf: return "svm-rbf";
    case ModelKind::Mlp: return "nn";
    case ModelKind::Vqc: return "vqc";
    case ModelKind::SvmQk: return "svm-qk";
    }
    return "unknown";
}

std::optional<ModelKind> parse_model(std::string_view name) {
    for (const auto m : kAllModels) {
        if (model_name(m) == name) {
            return m;
        }
    }
    return std::nullopt;
}

bool is_deterministic(ModelKind model) {
    return model == ModelKind::LogReg || model == ModelKind::SvmLinear || model == ModelKind::SvmRbf;
}

void BenchmarkConfig::validate() const {
    if (models.empty()) {
        throw ConfigError("at least one model must be selected");
    }
    if (seeds.empty()) {
        throw ConfigError("at least one seed must be given");
    }
    if (std::set<std::uint64_t>(seeds.begin(), seeds.end()).size() != seeds.size()) {
        throw ConfigError("seeds must be distinct");
    }
    if (pca_components < 2) {
        throw ConfigError("pca_components must be at least 2");
    }
    if (n_qubits < 1 || n_qubits > 16 || n_blocks < 0) {
        throw ConfigError("invalid circuit size");
    }
    if (!(svm_C > 0.0) || !(logreg_C > 0.0) || logreg_max_iter < 1) {
        throw ConfigError("invalid classical model hyperparameters");
    }
    if (workers < 1) {
        throw ConfigError("workers must be at least 1");
    }
    split.validate();
    try {
        vqc.validate();
        mlp.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

std::uint64_t derive_seed(std::uint64_t seed, int class_a, int class_b, ModelKind model) {
    const std::uint64_t family = (model == ModelKind::Vqc || model == ModelKind::SvmQk) ? 2
                                 : model == ModelKind::Mlp                               ? 1
                                                                                         : 0;
    std::uint64_t h = splitmix64(seed);
    h = splitmix64(h ^ static_cast<std::uint64_t>(class_a));
    h = splitmix64(h ^ static_cast<std::uint64_t>(class_b));
    return splitmix64(h ^ family);
}

std::vector<RunRecord> run_models_on_task(const PairTask& task, std::span<const ModelKind> models,
                                          std::uint64_t seed, const BenchmarkConfig& config) {
    std::vector<RunRecord> out;
    const auto run_guarded = [&](ModelKind model, auto&& body) {
        RunRecord r = base_record(task, model, seed);
        const auto start = Clock::now();
        try {
            body(r);
        } catch (const std::exception& e) {
            r.accuracy = 0.0;
            r.error = e.what();
        }
        r.wall_seconds = seconds_since(start);
        out.push_back(std::move(r));
    };

    if (contains(models, ModelKind::LogReg)) {
        run_guarded(ModelKind::LogReg, [&](RunRecord& r) {
            const auto m = logreg_fit(task.train.x, task.train.y, {config.logreg_C, config.logreg_max_iter});
            r.accuracy = accuracy(logreg_predict(m, task.test.x), task.test.y);
        });
    }
    if (contains(models, ModelKind::SvmLinear)) {
        run_guarded(ModelKind::SvmLinear, [&](RunRecord& r) {
            const auto gram = linear_gram(task.train.x, task.train.x);
            const auto m = svm_fit(gram.values, task.train.y, {config.svm_C});
            const auto cross = linear_gram(task.test.x, task.train.x);
            r.accuracy = accuracy(svm_predict(m, cross.values), task.test.y);
        });
    }
    if (contains(models, ModelKind::SvmRbf)) {
        run_guarded(ModelKind::SvmRbf, [&](RunRecord& r) {
            const double gamma = gamma_scale(task.train.x);
            const auto gram = rbf_gram(task.train.x, task.train.x, gamma);
            const auto m = svm_fit(gram.values, task.train.y, {config.svm_C});
            const auto cross = rbf_gram(task.test.x, task.train.x, gamma);
            r.accuracy = accuracy(svm_predict(m, cross.values), task.test.y);
        });
    }
    if (contains(models, ModelKind::Mlp)) {
        run_guarded(ModelKind::Mlp, [&](RunRecord& r) {
            TrainConfig cfg = config.mlp;
            cfg.seed = derive_seed(seed, task.class_a, task.class_b, ModelKind::Mlp);
            const auto fit = mlp_fit(task.train, task.validation, cfg);
            r.accuracy = accuracy(mlp_predict(fit.model, task.test.x), task.test.y);
            r.training = TrainingSummary{fit.outcome.epochs_run, fit.outcome.best_epoch,
                                         fit.outcome.best_val_accuracy, fit.outcome.loss_trace};
        });
    }
    const bool want_vqc = contains(models, ModelKind::Vqc);
    const bool want_qk = contains(models, ModelKind::SvmQk);
    if (want_vqc || want_qk) {
        const CircuitSpec spec{config.n_qubits, config.n_blocks, static_cast<int>(task.train.x.cols())};
        TrainConfig cfg = config.vqc;
        cfg.seed = derive_seed(seed, task.class_a, task.class_b, ModelKind::Vqc);

        std::optional<TrainResult> trained;
        std::string train_error;
        const auto start = Clock::now();
        try {
            trained = train_vqc(spec, task.train, task.validation, cfg);
        } catch (const std::exception& e) {
            train_error = e.what();
        }
        const double train_seconds = seconds_since(start);

        if (want_vqc) {
            run_guarded(ModelKind::Vqc, [&](RunRecord& r) {
                r.n_qubits = spec.n_qubits;
                if (!trained) {
                    throw std::runtime_error("VQC training failed: " + train_error);
                }
                r.accuracy = accuracy(vqc_predict(trained->best_params, trained->best_head, task.test.x), task.test.y);
                r.training = TrainingSummary{trained->epochs_run, trained->best_epoch, trained->best_val_accuracy,
                                             trained->loss_trace};
            });
            out.back().wall_seconds += train_seconds;
        }
        if (want_qk) {
            run_guarded(ModelKind::SvmQk, [&](RunRecord& r) {
                r.n_qubits = spec.n_qubits;
                if (!trained) {
                    throw std::runtime_error("VQC training failed: " + train_error);
                }
                const GramOptions opts{};
                const StateCache train_states(spec, trained->best_params.values, task.train.x, opts);
                const StateCache test_states(spec, trained->best_params.values, task.test.x, opts);
                const auto gram = fidelity_gram(train_states);
                const auto m = svm_fit(gram.values, task.train.y, {config.svm_C});
                const auto cross = fidelity_gram(test_states, train_states);
                r.accuracy = accuracy(svm_predict(m, cross.values), task.test.y);
            });
        }
    }
    return out;
}

void aggregate(EvalReport& report) {
    report.pair_summaries.clear();
    report.class_summaries.clear();
    report.model_summaries.clear();

    // (a, b, model) -> seed -> accuracy over successful runs.
    std::map<std::tuple<int, int, int>, std::map<std::uint64_t, double>> acc;
    std::set<std::pair<int, int>> pairs;
    for (const auto& r : report.records) {
        pairs.emplace(r.class_a, r.class_b);
        if (r.ok()) {
            acc[{r.class_a, r.class_b, model_rank(r.model)}][r.seed] = r.accuracy;
        }
    }
    std::set<int> classes;
    for (const auto& [a, b] : pairs) {
        classes.insert(a);
        classes.insert(b);
    }

    for (const auto model : report.models) {
        const int rank = model_rank(model);
        std::map<std::pair<int, int>, double> pair_mean;
        for (const auto& [a, b] : pairs) {
            const auto it = acc.find({a, b, rank});
            if (it == acc.end() || it->second.empty()) {
                continue;
            }
            std::vector<double> values;
            for (const auto& [seed, v] : it->second) {
                values.push_back(v);
            }
            const double m = mean_of(values);
            pair_mean[{a, b}] = m;
            report.pair_summaries.push_back({a, b, model, m, ci_or_none(values), values.size()});
        }

        std::vector<double> class_means;
        std::vector<double> class_cis;
        bool all_ci = true;
        for (const int c : classes) {
            std::vector<double> means;
            for (const auto& [p, m] : pair_mean) {
                if (p.first == c || p.second == c) {
                    means.push_back(m);
                }
            }
            if (means.empty()) {
                continue;
            }
            std::vector<double> per_seed;
            for (const auto seed : report.seeds) {
                std::vector<double> v;
                for (const auto& [p, m] : pair_mean) {
                    if (p.first != c && p.second != c) {
                        continue;
                    }
                    const auto& by_seed = acc.at({p.first, p.second, rank});
                    if (const auto s = by_seed.find(seed); s != by_seed.end()) {
                        v.push_back(s->second);
                    }
                }
                if (!v.empty()) {
                    per_seed.push_back(mean_of(v));
                }
            }
            ClassSummary cs{c, model, mean_of(means), ci_or_none(per_seed), means.size()};
            class_means.push_back(cs.mean);
            if (cs.ci_half_width) {
                class_cis.push_back(*cs.ci_half_width);
            } else {
                all_ci = false;
            }
            report.class_summaries.push_back(cs);
        }
        if (!class_means.empty()) {
            ModelSummary ms{model, mean_of(class_means), std::nullopt, class_means.size()};
            if (all_ci && !class_cis.empty()) {
                ms.mean_ci_half_width = mean_of(class_cis);
            }
            report.model_summaries.push_back(ms);
        }
    }
}

EvalReport run_benchmark(const Dataset& data, const BenchmarkConfig& config) {
    config.validate();
    data.validate();
    const auto pairs = selected_pairs(data, config);
    const auto tasks = build_tasks(data, pairs, config);

    std::vector<ModelKind> deterministic;
    std::vector<ModelKind> stochastic;
    for (const auto m : kAllModels) {
        if (!contains(config.models, m)) {
            continue;
        }
        (is_deterministic(m) ? deterministic : stochastic).push_back(m);
    }

    struct Job {
        std::size_t task;
        std::vector<ModelKind> models;
        std::optional<std::uint64_t> seed; ///< empty: deterministic, replicate across seeds
    };
    std::vector<Job> jobs;
    for (std::size_t t = 0; t < tasks.size(); ++t) {
        if (!deterministic.empty()) {
            jobs.push_back({t, deterministic, std::nullopt});
        }
        for (const auto seed : config.seeds) {
            if (contains(stochastic, ModelKind::Mlp)) {
                jobs.push_back({t, {ModelKind::Mlp}, seed});
            }
            std::vector<ModelKind> quantum;
            for (const auto m : {ModelKind::Vqc, ModelKind::SvmQk}) {
                if (contains(stochastic, m)) {
                    quantum.push_back(m);
                }
            }
            if (!quantum.empty()) {
                jobs.push_back({t, quantum, seed});
            }
        }
    }

    std::vector<std::vector<RunRecord>> results(jobs.size());
    parallel_for(jobs.size(), config.workers, [&](std::size_t j) {
        const Job& job = jobs[j];
        if (job.seed) {
            results[j] = run_models_on_task(tasks[job.task], job.models, *job.seed, config);
            return;
        }
        const auto once = run_models_on_task(tasks[job.task], job.models, config.seeds.front(), config);
        for (const auto seed : config.seeds) {
            for (auto r : once) {
                r.seed = seed;
                results[j].push_back(std::move(r));
            }
        }
    });

    EvalReport report;
    report.class_names = data.class_names;
    for (const auto m : kAllModels) {
        if (contains(config.models, m)) {
            report.models.push_back(m);
        }
    }
    report.seeds = config.seeds;
    report.pca_components = config.pca_components;
    report.n_qubits = config.n_qubits;
    for (auto& batch : results) {
        for (auto& r : batch) {
            report.records.push_back(std::move(r));
        }
    }
    sort_records(report.records);
    aggregate(report);
    return report;
}

SweepReport qubit_sweep(const Dataset& data, const SweepConfig& config) {
    config.base.validate();
    data.validate();
    if (config.qubit_counts.empty()) {
        throw ConfigError("sweep needs at least one qubit count");
    }
    for (const int n : config.qubit_counts) {
        if (n < 1 || n > 16) {
            throw ConfigError("sweep qubit counts must lie in [1, 16]");
        }
    }
    const auto pairs = selected_pairs(data, config.base);
    const auto tasks = build_tasks(data, pairs, config.base);

    struct Job {
        std::size_t task;
        int n_qubits;   ///< 0: classical baselines
        std::uint64_t seed;
    };
    std::vector<Job> jobs;
    for (std::size_t t = 0; t < tasks.size(); ++t) {
        if (config.include_baselines) {
            jobs.push_back({t, 0, config.base.seeds.front()});
        }
        for (const int n : config.qubit_counts) {
            for (const auto seed : config.base.seeds) {
                jobs.push_back({t, n, seed});
            }
        }
    }

    std::vector<std::vector<RunRecord>> results(jobs.size());
    parallel_for(jobs.size(), config.base.workers, [&](std::size_t j) {
        BenchmarkConfig cfg = config.base;
        if (jobs[j].n_qubits == 0) {
            const std::array<ModelKind, 2> baselines{ModelKind::SvmLinear, ModelKind::SvmRbf};
            results[j] = run_models_on_task(tasks[jobs[j].task], baselines, jobs[j].seed, cfg);
            return;
        }
        cfg.n_qubits = jobs[j].n_qubits;
        const std::array<ModelKind, 1> vqc{ModelKind::Vqc};
        results[j] = run_models_on_task(tasks[jobs[j].task], vqc, jobs[j].seed, cfg);
    });

    SweepReport report;
    report.class_names = data.class_names;
    report.seeds = config.base.seeds;
    report.pca_components = config.base.pca_components;
    for (auto& batch : results) {
        for (auto& r : batch) {
            report.records.push_back(std::move(r));
        }
    }
    sort_records(report.records);

    for (const int n : config.qubit_counts) {
        SweepPoint point;
        point.n_qubits = n;
        point.param_count = param_count({n, config.base.n_blocks, config.base.pca_components});
        for (const auto& [a, b] : pairs) {
            std::vector<double> values;
            for (const auto& r : report.records) {
                if (r.ok() && r.model == ModelKind::Vqc && r.n_qubits == n && r.class_a == a && r.class_b == b) {
                    values.push_back(r.accuracy);
                }
            }
            if (!values.empty()) {
                point.pair_means.push_back(mean_of(values));
            }
        }
        point.n_pairs = point.pair_means.size();
        if (!point.pair_means.empty()) {
            point.mean = mean_of(point.pair_means);
            point.ci_half_width = ci_or_none(point.pair_means);
        }
        report.points.push_back(std::move(point));
    }

    if (config.include_baselines) {
        const auto baseline_mean = [&](ModelKind m) -> std::optional<double> {
            std::vector<double> v;
            for (const auto& r : report.records) {
                if (r.ok() && r.model == m) {
                    v.push_back(r.accuracy);
                }
            }
            return v.empty() ? std::nullopt : std::optional<double>(mean_of(v));
        };
        report.svm_linear_mean = baseline_mean(ModelKind::SvmLinear);
        report.svm_rbf_mean = baseline_mean(ModelKind::SvmRbf);
    }
    return report;
}

} // namespace qfm
