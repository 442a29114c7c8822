// qfm: command-line front end for the quantum feature-map benchmark.
//
// Exit codes: 0 success, 1 selfcheck failure, 2 configuration error,
// 3 data error, 4 internal failure (including failed benchmark runs).

#include "qfm/errors.hpp"
#include "qfm/kernels.hpp"
#include "qfm/pipeline.hpp"
#include "qfm/report.hpp"
#include "qfm/run_config.hpp"
#include "qfm/selfcheck.hpp"
#include "qfm/synth.hpp"
#include "qfm/training.hpp"

#include <CLI11.hpp>
#include <algorithm>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

namespace fs = std::filesystem;

namespace {

enum ExitCode { kOk = 0, kSelfcheckFailed = 1, kConfigError = 2, kDataError = 3, kInternal = 4 };

std::string trim(std::string s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) {
        return {};
    }
    return s.substr(first, s.find_last_not_of(" \t\r") - first + 1);
}

/// `key = value` lines; blank lines and lines starting with # are ignored.
std::vector<std::pair<std::string, std::string>> read_config_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw qfm::ConfigError("cannot open config file " + path.string());
    }
    std::vector<std::pair<std::string, std::string>> entries;
    std::string line;
    for (int line_no = 1; std::getline(in, line); ++line_no) {
        const auto body = trim(line);
        if (body.empty() || body.front() == '#') {
            continue;
        }
        const auto eq = body.find('=');
        if (eq == std::string::npos) {
            throw qfm::ConfigError(path.string() + ":" + std::to_string(line_no) + ": expected key = value");
        }
        entries.emplace_back(trim(body.substr(0, eq)), trim(body.substr(eq + 1)));
    }
    return entries;
}

/// Fills options not given on the command line from the config file.
void apply_config_file(CLI::App& cmd, const fs::path& path) {
    for (const auto& [key, value] : read_config_file(path)) {
        CLI::Option* opt = key == "config" ? nullptr : cmd.get_option_no_throw("--" + key);
        if (opt == nullptr) {
            throw qfm::ConfigError(path.string() + ": unknown key '" + key + "' for '" + cmd.get_name() + "'");
        }
        if (opt->count() > 0) {
            continue;
        }
        try {
            opt->add_result(value);
            opt->run_callback();
        } catch (const CLI::Error& e) {
            throw qfm::ConfigError(path.string() + ": " + key + ": " + e.what());
        }
    }
}

struct Options {
    qfm::RunConfig run;
    std::string data_path;
    std::string structure = "rings";
    double desk_scale = 0.0;
    std::string config_path;
    std::vector<int> pair{0, 1};
    std::string kernel = "fidelity";
    bool corrupt_gradient = false;
    int pca = 0;
};

void add_data_options(CLI::App& cmd, Options& o) {
    auto& s = o.run.synth;
    cmd.add_option("--data", o.data_path, "Feature file (class,f0,f1,...); synthetic data when omitted");
    cmd.add_option("--classes", o.run.classes, "Declared class names, in id order")->delimiter(',');
    cmd.add_option("--synth-classes", s.num_classes, "Synthetic: number of classes")->capture_default_str();
    cmd.add_option("--synth-samples", s.samples_per_class, "Synthetic: samples per class")->capture_default_str();
    cmd.add_option("--synth-dim", s.raw_dim, "Synthetic: raw feature dimension")->capture_default_str();
    cmd.add_option("--synth-structure", o.structure, "Synthetic: blobs, rings or xor-tiles")
        ->check(CLI::IsMember({"blobs", "rings", "xor-tiles"}))
        ->capture_default_str();
    cmd.add_option("--synth-seed", s.seed, "Synthetic: generator seed")->capture_default_str();
    cmd.add_option("--synth-noise", s.noise, "Synthetic: ring / tile noise")->capture_default_str();
    cmd.add_option("--synth-separation", s.separation, "Synthetic: blob separation in sigma")->capture_default_str();
    cmd.add_option("--synth-ring-gap", s.ring_gap, "Synthetic: radius step between ring classes")
        ->capture_default_str();
}

void add_run_options(CLI::App& cmd, Options& o) {
    auto& r = o.run;
    cmd.add_option("--models", r.models, "Comma-separated subset of logreg,svm-linear,svm-rbf,nn,vqc,svm-qk")
        ->delimiter(',');
    cmd.add_option("--seeds", r.seeds, "Comma-separated training seeds")->delimiter(',');
    cmd.add_option("--pca", o.pca, "PCA components (default 16, sweeps 32)");
    cmd.add_option("--batch-size", r.batch_size, "Mini-batch size (even)")->capture_default_str();
    cmd.add_option("--desk-scale", o.desk_scale, "Scale the 1400/300/300 per-class split by this fraction");
    cmd.add_option("--split-seed", r.split_seed, "Seed of the per-class split")->capture_default_str();
    cmd.add_option("--qubits", r.n_qubits, "Circuit width")->capture_default_str();
    cmd.add_option("--blocks", r.n_blocks, "Re-uploading blocks")->capture_default_str();
    cmd.add_option("--vqc-epochs", r.vqc_epochs, "VQC epoch limit")->capture_default_str();
    cmd.add_option("--patience", r.vqc_patience, "VQC early-stopping patience")->capture_default_str();
    cmd.add_option("--mlp-epochs", r.mlp_epochs, "MLP epochs")->capture_default_str();
    cmd.add_option("--lr", r.learning_rate, "Adam learning rate")->capture_default_str();
    cmd.add_option("--workers", r.workers, "Parallel workers")->capture_default_str();
}

void add_common(CLI::App& cmd, Options& o) {
    cmd.add_option("--out", o.run.out_dir, "Output directory")->capture_default_str();
    cmd.add_option("--config", o.config_path, "key = value file; command-line flags take precedence");
}

void finalize(CLI::App& cmd, Options& o) {
    if (!o.config_path.empty()) {
        apply_config_file(cmd, o.config_path);
    }
    auto& r = o.run;
    if (!o.data_path.empty()) {
        r.dataset = o.data_path;
    }
    r.synth.structure = *qfm::parse_structure(o.structure);
    if (o.desk_scale != 0.0) {
        r.desk_scale = o.desk_scale;
    }
    if (o.pca != 0) {
        r.pca_components = o.pca;
    }
    r.validate();
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out) {
        throw qfm::DataError("cannot write " + path.string());
    }
}

template <class Fn>
void write_stream(const fs::path& path, Fn&& fn) {
    std::ofstream out(path, std::ios::binary);
    fn(out);
    if (!out) {
        throw qfm::DataError("cannot write " + path.string());
    }
}

fs::path prepare_out(const qfm::RunConfig& r) {
    std::error_code ec;
    fs::create_directories(r.out_dir, ec);
    if (ec) {
        throw qfm::DataError("cannot create output directory " + r.out_dir.string() + ": " + ec.message());
    }
    return r.out_dir;
}

int count_failures(const std::vector<qfm::RunRecord>& records) {
    int failed = 0;
    for (const auto& r : records) {
        if (!r.ok()) {
            std::cerr << "run failed: pair (" << r.class_a << ", " << r.class_b << ") " << qfm::model_name(r.model)
                      << " seed " << r.seed << ": " << r.error << '\n';
            ++failed;
        }
    }
    return failed;
}

int cmd_synth(const Options& o) {
    const auto dir = prepare_out(o.run);
    const auto data = qfm::synthesize(o.run.synth);
    qfm::write_feature_file(dir / "dataset.csv", data);
    std::cout << "wrote " << (dir / "dataset.csv").string() << " (" << data.size() << " samples, "
              << data.num_classes() << " classes, " << data.features.cols() << " features)\n";
    return kOk;
}

int cmd_benchmark(const Options& o) {
    const auto data = qfm::load_dataset(o.run);
    const auto config = o.run.benchmark_config();
    const auto dir = prepare_out(o.run);
    const auto report = qfm::run_benchmark(data, config);

    write_text(dir / "report.json", qfm::to_json(report));
    write_stream(dir / "records.csv",
                 [&](std::ostream& out) { qfm::write_records_csv(out, report.records, report.class_names); });
    write_stream(dir / "fig_perclass.csv",
                 [&](std::ostream& out) { qfm::write_class_figure(out, report, qfm::kDiscriminativeGroup); });
    write_stream(dir / "fig_svm_comparison.csv",
                 [&](std::ostream& out) { qfm::write_class_figure(out, report, qfm::kSvmGroup); });
    write_stream(dir / "fig_qsvm_vs_vqc.csv",
                 [&](std::ostream& out) { qfm::write_class_figure(out, report, qfm::kReadoutGroup); });

    std::cout << "model        macro    +/- (mean of class CIs)\n";
    for (const auto& m : report.model_summaries) {
        std::cout << std::left << std::setw(12) << qfm::model_name(m.model) << ' ' << std::fixed
                  << std::setprecision(4) << m.macro_mean << "   ";
        if (m.mean_ci_half_width) {
            std::cout << *m.mean_ci_half_width;
        } else {
            std::cout << "-";
        }
        std::cout << '\n';
    }
    std::cout << report.records.size() << " records written to " << dir.string() << '\n';
    return count_failures(report.records) > 0 ? kInternal : kOk;
}

int cmd_sweep(const Options& o) {
    const auto data = qfm::load_dataset(o.run);
    const auto config = o.run.sweep_config();
    const auto dir = prepare_out(o.run);
    const auto report = qfm::qubit_sweep(data, config);

    write_text(dir / "sweep_report.json", qfm::to_json(report));
    write_stream(dir / "sweep_records.csv",
                 [&](std::ostream& out) { qfm::write_records_csv(out, report.records, report.class_names); });
    write_stream(dir / "fig_qubit_sweep.csv", [&](std::ostream& out) { qfm::write_sweep_figure(out, report); });

    std::cout << "qubits  params  mean     ci95\n";
    for (const auto& p : report.points) {
        std::cout << std::setw(6) << p.n_qubits << "  " << std::setw(6) << p.param_count << "  " << std::fixed
                  << std::setprecision(4) << p.mean << "   " << p.ci_half_width.value_or(0.0) << '\n';
    }
    return count_failures(report.records) > 0 ? kInternal : kOk;
}

int cmd_selfcheck(const Options& o) {
    const auto results = qfm::run_selfcheck({.corrupt_gradient = o.corrupt_gradient});
    qfm::print_selfcheck(std::cout, results);
    return qfm::all_passed(results) ? kOk : kSelfcheckFailed;
}

int cmd_kernel_dump(const Options& o) {
    if (o.pair.size() != 2) {
        throw qfm::ConfigError("--pair expects two class ids");
    }
    const auto data = qfm::load_dataset(o.run);
    const auto config = o.run.benchmark_config();
    const int k = data.num_classes();
    if (o.pair[0] == o.pair[1] || std::min(o.pair[0], o.pair[1]) < 0 || std::max(o.pair[0], o.pair[1]) >= k) {
        throw qfm::ConfigError("--pair needs two distinct class ids in [0, " + std::to_string(k) + ")");
    }
    const auto dir = prepare_out(o.run);
    const auto task = qfm::make_pair_task(data, o.pair[0], o.pair[1], config.split, config.pca_components);

    qfm::KernelMatrix train;
    qfm::KernelMatrix test;
    if (o.kernel == "fidelity") {
        const qfm::CircuitSpec spec{config.n_qubits, config.n_blocks, static_cast<int>(task.train.x.cols())};
        auto tc = config.vqc;
        tc.seed = qfm::derive_seed(config.seeds.front(), task.class_a, task.class_b, qfm::ModelKind::Vqc);
        const auto trained = qfm::train_vqc(spec, task.train, task.validation, tc);
        const qfm::GramOptions opts{.workers = config.workers};
        train = qfm::fidelity_gram(spec, trained.best_params.values, task.train.x, opts);
        test = qfm::fidelity_gram(spec, trained.best_params.values, task.test.x, task.train.x, opts);
    } else if (o.kernel == "linear") {
        train = qfm::linear_gram(task.train.x, task.train.x);
        test = qfm::linear_gram(task.test.x, task.train.x);
    } else {
        const double gamma = qfm::gamma_scale(task.train.x);
        train = qfm::rbf_gram(task.train.x, task.train.x, gamma);
        test = qfm::rbf_gram(task.test.x, task.train.x, gamma);
    }
    const std::string stem = "gram_" + o.kernel;
    write_stream(dir / (stem + "_train.bin"), [&](std::ostream& out) { qfm::write_gram(out, train); });
    write_stream(dir / (stem + "_test.bin"), [&](std::ostream& out) { qfm::write_gram(out, test); });

    const auto d = qfm::diagnose(train);
    std::cout << stem << ": train " << train.values.rows() << "x" << train.values.cols() << ", test "
              << test.values.rows() << "x" << test.values.cols() << ", min eigenvalue " << d.min_eigenvalue
              << ", max asymmetry " << d.max_asymmetry << '\n';
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantum feature-map benchmark: variational classifier, trained quantum kernel and baselines"};
    app.require_subcommand(1);
    Options o;

    auto* synth = app.add_subcommand("synth", "Write a deterministic synthetic feature file to OUT/dataset.csv");
    add_data_options(*synth, o);
    add_common(*synth, o);

    auto* bench = app.add_subcommand("benchmark", "One-vs-one benchmark over every class pair, model and seed");
    add_data_options(*bench, o);
    add_run_options(*bench, o);
    add_common(*bench, o);

    auto* sweep = app.add_subcommand("sweep", "VQC accuracy against qubit count");
    add_data_options(*sweep, o);
    add_run_options(*sweep, o);
    sweep->add_option("--sweep-qubits", o.run.sweep_qubits, "Qubit counts to evaluate")->delimiter(',');
    add_common(*sweep, o);

    auto* check = app.add_subcommand("selfcheck", "Fast invariant battery; nonzero exit on any failure");
    check->add_flag("--corrupt-gradient", o.corrupt_gradient, "Test hook: perturb the adjoint gradient")
        ->group("");

    auto* dump = app.add_subcommand("kernel-dump", "Write train and test Gram matrices of one class pair");
    add_data_options(*dump, o);
    add_run_options(*dump, o);
    dump->add_option("--pair", o.pair, "Class ids a,b")->delimiter(',')->expected(2);
    dump->add_option("--kernel", o.kernel, "fidelity, linear or rbf")
        ->check(CLI::IsMember({"fidelity", "linear", "rbf"}))
        ->capture_default_str();
    add_common(*dump, o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfigError;
    }

    try {
        if (check->parsed()) {
            return cmd_selfcheck(o);
        }
        for (auto* cmd : {synth, bench, sweep, dump}) {
            if (cmd->parsed()) {
                finalize(*cmd, o);
            }
        }
        if (synth->parsed()) {
            return cmd_synth(o);
        }
        if (bench->parsed()) {
            return cmd_benchmark(o);
        }
        if (sweep->parsed()) {
            return cmd_sweep(o);
        }
        return cmd_kernel_dump(o);
    } catch (const qfm::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return kConfigError;
    } catch (const qfm::DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return kDataError;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kInternal;
    }
}
