#include "qfm/report.hpp"

#include "qfm/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <iomanip>
#include <ostream>

namespace qfm {

namespace {

using nlohmann::json;

constexpr std::string_view kEvalFormat = "qfm-eval/1";
constexpr std::string_view kSweepFormat = "qfm-sweep/1";

template <class T>
json optional_json(const std::optional<T>& v) {
    return v ? json(*v) : json(nullptr);
}

template <class T>
std::optional<T> optional_from(const json& j) {
    if (j.is_null()) {
        return std::nullopt;
    }
    return j.get<T>();
}

ModelKind model_from(const json& j) {
    const auto name = j.get<std::string>();
    const auto m = parse_model(name);
    if (!m) {
        throw DataError("report: unknown model '" + name + "'");
    }
    return *m;
}

json models_json(std::span<const ModelKind> models) {
    json out = json::array();
    for (const auto m : models) {
        out.push_back(std::string(model_name(m)));
    }
    return out;
}

std::vector<ModelKind> models_from(const json& j) {
    std::vector<ModelKind> out;
    for (const auto& e : j) {
        out.push_back(model_from(e));
    }
    return out;
}

json record_json(const RunRecord& r) {
    json j{{"class_a", r.class_a},   {"class_b", r.class_b},
           {"model", std::string(model_name(r.model))},
           {"seed", r.seed},         {"n_qubits", r.n_qubits},
           {"accuracy", r.accuracy}, {"wall_seconds", r.wall_seconds}};
    if (r.training) {
        j["training"] = {{"epochs_run", r.training->epochs_run},
                         {"best_epoch", r.training->best_epoch},
                         {"best_val_accuracy", r.training->best_val_accuracy},
                         {"loss_trace", r.training->loss_trace}};
    } else {
        j["training"] = nullptr;
    }
    j["error"] = r.ok() ? json(nullptr) : json(r.error);
    return j;
}

RunRecord record_from(const json& j) {
    RunRecord r;
    r.class_a = j.at("class_a").get<int>();
    r.class_b = j.at("class_b").get<int>();
    r.model = model_from(j.at("model"));
    r.seed = j.at("seed").get<std::uint64_t>();
    r.n_qubits = j.at("n_qubits").get<int>();
    r.accuracy = j.at("accuracy").get<double>();
    r.wall_seconds = j.at("wall_seconds").get<double>();
    if (const auto& t = j.at("training"); !t.is_null()) {
        r.training = TrainingSummary{t.at("epochs_run").get<int>(), t.at("best_epoch").get<int>(),
                                     t.at("best_val_accuracy").get<double>(),
                                     t.at("loss_trace").get<std::vector<double>>()};
    }
    if (const auto& e = j.at("error"); !e.is_null()) {
        r.error = e.get<std::string>();
    }
    return r;
}

json records_json(std::span<const RunRecord> records) {
    json out = json::array();
    for (const auto& r : records) {
        out.push_back(record_json(r));
    }
    return out;
}

std::vector<RunRecord> records_from(const json& j) {
    std::vector<RunRecord> out;
    for (const auto& e : j) {
        out.push_back(record_from(e));
    }
    return out;
}

json parse_checked(std::string_view text, std::string_view format) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw DataError(std::string("report: invalid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("format") || j["format"] != format) {
        throw DataError("report: expected format '" + std::string(format) + "'");
    }
    return j;
}

template <class Fn>
auto converting(Fn&& fn) {
    try {
        return fn();
    } catch (const json::exception& e) {
        throw DataError(std::string("report: ") + e.what());
    }
}

void write_optional(std::ostream& out, const std::optional<double>& v) {
    if (v) {
        out << *v;
    }
}

} // namespace

std::string to_json(const EvalReport& report) {
    json j;
    j["format"] = kEvalFormat;
    j["class_names"] = report.class_names;
    j["models"] = models_json(report.models);
    j["seeds"] = report.seeds;
    j["pca_components"] = report.pca_components;
    j["n_qubits"] = report.n_qubits;
    j["records"] = records_json(report.records);

    json pairs = json::array();
    for (const auto& p : report.pair_summaries) {
        pairs.push_back({{"class_a", p.class_a},
                         {"class_b", p.class_b},
                         {"model", std::string(model_name(p.model))},
                         {"mean", p.mean},
                         {"ci95_half_width", optional_json(p.ci_half_width)},
                         {"n_seeds", p.n_seeds}});
    }
    j["pair_summaries"] = std::move(pairs);

    json classes = json::array();
    for (const auto& c : report.class_summaries) {
        classes.push_back({{"class_id", c.class_id},
                           {"model", std::string(model_name(c.model))},
                           {"mean", c.mean},
                           {"ci95_half_width", optional_json(c.ci_half_width)},
                           {"n_pairs", c.n_pairs}});
    }
    j["class_summaries"] = std::move(classes);

    json macro = json::array();
    for (const auto& m : report.model_summaries) {
        macro.push_back({{"model", std::string(model_name(m.model))},
                         {"macro_mean", m.macro_mean},
                         {"mean_of_class_ci95_half_widths", optional_json(m.mean_ci_half_width)},
                         {"n_classes", m.n_classes}});
    }
    j["macro"] = std::move(macro);
    return j.dump(2);
}

EvalReport eval_report_from_json(std::string_view text) {
    const json j = parse_checked(text, kEvalFormat);
    return converting([&] {
        EvalReport r;
        r.class_names = j.at("class_names").get<std::vector<std::string>>();
        r.models = models_from(j.at("models"));
        r.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
        r.pca_components = j.at("pca_components").get<int>();
        r.n_qubits = j.at("n_qubits").get<int>();
        r.records = records_from(j.at("records"));
        for (const auto& p : j.at("pair_summaries")) {
            r.pair_summaries.push_back({p.at("class_a").get<int>(), p.at("class_b").get<int>(),
                                        model_from(p.at("model")), p.at("mean").get<double>(),
                                        optional_from<double>(p.at("ci95_half_width")),
                                        p.at("n_seeds").get<std::size_t>()});
        }
        for (const auto& c : j.at("class_summaries")) {
            r.class_summaries.push_back({c.at("class_id").get<int>(), model_from(c.at("model")),
                                         c.at("mean").get<double>(),
                                         optional_from<double>(c.at("ci95_half_width")),
                                         c.at("n_pairs").get<std::size_t>()});
        }
        for (const auto& m : j.at("macro")) {
            r.model_summaries.push_back({model_from(m.at("model")), m.at("macro_mean").get<double>(),
                                         optional_from<double>(m.at("mean_of_class_ci95_half_widths")),
                                         m.at("n_classes").get<std::size_t>()});
        }
        return r;
    });
}

std::string to_json(const SweepReport& report) {
    json j;
    j["format"] = kSweepFormat;
    j["class_names"] = report.class_names;
    j["seeds"] = report.seeds;
    j["pca_components"] = report.pca_components;
    json points = json::array();
    for (const auto& p : report.points) {
        points.push_back({{"n_qubits", p.n_qubits},
                          {"param_count", p.param_count},
                          {"mean", p.mean},
                          {"ci95_half_width", optional_json(p.ci_half_width)},
                          {"n_pairs", p.n_pairs},
                          {"pair_means", p.pair_means}});
    }
    j["points"] = std::move(points);
    j["svm_linear_mean"] = optional_json(report.svm_linear_mean);
    j["svm_rbf_mean"] = optional_json(report.svm_rbf_mean);
    j["records"] = records_json(report.records);
    return j.dump(2);
}

SweepReport sweep_report_from_json(std::string_view text) {
    const json j = parse_checked(text, kSweepFormat);
    return converting([&] {
        SweepReport r;
        r.class_names = j.at("class_names").get<std::vector<std::string>>();
        r.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
        r.pca_components = j.at("pca_components").get<int>();
        for (const auto& p : j.at("points")) {
            r.points.push_back({p.at("n_qubits").get<int>(), p.at("param_count").get<std::size_t>(),
                                p.at("mean").get<double>(), optional_from<double>(p.at("ci95_half_width")),
                                p.at("n_pairs").get<std::size_t>(), p.at("pair_means").get<std::vector<double>>()});
        }
        r.svm_linear_mean = optional_from<double>(j.at("svm_linear_mean"));
        r.svm_rbf_mean = optional_from<double>(j.at("svm_rbf_mean"));
        r.records = records_from(j.at("records"));
        return r;
    });
}

void write_records_csv(std::ostream& out, std::span<const RunRecord> records,
                       std::span<const std::string> class_names) {
    const auto name = [&](int id) {
        return id >= 0 && static_cast<std::size_t>(id) < class_names.size() ? class_names[static_cast<std::size_t>(id)]
                                                                           : std::to_string(id);
    };
    out << "class_a,class_b,model,seed,n_qubits,accuracy,wall_seconds,epochs_run,best_epoch,status\n";
    out << std::setprecision(17);
    for (const auto& r : records) {
        out << name(r.class_a) << ',' << name(r.class_b) << ',' << model_name(r.model) << ',' << r.seed << ','
            << r.n_qubits << ',' << r.accuracy << ',' << r.wall_seconds << ',';
        if (r.training) {
            out << r.training->epochs_run << ',' << r.training->best_epoch;
        } else {
            out << ',';
        }
        out << ',' << (r.ok() ? "ok" : "failed") << '\n';
    }
}

void write_class_figure(std::ostream& out, const EvalReport& report, std::span<const ModelKind> models) {
    std::vector<ModelKind> present;
    for (const auto m : models) {
        if (std::find(report.models.begin(), report.models.end(), m) != report.models.end()) {
            present.push_back(m);
        }
    }
    out << "class";
    for (const auto m : present) {
        out << ',' << model_name(m) << "_mean," << model_name(m) << "_ci95";
    }
    out << '\n' << std::setprecision(17);

    std::vector<int> classes;
    for (const auto& c : report.class_summaries) {
        if (std::find(classes.begin(), classes.end(), c.class_id) == classes.end()) {
            classes.push_back(c.class_id);
        }
    }
    std::sort(classes.begin(), classes.end());
    for (const int id : classes) {
        out << (static_cast<std::size_t>(id) < report.class_names.size() ? report.class_names[static_cast<std::size_t>(id)]
                                                                         : std::to_string(id));
        for (const auto m : present) {
            const auto it = std::find_if(report.class_summaries.begin(), report.class_summaries.end(),
                                         [&](const ClassSummary& c) { return c.class_id == id && c.model == m; });
            out << ',';
            if (it != report.class_summaries.end()) {
                out << it->mean << ',';
                write_optional(out, it->ci_half_width);
            } else {
                out << ',';
            }
        }
        out << '\n';
    }
    out << "macro";
    for (const auto m : present) {
        const auto it = std::find_if(report.model_summaries.begin(), report.model_summaries.end(),
                                     [&](const ModelSummary& s) { return s.model == m; });
        out << ',';
        if (it != report.model_summaries.end()) {
            out << it->macro_mean << ',';
            write_optional(out, it->mean_ci_half_width);
        } else {
            out << ',';
        }
    }
    out << '\n';
}

void write_sweep_figure(std::ostream& out, const SweepReport& report) {
    out << "n_qubits,param_count,mean,ci95,n_pairs,svm_linear_mean,svm_rbf_mean\n" << std::setprecision(17);
    for (const auto& p : report.points) {
        out << p.n_qubits << ',' << p.param_count << ',' << p.mean << ',';
        write_optional(out, p.ci_half_width);
        out << ',' << p.n_pairs << ',';
        write_optional(out, report.svm_linear_mean);
        out << ',';
        write_optional(out, report.svm_rbf_mean);
        out << '\n';
    }
}

} // namespace qfm
