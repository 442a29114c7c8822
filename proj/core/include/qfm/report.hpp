#pragma once

/**
 * @file
 * Report serialization (JSON, lossless round trip) and plot-ready CSV data.
 */

#include "qfm/pipeline.hpp"

#include <array>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>

namespace qfm {

std::string to_json(const EvalReport& report);
std::string to_json(const SweepReport& report);

/// Throw DataError on malformed input.
EvalReport eval_report_from_json(std::string_view text);
SweepReport sweep_report_from_json(std::string_view text);

/// One row per run: pair, model, seed, accuracy, timing and status.
void write_records_csv(std::ostream& out, std::span<const RunRecord> records,
                       std::span<const std::string> class_names);

/// Model groups of the per-class comparison figures.
inline constexpr std::array<ModelKind, 3> kDiscriminativeGroup{ModelKind::LogReg, ModelKind::Mlp, ModelKind::Vqc};
inline constexpr std::array<ModelKind, 3> kSvmGroup{ModelKind::SvmLinear, ModelKind::SvmRbf, ModelKind::SvmQk};
inline constexpr std::array<ModelKind, 2> kReadoutGroup{ModelKind::Vqc, ModelKind::SvmQk};

/**
 * Wide per-class table: `class,<model>_mean,<model>_ci95,...` with one row per
 * class and a final `macro` row. Models absent from the report are skipped;
 * missing values are empty cells. The macro row's ci95 column holds the mean
 * of the per-class half-widths, not an interval for the macro mean.
 */
void write_class_figure(std::ostream& out, const EvalReport& report, std::span<const ModelKind> models);

/// `n_qubits,param_count,mean,ci95,n_pairs,svm_linear_mean,svm_rbf_mean`.
void write_sweep_figure(std::ostream& out, const SweepReport& report);

} // namespace qfm
