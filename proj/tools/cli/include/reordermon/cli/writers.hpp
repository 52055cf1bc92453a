#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "reordermon/experiment.hpp"
#include "reordermon/lemma.hpp"

namespace reordermon::cli {

struct SweepRow {
  std::string param;
  double value = 0.0;
  EvalResult result;
};

void write_results_csv(std::ostream& out, std::span<const EvalResult> rows);
void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows);
void write_grid_csv(std::ostream& out, std::span<const GridChoice> choices);
void write_grid_best_csv(std::ostream& out, std::span<const GridChoice> choices);

struct NamedLemmaResult {
  std::string name;
  LemmaModel model;
  LemmaResult result;
};

void write_lemma_json(std::ostream& out, std::span<const NamedLemmaResult> results);

/// Writes one file per analysis into `dir`: prefix_stats.csv,
/// ground_truth.csv, pcc.json, interarrival.csv, size_breakdown.csv and
/// summary.json.
void write_analysis(const std::string& dir, const AnalysisBundle& bundle, ReorderDef def);

/// Opens `path` for writing or throws std::runtime_error.
std::ofstream open_output(const std::string& path);

}  // namespace reordermon::cli
