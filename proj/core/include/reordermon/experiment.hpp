#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "reordermon/aggregator.hpp"
#include "reordermon/oracle.hpp"
#include "reordermon/report.hpp"

namespace reordermon {

enum class Algorithm : std::uint8_t { Array, HeavyHitter, Hybrid };

std::string_view to_string(Algorithm a);
std::optional<Algorithm> parse_algorithm(std::string_view text);

/// Detector knobs; defaults are the evaluation defaults
/// (T = 2^-15 s, C = 16, R = 1, R_hh = 0.01, d = 2).
struct DetectorParams {
  Algorithm algo = Algorithm::Array;
  ReorderDef def = ReorderDef::Decrease;
  double staleness_seconds = 0x1p-15;
  std::uint64_t count_threshold = 16;
  std::uint64_t report_threshold = 1;
  bool report_all = false;
  std::size_t hh_stages = 2;
  double hh_report_fraction = 0.01;
  std::uint64_t hh_min_report_packets = 16;
  bool hybrid_filter_by_prefix = false;
};

struct ExperimentSpec {
  DetectorParams detector;
  std::vector<std::size_t> buckets{1024};
  std::vector<double> hh_fractions{0.5};  // hybrid only; ignored otherwise
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  double eps = 0.01;
  std::uint64_t alpha = 16;
  std::uint64_t beta = 128;
  double c = 1.0;
  OutputMode mode = OutputMode::CountOnly;
  std::size_t jobs = 1;  // worker threads; results do not depend on it
};

/// Throws std::invalid_argument on an inconsistent spec.
void validate(const ExperimentSpec& spec);

struct DetectorRun {
  std::vector<Report> reports;  // emission order, flush reports last
  std::vector<Prefix> output;   // control-plane output, sorted
  std::uint64_t tallied_reports = 0;
  AccessCounters counters;
};

/// Streams `packets` through one detector configuration and the aggregator.
/// `seed` determines every hash seed and the HH admission RNG.
DetectorRun run_detector(std::span<const PacketRecord> packets, const DetectorParams& params,
                         std::size_t buckets, double hh_fraction, std::uint64_t seed,
                         const AggregatorParams& aggregation);

struct EvalResult {
  Algorithm algo = Algorithm::Array;
  ReorderDef def = ReorderDef::Decrease;
  std::size_t buckets = 0;
  double hh_fraction = 0.0;
  std::uint64_t seed = 0;
  std::optional<double> accuracy;             // absent when the beta truth set is empty
  std::optional<double> false_positive_rate;  // absent when the alpha truth set is empty
  double communication_overhead = 0.0;
  std::uint64_t report_count = 0;
  std::uint64_t output_count = 0;
  std::uint64_t truth_beta_count = 0;
  std::uint64_t truth_alpha_count = 0;
  std::uint64_t packets = 0;
  std::uint64_t max_reads_per_packet = 0;
  std::uint64_t max_writes_per_packet = 0;
};

/// One row per (B, x, seed) in spec order: buckets outermost, seeds innermost.
std::vector<EvalResult> run_experiment(std::span<const PacketRecord> packets, const OracleStats& stats,
                                       const ExperimentSpec& spec);

struct GridPoint {
  double hh_fraction = 0.0;
  double mean_accuracy = 0.0;
};

struct GridChoice {
  std::size_t buckets = 0;
  double best_fraction = 0.0;
  double best_accuracy = 0.0;
  std::vector<GridPoint> curve;
};

std::vector<double> default_hybrid_grid();  // 0.1, 0.2, ..., 0.9

/// Per B, the x in spec.hh_fractions maximizing seed-averaged accuracy; ties
/// go to the smaller x.
std::vector<GridChoice> grid_search_hybrid(std::span<const PacketRecord> packets, const OracleStats& stats,
                                           const ExperimentSpec& spec);

struct AnalysisParams {
  ReorderDef def = ReorderDef::Decrease;
  double eps = 0.01;
  std::uint64_t alpha = 16;
  std::uint64_t beta = 128;
  std::size_t pcc_repetitions = 100;
  double pcc_sample_fraction = 0.005;
  std::uint64_t seed = 1;
};

struct AnalysisBundle {
  OracleStats stats;
  GroundTruth truth;
  std::optional<PccSummary> pcc;  // absent when every test is undefined
  InterarrivalHistograms interarrival;
  std::vector<PrefixBreakdown> breakdown;
  std::vector<std::uint64_t> size_bins;
};

/// Throws std::invalid_argument on an empty trace.
AnalysisBundle analyze(std::span<const PacketRecord> packets, const AnalysisParams& params);

}  // namespace reordermon
