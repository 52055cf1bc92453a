#pragma once

// Exhaustive per-flow reorder accounting. Holds state for every flow, so it
// is the ground truth and the analysis engine, never a detector.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "reordermon/model.hpp"

namespace reordermon {

/// Out-of-order counts indexed by definition (Decrease, Gap, BelowMax).
struct ReorderCounts {
  std::array<std::uint64_t, 3> by_def{};

  std::uint64_t& operator[](ReorderDef d) { return by_def[static_cast<std::size_t>(d) - 1]; }
  std::uint64_t operator[](ReorderDef d) const { return by_def[static_cast<std::size_t>(d) - 1]; }
  friend bool operator==(const ReorderCounts&, const ReorderCounts&) = default;
};

struct FlowStats {
  FlowId flow;
  std::uint64_t n_f = 0;
  ReorderCounts o_f;
};

struct PrefixStats {
  Prefix prefix;
  std::uint64_t n_g = 0;
  ReorderCounts o_g;
  std::uint64_t flow_count = 0;
};

struct OracleStats {
  std::vector<FlowStats> flows;             // first-appearance order
  std::map<Prefix, PrefixStats> prefixes;   // ordered for stable output
  std::uint64_t total_packets = 0;

  const FlowStats* find_flow(const FlowId& f) const;

 private:
  friend OracleStats compute_stats(std::span<const PacketRecord>);
  std::unordered_map<FlowId, std::size_t> index_;
};

OracleStats compute_stats(std::span<const PacketRecord> packets);

struct GroundTruth {
  std::vector<Prefix> heavy_set;          // N_g >= beta and O_g > eps * N_g
  std::vector<Prefix> over_alpha_set;     // N_g > alpha and O_g > eps * N_g
  std::vector<Prefix> small_exempt_set;   // N_g <= alpha
};

GroundTruth ground_truth(const OracleStats& stats, double eps, std::uint64_t alpha, std::uint64_t beta,
                         ReorderDef def);

class UndefinedCorrelationError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// One correlation test: draws `n_samples` flows (with replacement) among flows
/// whose prefix has at least two flows and correlates each flow's out-of-order
/// fraction with the fraction of the rest of its prefix.
double pearson_correlation(const OracleStats& stats, std::size_t n_samples, ReorderDef def,
                           std::uint64_t rng_seed);

struct PccSummary {
  double mean = 0.0;
  std::vector<double> values;     // defined tests only, in run order
  std::size_t undefined_tests = 0;
  std::size_t eligible_flows = 0;
  std::size_t samples_per_test = 0;
};

/// `repetitions` independent tests; n = max(2, round(sample_fraction * |eligible|)).
/// Tests with zero variance are counted in `undefined_tests` and left out of the mean.
PccSummary pearson_correlation_repeated(const OracleStats& stats, std::size_t repetitions,
                                        double sample_fraction, ReorderDef def, std::uint64_t rng_seed);

/// Log2-binned histogram. A zero gap lands in `zero_gaps`.
struct Log2Histogram {
  std::map<int, std::uint64_t> bins;  // bin b holds gaps in [2^b, 2^(b+1))
  std::uint64_t zero_gaps = 0;
  std::uint64_t count = 0;
  double sum = 0.0;

  void add(double gap);
  double mean() const { return count ? sum / static_cast<double>(count) : 0.0; }
};

struct InterarrivalHistograms {
  Log2Histogram in_order;    // not out of order under the requested definition
  Log2Histogram decrease;    // Def1 out-of-order packets
  Log2Histogram gap;         // Def2 out-of-order packets
};

InterarrivalHistograms interarrival_histogram(std::span<const PacketRecord> packets, ReorderDef def);

struct PrefixBreakdown {
  Prefix prefix;
  std::uint64_t n_g = 0;
  std::uint64_t o_g = 0;
  std::vector<std::uint64_t> flow_counts;     // per size bin
  std::vector<std::uint64_t> reorder_counts;  // sum of O_f per size bin
  std::optional<std::vector<double>> reorder_fraction;  // absent when o_g == 0
};

/// Power-of-two lower edges 1, 2, 4, ..., 2^max_exp.
std::vector<std::uint64_t> default_size_bins(int max_exp = 20);

/// `size_bins` are ascending lower edges starting at 1; a flow of size n goes
/// to the last edge <= n.
std::vector<PrefixBreakdown> flow_size_reorder_breakdown(const OracleStats& stats, ReorderDef def,
                                                         std::span<const std::uint64_t> size_bins);

}  // namespace reordermon
