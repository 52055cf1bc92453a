#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "reordermon/model.hpp"

namespace reordermon {

/// Synthetic workload knobs. Prefixes are either on a "bad path" (reordered
/// with bad_reorder_prob per packet) or not (good_reorder_prob), so reordering
/// is correlated across the flows of one prefix.
struct SynthConfig {
  std::uint32_t n_prefixes = 4096;
  double mean_flows_per_prefix = 8.0;
  double flows_per_prefix_zipf_exponent = 1.5;
  std::uint32_t max_flows_per_prefix = 4096;
  double mean_flow_size = 32.0;
  double flow_size_zipf_exponent = 1.3;
  std::uint32_t max_flow_size = 1u << 16;

  double bad_prefix_fraction = 0.05;
  double bad_reorder_prob = 0.1;
  double good_reorder_prob = 0.001;
  std::uint32_t displacement_max = 3;
  // Displaced packets per reordering episode (every other packet of the
  // episode is delayed). 1 gives independent per-packet displacement.
  std::uint32_t reorder_cluster = 4;

  double duration_seconds = 10.0;
  // Per-flow arrivals are bursty: geometric bursts with exponential gaps.
  double mean_burst_packets = 8.0;
  double intra_burst_gap = 4e-6;
  double inter_burst_gap = 0.02;

  std::uint64_t seed = 1;
};

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Throws ConfigError describing the first violated constraint.
void validate(const SynthConfig& cfg);

struct FlowInjection {
  FlowId flow;
  std::uint64_t injected_displacements = 0;
};

struct SyntheticTrace {
  std::vector<PacketRecord> packets;
  std::vector<FlowInjection> sidecar;  // one row per flow, generation order
  std::vector<Prefix> bad_prefixes;    // sorted
};

SyntheticTrace generate_synthetic(const SynthConfig& cfg);

void write_sidecar(std::ostream& out, const std::vector<FlowInjection>& rows);
void write_sidecar_file(const std::string& path, const std::vector<FlowInjection>& rows);

}  // namespace reordermon
