#pragma once

#include <optional>
#include <vector>

#include "reordermon/flow_sampler.hpp"
#include "reordermon/heavy_hitter.hpp"

namespace reordermon {

struct HybridParams {
  std::size_t total_buckets = 1024;  // B
  double hh_fraction = 0.5;          // x: HH gets floor(x*B), the array the rest
  SamplerParams sampler;             // `buckets` is overwritten by the split
  HHParams hh;                       // stage sizes are overwritten by the split
  // Alternative admission rule: the array skips every flow whose prefix has
  // an HH entry, not just the HH-resident flows themselves.
  bool filter_by_prefix = false;
};

/// Spreads `buckets` over `stages` stages, sizes differing by at most one.
std::vector<std::size_t> split_stage_sizes(std::size_t buckets, std::size_t stages);

/// HH table in front of the flow-sampling array. A packet whose flow is
/// resident in the HH table after the HH step never reaches the array.
class HybridDetector {
 public:
  explicit HybridDetector(const HybridParams& params);

  /// Appends 0..2 reports to `out`.
  void process(const PacketRecord& pkt, std::vector<Report>& out);
  std::vector<Report> flush();

  std::size_t hh_buckets() const { return hh_buckets_; }
  std::size_t array_buckets() const { return array_ ? array_->buckets().size() : 0; }
  const std::optional<HeavyHitterTable>& hh() const { return hh_; }
  const std::optional<FlowSampler>& array() const { return array_; }
  const AccessCounters& counters() const { return counters_; }

 private:
  std::size_t hh_buckets_ = 0;
  bool filter_by_prefix_ = false;
  std::optional<HeavyHitterTable> hh_;
  std::optional<FlowSampler> array_;
  AccessCounters counters_;
};

}  // namespace reordermon
